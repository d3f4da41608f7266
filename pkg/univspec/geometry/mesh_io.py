# Copyright 2026 The univspec Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Readers and writers for OFF, OBJ (v/f records) and ASCII PLY files.

Parse errors carry the 1-based line number of the offending record. Writers
use 17 significant digits so that a save/load round trip reproduces float64
coordinates bit for bit.
"""

import enum
import os
from typing import Iterator, List, Optional, Tuple, Union

import numpy as np

from univspec.common import errors
from univspec.geometry import surfaces

_FLOAT_FORMAT = '%.17g'


class MeshFormatError(errors.InputError):
  """A shape file could not be parsed."""

  def __init__(self, path: str, line: Optional[int], message: str) -> None:
    location = f'{path}:{line}' if line is not None else path
    super().__init__(f'{location}: {message}')
    self.path = path
    self.line = line


class MeshFormat(enum.Enum):
  OFF = 'off'
  OBJ = 'obj'
  PLY = 'ply'

  @classmethod
  def resolve(cls, path: str, fmt: Union[str, 'MeshFormat']) -> 'MeshFormat':
    """Resolves 'auto' (or a format name) to a concrete format."""
    if isinstance(fmt, MeshFormat):
      return fmt
    if fmt == 'auto':
      fmt = os.path.splitext(path)[1].lstrip('.').lower()
    try:
      return cls(fmt.lower())
    except ValueError:
      raise errors.InputError(
          f'Unsupported shape format {fmt!r} for {path!r}; expected one of '
          f'{[f.value for f in cls]!r}') from None


def _records(text: str) -> Iterator[Tuple[int, List[str]]]:
  """Yields (line number, tokens) for non-empty, non-comment lines."""
  for number, line in enumerate(text.splitlines(), start=1):
    line = line.split('#', 1)[0].strip()
    if line:
      yield number, line.split()


def _parse_floats(path: str, line: int, tokens: List[str]) -> List[float]:
  try:
    values = [float(t) for t in tokens]
  except ValueError:
    raise MeshFormatError(path, line,
                          f'expected numbers, got {" ".join(tokens)!r}') from None
  if not all(np.isfinite(values)):
    raise MeshFormatError(path, line, 'non-finite coordinate')
  return values


def _parse_ints(path: str, line: int, tokens: List[str]) -> List[int]:
  try:
    return [int(t) for t in tokens]
  except ValueError:
    raise MeshFormatError(path, line,
                          f'expected integers, got {" ".join(tokens)!r}') from None


def _check_face(path: str, line: int, face: List[int], n: int) -> None:
  if len(face) != 3:
    raise MeshFormatError(path, line,
                          f'only triangles are supported, got {len(face)} '
                          'vertices')
  for index in face:
    if not 0 <= index < n:
      raise MeshFormatError(path, line,
                            f'face index {index} outside [0, {n})')


def _read_off(path: str, text: str) -> Tuple[np.ndarray, np.ndarray]:
  records = list(_records(text))
  if not records or not records[0][1][0].upper().endswith('OFF'):
    raise MeshFormatError(path, records[0][0] if records else None,
                          'missing OFF header')
  header_line, header = records[0]
  counts_tokens = header[1:]
  body = records[1:]
  if not counts_tokens:
    if not body:
      raise MeshFormatError(path, header_line, 'missing element counts')
    header_line, counts_tokens = body[0]
    body = body[1:]
  counts = _parse_ints(path, header_line, counts_tokens)
  if len(counts) < 2:
    raise MeshFormatError(path, header_line, 'expected vertex and face counts')
  n, m = counts[0], counts[1]

  if len(body) != n + m:
    # Point at the first record that does not fit the declared counts.
    offending = body[n + m][0] if len(body) > n + m else (
        body[-1][0] if body else header_line)
    raise MeshFormatError(
        path, offending,
        f'header declares {n} vertices and {m} faces but the body has '
        f'{len(body)} records')

  vertices = []
  for line, tokens in body[:n]:
    values = _parse_floats(path, line, tokens)
    if len(values) < 3:
      raise MeshFormatError(path, line, 'vertex needs 3 coordinates')
    vertices.append(values[:3])
  faces = []
  for line, tokens in body[n:]:
    values = _parse_ints(path, line, tokens)
    if values[0] != len(values) - 1:
      raise MeshFormatError(path, line,
                            f'face declares {values[0]} vertices but lists '
                            f'{len(values) - 1}')
    _check_face(path, line, values[1:], n)
    faces.append(values[1:])
  return np.array(vertices, dtype=np.float64).reshape(-1, 3), np.array(
      faces, dtype=np.int64).reshape(-1, 3)


def _read_obj(path: str, text: str) -> Tuple[np.ndarray, np.ndarray]:
  vertices = []
  face_records = []
  for line, tokens in _records(text):
    if tokens[0] == 'v':
      values = _parse_floats(path, line, tokens[1:])
      if len(values) < 3:
        raise MeshFormatError(path, line, 'vertex needs 3 coordinates')
      vertices.append(values[:3])
    elif tokens[0] == 'f':
      # Only the position index of v/vt/vn triplets is used.
      face_records.append(
          (line, _parse_ints(path, line, [t.split('/')[0] for t in tokens[1:]])))
  n = len(vertices)
  faces = []
  for line, face in face_records:
    # OBJ indices are 1-based; negative indices count from the end.
    face = [i - 1 if i > 0 else n + i for i in face]
    _check_face(path, line, face, n)
    faces.append(face)
  return np.array(vertices, dtype=np.float64).reshape(-1, 3), np.array(
      faces, dtype=np.int64).reshape(-1, 3)


def _read_ply(path: str, text: str) -> Tuple[np.ndarray, np.ndarray]:
  records = list(_records(text))
  if not records or records[0][1] != ['ply']:
    raise MeshFormatError(path, records[0][0] if records else None,
                          'missing ply magic')
  elements = []  # [name, count, [property names]]
  body_start = None
  for index, (line, tokens) in enumerate(records[1:], start=1):
    if tokens[0] == 'format':
      if tokens[1:2] != ['ascii']:
        raise MeshFormatError(path, line, 'only ascii PLY is supported')
    elif tokens[0] == 'element':
      elements.append([tokens[1], _parse_ints(path, line, tokens[2:3])[0], []])
    elif tokens[0] == 'property':
      if not elements:
        raise MeshFormatError(path, line, 'property outside an element')
      elements[-1][2].append(tokens[-1])
    elif tokens[0] == 'end_header':
      body_start = index + 1
      break
  if body_start is None:
    raise MeshFormatError(path, None, 'missing end_header')

  body = records[body_start:]
  expected = sum(count for _, count, _ in elements)
  if len(body) != expected:
    offending = body[expected][0] if len(body) > expected else (
        body[-1][0] if body else records[body_start - 1][0])
    raise MeshFormatError(
        path, offending,
        f'header declares {expected} element records but the body has '
        f'{len(body)}')

  vertices = np.zeros((0, 3))
  faces = np.zeros((0, 3), dtype=np.int64)
  cursor = 0
  for name, count, properties in elements:
    chunk = body[cursor:cursor + count]
    cursor += count
    if name == 'vertex':
      try:
        columns = [properties.index(axis) for axis in ('x', 'y', 'z')]
      except ValueError:
        raise MeshFormatError(path, None,
                              'vertex element lacks x/y/z properties') from None
      vertices = np.array(
          [[_parse_floats(path, line, tokens)[c] for c in columns]
           for line, tokens in chunk],
          dtype=np.float64).reshape(-1, 3)
    elif name == 'face':
      parsed = []
      for line, tokens in chunk:
        values = _parse_ints(path, line, tokens)
        if values[0] != len(values) - 1:
          raise MeshFormatError(path, line,
                                f'face declares {values[0]} vertices but '
                                f'lists {len(values) - 1}')
        _check_face(path, line, values[1:], len(vertices))
        parsed.append(values[1:])
      faces = np.array(parsed, dtype=np.int64).reshape(-1, 3)
  return vertices, faces


_READERS = {
    MeshFormat.OFF: _read_off,
    MeshFormat.OBJ: _read_obj,
    MeshFormat.PLY: _read_ply,
}


def load_surface(path: str,
                 format: Union[str, MeshFormat] = 'auto',  # pylint: disable=redefined-builtin
                 surface_id: Optional[str] = None,
                 label: Optional[int] = None) -> surfaces.Surface:
  """Reads a shape file.

  Args:
    path: File to read.
    format: 'off', 'obj', 'ply' or 'auto' (deduced from the extension).
    surface_id: Identifier of the result. Defaults to the file name stem.
    label: Optional class index attached to the result.

  Returns:
    A validated Surface; a point cloud when the file has no faces.

  Raises:
    MeshFormatError: On malformed content, with the offending line number.
    InputError: If the file can not be read.
  """
  fmt = MeshFormat.resolve(path, format)
  try:
    with open(path, 'r', encoding='utf-8') as f:
      text = f.read()
  except OSError as e:
    raise errors.InputError(f'Unable to read {path!r}: {e}') from e
  vertices, faces = _READERS[fmt](path, text)
  if len(vertices) == 0:
    raise MeshFormatError(path, None, 'no vertices')
  if surface_id is None:
    surface_id = os.path.splitext(os.path.basename(path))[0]
  return surfaces.Surface(
      vertices=vertices, faces=faces, id=surface_id, label=label)


def _format_vertex(row: np.ndarray) -> str:
  return ' '.join(_FLOAT_FORMAT % value for value in row)


def _off_lines(surface: surfaces.Surface) -> Iterator[str]:
  yield 'OFF'
  yield f'{surface.vertex_count} {surface.face_count} 0'
  for row in surface.vertices:
    yield _format_vertex(row)
  for a, b, c in surface.faces:
    yield f'3 {a} {b} {c}'


def _obj_lines(surface: surfaces.Surface) -> Iterator[str]:
  for row in surface.vertices:
    yield 'v ' + _format_vertex(row)
  for a, b, c in surface.faces:
    yield f'f {a + 1} {b + 1} {c + 1}'


def _ply_lines(surface: surfaces.Surface) -> Iterator[str]:
  yield 'ply'
  yield 'format ascii 1.0'
  yield f'element vertex {surface.vertex_count}'
  yield 'property double x'
  yield 'property double y'
  yield 'property double z'
  yield f'element face {surface.face_count}'
  yield 'property list uchar int vertex_indices'
  yield 'end_header'
  for row in surface.vertices:
    yield _format_vertex(row)
  for a, b, c in surface.faces:
    yield f'3 {a} {b} {c}'


_WRITERS = {
    MeshFormat.OFF: _off_lines,
    MeshFormat.OBJ: _obj_lines,
    MeshFormat.PLY: _ply_lines,
}


def save_surface(surface: surfaces.Surface,
                 path: str,
                 format: Union[str, MeshFormat] = 'auto') -> None:  # pylint: disable=redefined-builtin
  """Writes a shape file that `load_surface` reads back to an equal Surface.

  Point clouds are written with zero faces.

  Raises:
    InputError: If the destination can not be written.
  """
  fmt = MeshFormat.resolve(path, format)
  try:
    with open(path, 'w', encoding='utf-8') as f:
      for line in _WRITERS[fmt](surface):
        f.write(line)
        f.write('\n')
  except OSError as e:
    raise errors.InputError(f'Unable to write {path!r}: {e}') from e
