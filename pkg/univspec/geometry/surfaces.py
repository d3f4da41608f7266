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
"""Immutable 3D shapes: triangle meshes and point clouds.

A `Surface` owns read-only copies of its coordinate and connectivity arrays,
so instances can be shared across threads. Every operation that changes
geometry returns a new `Surface` with the same connectivity.
"""

import enum
from typing import Optional

from absl import logging
import attr
import numpy as np

from univspec.common import errors


class SurfaceError(errors.InputError):
  """A surface violates one of its structural invariants."""


class SurfaceKind(enum.Enum):
  """How the surface is discretized."""

  MESH = 'mesh'
  CLOUD = 'cloud'

  def __str__(self):
    return self.value


def _frozen_vertices(value) -> np.ndarray:
  vertices = np.array(value, dtype=np.float64, copy=True)
  if vertices.ndim != 2 or vertices.shape[1] != 3:
    raise SurfaceError(
        f'Vertices must be an n x 3 array, got shape {vertices.shape!r}')
  vertices.setflags(write=False)
  return vertices


def _frozen_faces(value) -> np.ndarray:
  faces = np.array(value, dtype=np.int64, copy=True)
  if faces.size == 0:
    faces = faces.reshape(0, 3)
  if faces.ndim != 2 or faces.shape[1] != 3:
    raise SurfaceError(
        f'Faces must be an m x 3 array, got shape {faces.shape!r}')
  faces.setflags(write=False)
  return faces


def edges(faces: np.ndarray) -> np.ndarray:
  """Returns the unique undirected edges of a triangle list, sorted."""
  if faces.size == 0:
    return np.zeros((0, 2), dtype=np.int64)
  pairs = np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]])
  return np.unique(np.sort(pairs, axis=1), axis=0)


def _edge_face_counts(faces: np.ndarray):
  pairs = np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]])
  return np.unique(np.sort(pairs, axis=1), axis=0, return_counts=True)


@attr.s(auto_attribs=True, frozen=True, eq=False, repr=False)
class Surface:
  """A shape X in R^{n x 3}, either a triangle mesh or a point cloud.

  Attributes:
    vertices: n x 3 float64 coordinates. Read-only.
    faces: m x 3 int64 vertex indices, empty for point clouds. Read-only.
    id: Stable identifier, used in manifests, caches and reports.
    label: Optional class index of the shape.
    manifold: Advisory flag; False if some edge is shared by more than two
      faces. Computed on construction.
  """

  vertices: np.ndarray = attr.ib(converter=_frozen_vertices)
  faces: np.ndarray = attr.ib(
      converter=_frozen_faces, factory=lambda: np.zeros((0, 3), np.int64))
  id: str = 'surface'
  label: Optional[int] = None
  manifold: bool = attr.ib(init=False, default=True)

  def __attrs_post_init__(self):
    n = len(self.vertices)
    if n == 0:
      raise SurfaceError(f'Surface {self.id!r} has no vertices')
    if not np.all(np.isfinite(self.vertices)):
      bad = int(np.argwhere(~np.isfinite(self.vertices))[0, 0])
      raise SurfaceError(
          f'Surface {self.id!r} has a non-finite coordinate at vertex {bad}')
    if self.faces.size:
      if self.faces.min() < 0 or self.faces.max() >= n:
        bad = int(np.argwhere((self.faces < 0) | (self.faces >= n))[0, 0])
        raise SurfaceError(
            f'Surface {self.id!r}: face {bad} {self.faces[bad].tolist()!r} '
            f'references a vertex outside [0, {n})')
      f = self.faces
      repeated = (f[:, 0] == f[:, 1]) | (f[:, 1] == f[:, 2]) | (
          f[:, 2] == f[:, 0])
      if np.any(repeated):
        bad = int(np.argmax(repeated))
        raise SurfaceError(
            f'Surface {self.id!r}: face {bad} {f[bad].tolist()!r} repeats a '
            'vertex')
      _, counts = _edge_face_counts(f)
      if np.any(counts > 2):
        object.__setattr__(self, 'manifold', False)
        logging.warning('Surface %r has %d non-manifold edges', self.id,
                        int(np.sum(counts > 2)))

  def __repr__(self) -> str:
    return (f'Surface(id={self.id!r}, kind={self.kind}, '
            f'n={self.vertex_count}, m={self.face_count}, label={self.label})')

  @property
  def kind(self) -> SurfaceKind:
    return SurfaceKind.MESH if self.faces.size else SurfaceKind.CLOUD

  @property
  def is_mesh(self) -> bool:
    return self.kind == SurfaceKind.MESH

  @property
  def vertex_count(self) -> int:
    return len(self.vertices)

  @property
  def face_count(self) -> int:
    return len(self.faces)

  def with_vertices(self, vertices: np.ndarray, id: Optional[str] = None) -> 'Surface':  # pylint: disable=redefined-builtin
    """Returns a copy with new coordinates and the same connectivity."""
    vertices = np.asarray(vertices, dtype=np.float64)
    if vertices.shape != self.vertices.shape:
      raise ValueError(
          f'Expected vertices of shape {self.vertices.shape!r}, got '
          f'{vertices.shape!r}')
    return Surface(
        vertices=vertices,
        faces=self.faces,
        id=self.id if id is None else id,
        label=self.label)

  def with_label(self, label: Optional[int]) -> 'Surface':
    return attr.evolve(self, label=label)


def face_areas(vertices: np.ndarray, faces: np.ndarray) -> np.ndarray:
  """Returns the area of every triangle."""
  e1 = vertices[faces[:, 1]] - vertices[faces[:, 0]]
  e2 = vertices[faces[:, 2]] - vertices[faces[:, 0]]
  return 0.5 * np.linalg.norm(np.cross(e1, e2), axis=1)


def surface_area(surface: Surface) -> float:
  """Total area of a mesh."""
  if not surface.is_mesh:
    raise SurfaceError(f'Surface {surface.id!r} is a point cloud; it has no '
                       'area')
  return float(np.sum(face_areas(surface.vertices, surface.faces)))


def euler_characteristic(surface: Surface) -> int:
  """V - E + F; equals 2 for closed genus-0 meshes."""
  return (surface.vertex_count - len(edges(surface.faces)) +
          surface.face_count)


def boundary_vertices(surface: Surface) -> np.ndarray:
  """Boolean mask of vertices on an edge that belongs to a single face."""
  mask = np.zeros(surface.vertex_count, dtype=bool)
  if not surface.is_mesh:
    return mask
  unique_edges, counts = _edge_face_counts(surface.faces)
  mask[unique_edges[counts == 1].ravel()] = True
  return mask


def bounding_box_diagonal(surface: Surface) -> float:
  extent = surface.vertices.max(axis=0) - surface.vertices.min(axis=0)
  return float(np.linalg.norm(extent))


def transform(surface: Surface,
              rotation: np.ndarray = np.eye(3),
              translation: np.ndarray = np.zeros(3),
              scale: float = 1.0) -> Surface:
  """Applies x -> scale * R x + t to every vertex.

  Args:
    surface: Shape to move.
    rotation: 3x3 orthonormal matrix (reflections are accepted).
    translation: 3-vector.
    scale: Positive uniform scale.

  Returns:
    A new surface with the same connectivity, id and label.

  Raises:
    ValueError: If the rotation is not orthonormal within 1e-10 or the scale
      is not positive.
  """
  rotation = np.asarray(rotation, dtype=np.float64)
  translation = np.asarray(translation, dtype=np.float64).reshape(3)
  if rotation.shape != (3, 3):
    raise ValueError(f'Rotation must be 3x3, got {rotation.shape!r}')
  deviation = np.max(np.abs(rotation.T @ rotation - np.eye(3)))
  if deviation > 1e-10:
    raise ValueError(
        f'Rotation is not orthonormal (max deviation {deviation:.3g})')
  if not scale > 0:
    raise ValueError(f'Scale must be positive, got {scale!r}')
  return surface.with_vertices(scale * surface.vertices @ rotation.T +
                               translation)


def apply_displacement(surface: Surface, basis: np.ndarray,
                       coefficients: np.ndarray) -> Surface:
  """Returns X + basis @ coefficients, a band-limited deformation of X.

  Args:
    surface: The shape X with n vertices.
    basis: n x b matrix whose columns are smooth scalar fields (typically the
      first b Laplacian eigenfunctions of X).
    coefficients: b x 3 expansion coefficients, one column per axis.

  Returns:
    The displaced surface; connectivity is unchanged.
  """
  basis = np.asarray(basis, dtype=np.float64)
  coefficients = np.asarray(coefficients, dtype=np.float64)
  if basis.ndim != 2 or basis.shape[0] != surface.vertex_count:
    raise ValueError(
        f'Basis of shape {basis.shape!r} does not match '
        f'{surface.vertex_count} vertices of {surface.id!r}')
  if coefficients.shape != (basis.shape[1], 3):
    raise ValueError(
        f'Coefficients of shape {coefficients.shape!r} do not match a basis '
        f'with {basis.shape[1]} columns')
  return surface.with_vertices(surface.vertices + basis @ coefficients)


def normalize_area(surface: Surface, target_area: float = 1.0) -> Surface:
  """Rescales a mesh about its centroid so that its total area is given."""
  area = surface_area(surface)
  scale = np.sqrt(target_area / area)
  centroid = surface.vertices.mean(axis=0)
  return surface.with_vertices(centroid + scale *
                               (surface.vertices - centroid))
