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
"""Versioned binary weight files.

Layout (all integers little-endian):

  magic        8 bytes   b'UNIVSPEC'
  version      uint32    FORMAT_VERSION
  header size  uint32    length of the JSON header in bytes
  header       JSON      class names, widths and the ordered tensor list
  tensors      float64   little-endian, in header order
  checksum     32 bytes  SHA-256 of everything above
"""

import hashlib
import json
import struct

import numpy as np
import torch

from univspec.classifier import pointnet
from univspec.common import errors

MAGIC = b'UNIVSPEC'
FORMAT_VERSION = 1

_PREFIX = struct.Struct('<8sII')
_CHECKSUM_SIZE = 32


class ModelFormatError(errors.InputError):
  """A weight file is truncated, corrupt or of another format version."""


def serialize_model(model: pointnet.ClassifierModel, path: str) -> None:
  """Writes `model` to `path`, bit-exactly."""
  state = model.network.state_dict()
  header = json.dumps(
      {
          'class_names': model.class_names,
          'point_widths': model.point_mlp_widths,
          'head_widths': model.head_widths[:-1],
          'tensors': [{
              'name': name,
              'shape': list(tensor.shape)
          } for name, tensor in state.items()],
      },
      sort_keys=True).encode('utf-8')
  body = [_PREFIX.pack(MAGIC, FORMAT_VERSION, len(header)), header]
  for tensor in state.values():
    body.append(tensor.detach().numpy().astype('<f8').tobytes())
  content = b''.join(body)
  try:
    with open(path, 'wb') as f:
      f.write(content)
      f.write(hashlib.sha256(content).digest())
  except OSError as e:
    raise errors.InputError(f'Unable to write model {path!r}: {e}') from e


def deserialize_model(path: str) -> pointnet.ClassifierModel:
  """Reads a model written by `serialize_model`.

  Raises:
    ModelFormatError: On a foreign file, a version mismatch, a checksum
      failure or truncation. No partially loaded model is ever returned.
    InputError: If the file can not be read.
  """
  try:
    with open(path, 'rb') as f:
      data = f.read()
  except OSError as e:
    raise errors.InputError(f'Unable to read model {path!r}: {e}') from e

  if len(data) < _PREFIX.size + _CHECKSUM_SIZE:
    raise ModelFormatError(f'{path!r} is truncated ({len(data)} bytes)')
  magic, version, header_size = _PREFIX.unpack_from(data)
  if magic != MAGIC:
    raise ModelFormatError(f'{path!r} is not a univspec model file')
  if version != FORMAT_VERSION:
    raise ModelFormatError(
        f'{path!r} has format version {version}, expected {FORMAT_VERSION}')
  content, checksum = data[:-_CHECKSUM_SIZE], data[-_CHECKSUM_SIZE:]
  if hashlib.sha256(content).digest() != checksum:
    raise ModelFormatError(
        f'Checksum mismatch in {path!r}: the file is truncated or corrupt')

  try:
    offset = _PREFIX.size
    header = json.loads(content[offset:offset + header_size].decode('utf-8'))
    offset += header_size
    state = {}
    for spec in header['tensors']:
      count = int(np.prod(spec['shape'], dtype=np.int64))
      array = np.frombuffer(content, dtype='<f8', count=count, offset=offset)
      offset += 8 * count
      state[spec['name']] = torch.from_numpy(
          array.astype(np.float64).reshape(spec['shape']))
    if offset != len(content):
      raise ValueError(f'{len(content) - offset} trailing bytes')
    network = pointnet.PointNet(header['point_widths'], header['head_widths'],
                                len(header['class_names']))
    network.load_state_dict(state)
  except (KeyError, ValueError, RuntimeError) as e:
    raise ModelFormatError(f'Malformed model file {path!r}: {e}') from e
  return pointnet.ClassifierModel(
      network=network, class_names=header['class_names'])
