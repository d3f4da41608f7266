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
"""On-disk cache of eigendecompositions.

Entries are `.npz` files keyed by the surface id, a SHA-256 digest of the
vertex and face bytes, and the number of modes. A changed shape therefore
never hits a stale entry even if it keeps its id.
"""

import hashlib
import os
import re
import tempfile

from absl import logging
import numpy as np

from univspec.geometry import laplacians
from univspec.geometry import surfaces
from univspec.spectral import eigensolver

_UNSAFE_CHARACTERS = re.compile(r'[^A-Za-z0-9_.-]')


def content_hash(surface: surfaces.Surface) -> str:
  digest = hashlib.sha256()
  digest.update(np.ascontiguousarray(surface.vertices).tobytes())
  digest.update(np.ascontiguousarray(surface.faces).tobytes())
  return digest.hexdigest()


class DecompositionCache:
  """A directory of cached decompositions, safe for concurrent readers."""

  def __init__(self, directory: str) -> None:
    self._directory = directory
    os.makedirs(directory, exist_ok=True)

  def path(self, surface: surfaces.Surface, count: int) -> str:
    name = _UNSAFE_CHARACTERS.sub('_', surface.id)
    return os.path.join(self._directory,
                        f'{name}-{content_hash(surface)[:24]}-q{count}.npz')

  def get_or_compute(
      self, surface: surfaces.Surface, count: int,
      discretization: laplacians.Discretization
  ) -> eigensolver.SpectralDecomposition:
    """Returns the decomposition of `surface`, computing it on a miss."""
    pair = discretization.operator(surface.vertices, surface.id)
    path = self.path(surface, count)
    if os.path.exists(path):
      try:
        with np.load(path) as entry:
          decomp = eigensolver.SpectralDecomposition(
              eigenvalues=entry['eigenvalues'],
              eigenfunctions=entry['eigenfunctions'],
              laplacian=pair,
              disconnected=bool(entry['disconnected']),
              max_residual=float(entry['max_residual']))
        if decomp.eigenfunctions.shape == (surface.vertex_count, count + 1):
          return decomp
        logging.warning('Ignoring cache entry %s with unexpected shape', path)
      except (OSError, KeyError, ValueError) as e:
        logging.warning('Ignoring unreadable cache entry %s: %s', path, e)

    decomp = eigensolver.eigendecompose(pair, count)
    # Write to a temporary file first so readers never see a partial entry.
    handle, temporary = tempfile.mkstemp(dir=self._directory, suffix='.npz')
    with os.fdopen(handle, 'wb') as f:
      np.savez(
          f,
          eigenvalues=decomp.eigenvalues,
          eigenfunctions=decomp.eigenfunctions,
          disconnected=decomp.disconnected,
          max_residual=decomp.max_residual)
    os.replace(temporary, path)
    return decomp
