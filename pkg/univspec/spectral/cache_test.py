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
"""Tests for univspec.spectral.cache."""

import os
from unittest import mock

from absl.testing import absltest
import numpy as np

from univspec.common import testing
from univspec.geometry import laplacians
from univspec.spectral import cache
from univspec.spectral import eigensolver


class DecompositionCacheTest(absltest.TestCase):

  def setUp(self):
    super().setUp()
    self.directory = self.create_tempdir().full_path
    self.mesh = testing.irregular_sphere(100, surface_id='shape/01')
    self.discretization = laplacians.discretization_for(self.mesh)

  def test_miss_then_hit(self):
    entries = cache.DecompositionCache(self.directory)
    first = entries.get_or_compute(self.mesh, 6, self.discretization)
    path = entries.path(self.mesh, 6)
    self.assertTrue(os.path.exists(path))
    self.assertEqual(os.path.dirname(path), self.directory)
    with mock.patch.object(
        eigensolver, 'eigendecompose', side_effect=AssertionError('recomputed')):
      second = entries.get_or_compute(self.mesh, 6, self.discretization)
    np.testing.assert_array_equal(second.eigenvalues, first.eigenvalues)
    np.testing.assert_array_equal(second.eigenfunctions, first.eigenfunctions)

  def test_key_depends_on_geometry_and_mode_count(self):
    entries = cache.DecompositionCache(self.directory)
    moved = self.mesh.with_vertices(self.mesh.vertices * 1.01)
    self.assertNotEqual(entries.path(self.mesh, 6), entries.path(moved, 6))
    self.assertNotEqual(entries.path(self.mesh, 6), entries.path(self.mesh, 7))
    self.assertEqual(
        cache.content_hash(self.mesh),
        cache.content_hash(self.mesh.with_vertices(self.mesh.vertices)))

  def test_corrupt_entry_is_recomputed(self):
    entries = cache.DecompositionCache(self.directory)
    with open(entries.path(self.mesh, 5), 'w') as f:
      f.write('garbage')
    decomp = entries.get_or_compute(self.mesh, 5, self.discretization)
    self.assertEqual(decomp.q, 5)
    with np.load(entries.path(self.mesh, 5)) as entry:
      np.testing.assert_array_equal(entry['eigenvalues'], decomp.eigenvalues)


if __name__ == '__main__':
  absltest.main()
