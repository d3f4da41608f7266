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
"""Tests for univspec.corpus.primitives."""

from absl.testing import absltest
from absl.testing import parameterized
import numpy as np

from univspec.corpus import primitives
from univspec.geometry import surfaces


def _signed_volume(mesh):
  a, b, c = (mesh.vertices[mesh.faces[:, i]] for i in range(3))
  return float(np.einsum('ij,ij->i', a, np.cross(b, c)).sum() / 6.0)


class PrimitivesTest(parameterized.TestCase):

  def test_icosphere_radius(self):
    sphere = primitives.icosphere(2, radius=3.0)
    np.testing.assert_allclose(np.linalg.norm(sphere.vertices, axis=1), 3.0)
    self.assertGreater(_signed_volume(sphere), 0.0)

  def test_icosphere_rejects_negative_subdivisions(self):
    with self.assertRaises(ValueError):
      primitives.icosphere(-1)

  def test_fibonacci_points_are_on_the_sphere(self):
    points = primitives.fibonacci_sphere(
        200, np.random.default_rng(0), jitter=0.25)
    self.assertEqual(points.shape, (200, 3))
    np.testing.assert_allclose(np.linalg.norm(points, axis=1), 1.0)

  @parameterized.parameters(12, 100, 700)
  def test_sphere_mesh_is_closed_and_outward(self, vertex_count):
    mesh = primitives.sphere_mesh(vertex_count, seed=3)
    self.assertEqual(mesh.vertex_count, vertex_count)
    self.assertEqual(surfaces.euler_characteristic(mesh), 2)
    self.assertGreater(_signed_volume(mesh), 0.0)
    normals = np.cross(
        mesh.vertices[mesh.faces[:, 1]] - mesh.vertices[mesh.faces[:, 0]],
        mesh.vertices[mesh.faces[:, 2]] - mesh.vertices[mesh.faces[:, 0]])
    centres = mesh.vertices[mesh.faces].mean(axis=1)
    self.assertTrue(np.all(np.einsum('ij,ij->i', normals, centres) > 0))

  def test_sphere_mesh_is_seeded(self):
    np.testing.assert_array_equal(
        primitives.sphere_mesh(50, seed=1).vertices,
        primitives.sphere_mesh(50, seed=1).vertices)
    self.assertFalse(
        np.array_equal(
            primitives.sphere_mesh(50, seed=1).vertices,
            primitives.sphere_mesh(50, seed=2).vertices))

  def test_sphere_mesh_minimum(self):
    with self.assertRaises(ValueError):
      primitives.sphere_mesh(11)

  def test_flat_grid(self):
    grid = primitives.flat_grid(3, spacing=0.5)
    self.assertEqual((grid.vertex_count, grid.face_count), (16, 18))
    np.testing.assert_array_equal(grid.vertices[:, 2], 0.0)
    with self.assertRaises(ValueError):
      primitives.flat_grid(0)


if __name__ == '__main__':
  absltest.main()
