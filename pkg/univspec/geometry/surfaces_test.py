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
"""Tests for univspec.geometry.surfaces."""

from absl.testing import absltest
from absl.testing import parameterized
import numpy as np

from univspec.common import testing
from univspec.corpus import primitives
from univspec.geometry import surfaces

_TRIANGLE = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])


class SurfaceTest(parameterized.TestCase):

  def test_mesh_and_cloud_kinds(self):
    mesh = surfaces.Surface(vertices=_TRIANGLE, faces=[[0, 1, 2]])
    cloud = surfaces.Surface(vertices=_TRIANGLE)
    self.assertEqual(mesh.kind, surfaces.SurfaceKind.MESH)
    self.assertEqual(cloud.kind, surfaces.SurfaceKind.CLOUD)
    self.assertEqual(cloud.faces.shape, (0, 3))

  def test_arrays_are_read_only_copies(self):
    vertices = _TRIANGLE.copy()
    mesh = surfaces.Surface(vertices=vertices, faces=[[0, 1, 2]])
    vertices[0, 0] = 5.0
    self.assertEqual(mesh.vertices[0, 0], 0.0)
    with self.assertRaises(ValueError):
      mesh.vertices[0, 0] = 1.0

  @parameterized.named_parameters(
      ('wrong_width', np.zeros((3, 2)), [[0, 1, 2]], 'n x 3'),
      ('no_vertices', np.zeros((0, 3)), [], 'no vertices'),
      ('non_finite', [[0, 0, 0], [1, np.nan, 0], [0, 1, 0]], [[0, 1, 2]],
       'non-finite coordinate at vertex 1'),
      ('out_of_range', _TRIANGLE, [[0, 1, 3]], 'outside'),
      ('repeated_vertex', _TRIANGLE, [[0, 1, 1]], 'repeats a vertex'),
  )
  def test_rejects_invalid(self, vertices, faces, message):
    with self.assertRaisesRegex(surfaces.SurfaceError, message):
      surfaces.Surface(vertices=vertices, faces=faces)

  def test_non_manifold_edge_is_flagged(self):
    vertices = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, -1, 0],
                         [0, 0, 1]], dtype=float)
    mesh = surfaces.Surface(
        vertices=vertices, faces=[[0, 1, 2], [0, 1, 3], [0, 1, 4]])
    self.assertFalse(mesh.manifold)
    self.assertTrue(primitives.icosphere(1).manifold)

  def test_with_vertices_keeps_connectivity(self):
    sphere = primitives.icosphere(1, surface_id='s')
    moved = sphere.with_vertices(sphere.vertices * 2.0)
    np.testing.assert_array_equal(moved.faces, sphere.faces)
    self.assertEqual(moved.id, 's')
    with self.assertRaises(ValueError):
      sphere.with_vertices(sphere.vertices[:-1])

  def test_with_label(self):
    self.assertEqual(primitives.icosphere(0).with_label(2).label, 2)


class GeometryHelpersTest(parameterized.TestCase):

  @parameterized.parameters(0, 1, 2, 3)
  def test_icosphere_is_closed_genus_zero(self, subdivisions):
    sphere = primitives.icosphere(subdivisions)
    self.assertEqual(sphere.vertex_count, 10 * 4**subdivisions + 2)
    self.assertEqual(surfaces.euler_characteristic(sphere), 2)
    self.assertFalse(np.any(surfaces.boundary_vertices(sphere)))

  def test_sphere_area(self):
    area = surfaces.surface_area(primitives.icosphere(3))
    self.assertAlmostEqual(area, 4 * np.pi, delta=0.02 * 4 * np.pi)

  def test_cloud_has_no_area(self):
    with self.assertRaises(surfaces.SurfaceError):
      surfaces.surface_area(surfaces.Surface(vertices=_TRIANGLE))

  def test_grid_boundary(self):
    grid = primitives.flat_grid(4)
    self.assertEqual(grid.vertex_count, 25)
    self.assertEqual(int(np.sum(surfaces.boundary_vertices(grid))), 16)
    self.assertAlmostEqual(surfaces.surface_area(grid), 16.0)

  def test_edges(self):
    np.testing.assert_array_equal(
        surfaces.edges(np.array([[0, 1, 2], [2, 1, 3]])),
        [[0, 1], [0, 2], [1, 2], [1, 3], [2, 3]])

  def test_bounding_box_diagonal(self):
    self.assertAlmostEqual(
        surfaces.bounding_box_diagonal(primitives.flat_grid(3)),
        3 * np.sqrt(2))

  def test_transform_is_rigid(self):
    sphere = testing.irregular_sphere(60)
    rotation = testing.random_rotation(4)
    moved = surfaces.transform(sphere, rotation, translation=[1.0, 2.0, 3.0])
    np.testing.assert_allclose(
        moved.vertices, sphere.vertices @ rotation.T + [1.0, 2.0, 3.0])
    self.assertAlmostEqual(
        surfaces.surface_area(moved), surfaces.surface_area(sphere))

  def test_transform_scales_area(self):
    sphere = primitives.icosphere(2)
    scaled = surfaces.transform(sphere, scale=3.0)
    self.assertAlmostEqual(
        surfaces.surface_area(scaled), 9.0 * surfaces.surface_area(sphere))

  @parameterized.parameters(
      dict(rotation=np.diag([1.0, 1.0, 2.0]), scale=1.0),
      dict(rotation=np.eye(3), scale=0.0),
  )
  def test_transform_rejects(self, rotation, scale):
    with self.assertRaises(ValueError):
      surfaces.transform(primitives.icosphere(0), rotation, scale=scale)

  def test_apply_displacement(self):
    sphere = primitives.icosphere(1)
    basis = np.ones((sphere.vertex_count, 1))
    moved = surfaces.apply_displacement(sphere, basis, [[0.5, 0.0, -1.0]])
    np.testing.assert_allclose(moved.vertices,
                               sphere.vertices + [0.5, 0.0, -1.0])
    with self.assertRaises(ValueError):
      surfaces.apply_displacement(sphere, basis, np.zeros((2, 3)))

  def test_normalize_area(self):
    sphere = testing.irregular_sphere(100)
    normalized = surfaces.normalize_area(sphere)
    self.assertAlmostEqual(surfaces.surface_area(normalized), 1.0)
    np.testing.assert_allclose(
        normalized.vertices.mean(axis=0), sphere.vertices.mean(axis=0),
        atol=1e-12)


if __name__ == '__main__':
  absltest.main()
