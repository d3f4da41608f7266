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
"""Tests for univspec.spectral.eigen_gradients."""

from absl.testing import absltest
from absl.testing import parameterized
import numpy as np

from univspec.common import testing
from univspec.corpus import primitives
from univspec.geometry import laplacians
from univspec.geometry import surfaces
from univspec.spectral import eigen_gradients
from univspec.spectral import eigensolver

_STEP = 1e-5


def _eigenvalue(discretization, vertices, index, count=8):
  pair = discretization.operator(vertices)
  return eigensolver.eigendecompose(pair, count).eigenvalues[index]


def _directional_check(test, discretization, vertices, gradient, index, seed):
  direction = np.random.default_rng(seed).standard_normal(vertices.shape)
  numeric = (_eigenvalue(discretization, vertices + _STEP * direction, index) -
             _eigenvalue(discretization, vertices - _STEP * direction, index)
            ) / (2 * _STEP)
  analytic = float(np.sum(gradient * direction))
  scale = np.linalg.norm(gradient) * np.linalg.norm(direction)
  test.assertLess(abs(numeric - analytic), 1e-4 * scale)


class MeshGradientTest(parameterized.TestCase):

  def setUp(self):
    super().setUp()
    self.mesh = testing.elongated_sphere(120, seed=4)
    self.decomp = eigensolver.eigendecompose(
        laplacians.laplacian(self.mesh), 8)
    self.discretization = laplacians.discretization_for(self.mesh)

  @parameterized.parameters(1, 2, 3, 5)
  def test_matches_finite_differences(self, index):
    gradient = eigen_gradients.eigenvalue_gradient(self.mesh, self.decomp,
                                                   index)
    for seed in range(3):
      _directional_check(self, self.discretization, self.mesh.vertices,
                         gradient, index, seed)

  def test_difference_error_shrinks_quadratically(self):
    index = 2
    gradient = eigen_gradients.eigenvalue_gradient(self.mesh, self.decomp,
                                                   index)
    direction = np.random.default_rng(11).standard_normal(
        self.mesh.vertices.shape)
    analytic = float(np.sum(gradient * direction))

    def along(t):
      return _eigenvalue(self.discretization,
                         self.mesh.vertices + t[0] * direction, index)

    errors = [
        abs(testing.central_difference(along, np.zeros(1), step)[0] -
            analytic) for step in (8e-3, 4e-3, 2e-3)
    ]
    for coarse, fine in zip(errors[:-1], errors[1:]):
      self.assertBetween(coarse / fine, 3.0, 5.5)

  def test_rigid_and_scaling_identities(self):
    index = 2
    gradient = eigen_gradients.eigenvalue_gradient(self.mesh, self.decomp,
                                                   index)
    scale = np.abs(gradient).max()
    # Translation invariance.
    np.testing.assert_allclose(gradient.sum(axis=0), 0.0, atol=1e-9 * scale)
    # Rotation invariance.
    np.testing.assert_allclose(
        np.cross(self.mesh.vertices, gradient).sum(axis=0),
        0.0,
        atol=1e-9 * scale)
    # lambda(s X) = lambda(X) / s^2.
    self.assertAlmostEqual(
        float(np.sum(self.mesh.vertices * gradient)),
        -2.0 * self.decomp.eigenvalues[index],
        delta=1e-8 * self.decomp.eigenvalues[index])

  def test_weighted_gradient_is_linear(self):
    weights = np.zeros(self.decomp.q + 1)
    weights[[1, 3]] = [2.0, -0.5]
    combined = eigen_gradients.weighted_eigenvalue_gradient(
        self.discretization, self.mesh.vertices, self.decomp, weights)
    expected = (
        2.0 * eigen_gradients.eigenvalue_gradient(self.mesh, self.decomp, 1) -
        0.5 * eigen_gradients.eigenvalue_gradient(self.mesh, self.decomp, 3))
    np.testing.assert_allclose(combined, expected, atol=1e-12)

  def test_zero_weights(self):
    np.testing.assert_array_equal(
        eigen_gradients.weighted_eigenvalue_gradient(
            self.discretization, self.mesh.vertices, self.decomp,
            np.zeros(self.decomp.q + 1)), 0.0)

  def test_weight_length(self):
    with self.assertRaises(ValueError):
      eigen_gradients.weighted_eigenvalue_gradient(
          self.discretization, self.mesh.vertices, self.decomp, np.ones(3))

  def test_repeated_eigenvalue(self):
    sphere = primitives.icosphere(2)
    decomp = eigensolver.eigendecompose(laplacians.laplacian(sphere), 4)
    with self.assertRaises(eigensolver.DegenerateEigenvalueError):
      eigen_gradients.eigenvalue_gradient(sphere, decomp, 1)

  def test_cloud_needs_a_discretization(self):
    cloud = surfaces.Surface(vertices=self.mesh.vertices)
    with self.assertRaises(surfaces.SurfaceError):
      eigen_gradients.eigenvalue_gradient(cloud, self.decomp, 1)


class GraphGradientTest(parameterized.TestCase):

  @parameterized.parameters(1, 2, 4)
  def test_matches_finite_differences(self, index):
    cloud = surfaces.Surface(vertices=testing.elongated_sphere(150).vertices)
    discretization = laplacians.discretization_for(cloud)
    decomp = eigensolver.eigendecompose(
        discretization.operator(cloud.vertices), 8)
    self.assertFalse(eigensolver.degeneracy_flags(decomp)[index])
    weights = np.zeros(decomp.q + 1)
    weights[index] = 1.0
    gradient = eigen_gradients.weighted_eigenvalue_gradient(
        discretization, cloud.vertices, decomp, weights)
    for seed in range(3):
      _directional_check(self, discretization, cloud.vertices, gradient, index,
                         seed)


if __name__ == '__main__':
  absltest.main()
