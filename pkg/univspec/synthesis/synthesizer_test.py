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
"""Tests for univspec.synthesis.synthesizer."""

from absl.testing import absltest
from absl.testing import parameterized

import numpy as np

from univspec.attack import objectives
from univspec.attack import results
from univspec.common import testing
from univspec.geometry import laplacians
from univspec.geometry import surfaces
from univspec.spectral import eigensolver
from univspec.synthesis import synthesizer

_CONFIG = synthesizer.SynthesisConfig(
    k=4, b=6, iterations=30, learning_rate=1e-2, log_every=10)


class PerturbSpectrumTest(parameterized.TestCase):

  def test_elementwise(self):
    np.testing.assert_allclose(
        synthesizer.perturb_spectrum(np.array([1.0, 2.0]), [0.5, -0.5]),
        [1.5, 1.0])

  def test_not_sorted(self):
    target = synthesizer.perturb_spectrum(
        eigensolver.SpectrumSlice(values=[1.0, 2.0]),
        results.UniversalPerturbation(rho=[2.0, 0.0]))
    np.testing.assert_allclose(target, [3.0, 2.0])

  @parameterized.named_parameters(
      ('length', [1.0, 2.0], [0.1]),
      ('non_positive', [1.0, 2.0], [0.1, -1.0]),
  )
  def test_invalid(self, sigma, rho):
    with self.assertRaises(ValueError):
      synthesizer.perturb_spectrum(np.array(sigma), np.array(rho))

  def test_inverse(self):
    rho = np.array([0.3, -0.2, 0.0])
    sigma = np.array([1.0, 4.0, 9.0])
    inverse = synthesizer.invert_perturbation(rho)
    np.testing.assert_allclose(
        synthesizer.perturb_spectrum(
            synthesizer.perturb_spectrum(sigma, rho), inverse), sigma)

  def test_inverse_of_inverse(self):
    rho = np.array([0.3, -0.2, 0.0, 1.5])
    np.testing.assert_allclose(
        synthesizer.invert_perturbation(
            synthesizer.invert_perturbation(rho)).rho, rho)


class AlignmentErrorTest(absltest.TestCase):

  def test_zero(self):
    shape = testing.elongated_sphere(100)
    self.assertAlmostEqual(
        synthesizer.alignment_error(shape, np.zeros(4), np.zeros((6, 3)), 4),
        0.0,
        places=10)

  def test_undeformed_shape_measures_rho(self):
    shape = testing.elongated_sphere(100)
    rho = np.array([0.1, 0.0, -0.1, 0.2])
    sigma = eigensolver.spectrum(
        eigensolver.eigendecompose(
            laplacians.laplacian(shape), 5), 4).values
    self.assertAlmostEqual(
        synthesizer.alignment_error(shape, rho, np.zeros((6, 3)), 4),
        float(np.linalg.norm(sigma * rho)),
        places=8)

  def test_is_root_of_alignment_loss(self):
    shape = testing.elongated_sphere(100)
    rho = np.array([0.05, -0.1, 0.0, 0.15])
    alpha = 0.02 * np.random.default_rng(3).standard_normal((6, 3))
    decomp = eigensolver.eigendecompose(laplacians.laplacian(shape), 6)
    deformed = surfaces.apply_displacement(shape, decomp.eigenfunctions[:, :6],
                                           alpha)
    loss = objectives.spectral_alignment_loss(
        eigensolver.spectrum(decomp, 4), rho,
        eigensolver.spectrum(
            eigensolver.eigendecompose(laplacians.laplacian(deformed), 4), 4))
    self.assertGreater(loss, 0.0)
    self.assertAlmostEqual(
        synthesizer.alignment_error(shape, rho, alpha, 4),
        np.sqrt(loss),
        delta=1e-8 * np.sqrt(loss))


class SynthesizeTest(absltest.TestCase):

  def setUp(self):
    super().setUp()
    self.shape = testing.elongated_sphere(100, surface_id='target')

  def test_zero_perturbation_converges_immediately(self):
    result = synthesizer.synthesize_from_spectrum(self.shape, np.zeros(4),
                                                  _CONFIG)
    self.assertTrue(result.converged)
    self.assertLen(result.alignment_trace, 1)
    np.testing.assert_array_equal(result.deformed.vertices,
                                  self.shape.vertices)
    np.testing.assert_array_equal(result.coefficients.alpha, np.zeros((6, 3)))
    self.assertIsNone(result.fooled)

  def test_reduces_alignment_error(self):
    rho = np.full(4, 0.05)
    result = synthesizer.synthesize_from_spectrum(self.shape, rho, _CONFIG)
    self.assertLess(result.alignment_error, result.initial_alignment_error)
    self.assertLen(result.alignment_trace, _CONFIG.iterations + 1)
    self.assertEqual(result.id, 'target')
    np.testing.assert_allclose(result.sigma_target,
                               result.sigma_original * 1.05)
    self.assertAlmostEqual(
        synthesizer.alignment_error(self.shape, rho,
                                    result.coefficients.alpha, 4),
        result.alignment_error,
        places=10)

  def test_deformation_keeps_connectivity(self):
    result = synthesizer.synthesize_from_spectrum(self.shape, np.full(4, 0.05),
                                                  _CONFIG)
    np.testing.assert_array_equal(result.deformed.faces, self.shape.faces)
    self.assertFalse(
        np.array_equal(result.deformed.vertices, self.shape.vertices))

  def test_records_predictions_and_penalties(self):
    model = testing.tiny_classifier()
    result = synthesizer.synthesize_from_spectrum(
        self.shape, np.full(4, 0.05), _CONFIG, classifier=model)
    self.assertEqual(result.label_before,
                     testing.labelled_by(model, [self.shape])[0].label)
    self.assertIn(result.label_after, (0, 1))
    self.assertIn(result.fooled, (True, False))
    self.assertEqual([i for i, _ in result.penalty_trace], [0, 10, 20, 30])

  def test_classifier_does_not_change_result(self):
    rho = np.full(4, 0.05)
    with_model = synthesizer.synthesize_from_spectrum(
        self.shape, rho, _CONFIG, classifier=testing.tiny_classifier())
    without = synthesizer.synthesize_from_spectrum(self.shape, rho, _CONFIG)
    np.testing.assert_array_equal(with_model.coefficients.alpha,
                                  without.coefficients.alpha)

  def test_rho_length_must_match(self):
    with self.assertRaisesRegex(ValueError, 'k=4'):
      synthesizer.synthesize_from_spectrum(self.shape, np.zeros(3), _CONFIG)

  def test_objective_config_has_no_penalty(self):
    config = _CONFIG.objective_config()
    self.assertEqual(config.c, 0.0)
    self.assertEqual((config.k, config.b), (4, 6))
    self.assertEqual(config.learning_rate_alpha, 1e-2)


if __name__ == '__main__':
  absltest.main()
