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
"""Tests for univspec.metrics.report."""

from absl.testing import absltest

import numpy as np

from univspec.classifier import pointnet
from univspec.common import testing
from univspec.geometry import surfaces
from univspec.metrics import noticeability
from univspec.metrics import report


def _pairs():
  originals = [
      testing.irregular_sphere(60, seed=i, surface_id=f's{i}') for i in range(3)
  ]
  perturbed = [
      s.with_vertices(s.vertices * (1.0 + 0.01 * (i + 1)))
      for i, s in enumerate(originals)
  ]
  return originals, perturbed


class EvaluateAttackTest(absltest.TestCase):

  def test_recomputes_from_geometry(self):
    model = testing.tiny_classifier()
    originals, perturbed = _pairs()
    metrics = report.evaluate_attack(originals, perturbed, model,
                                     alignment_errors=[0.1, 0.2, 0.3])
    self.assertEqual([s.id for s in metrics.shapes], ['s0', 's1', 's2'])
    for row, original, moved in zip(metrics.shapes, originals, perturbed):
      self.assertEqual(row.original_label,
                       pointnet.predict(model, original.vertices))
      self.assertEqual(row.final_label, pointnet.predict(model, moved.vertices))
      self.assertAlmostEqual(row.l2_displacement,
                             noticeability.l2_displacement(original, moved))
      self.assertIsNotNone(row.curvature_distortion)
    self.assertEqual(metrics.alignment_errors, [0.1, 0.2, 0.3])
    self.assertTrue(metrics.curvature_available)
    self.assertAlmostEqual(
        metrics.l2_displacement,
        np.mean([s.l2_displacement for s in metrics.shapes]))

  def test_labels_on_shapes_are_ignored(self):
    model = testing.tiny_classifier()
    originals, perturbed = _pairs()
    relabelled = [s.with_label(7) for s in originals]
    first = report.evaluate_attack(originals, perturbed, model)
    second = report.evaluate_attack(relabelled, perturbed, model)
    self.assertEqual(first.to_dict(), second.to_dict())

  def test_point_clouds_have_no_curvature(self):
    model = testing.tiny_classifier()
    originals, perturbed = _pairs()
    clouds = [surfaces.Surface(vertices=s.vertices, id=s.id) for s in originals]
    moved = [surfaces.Surface(vertices=s.vertices, id=s.id) for s in perturbed]
    metrics = report.evaluate_attack(clouds, moved, model)
    self.assertFalse(metrics.curvature_available)
    self.assertIsNone(metrics.curvature_distortion)
    self.assertIsNone(metrics.shapes[0].curvature_distortion)

  def test_mixed_representations(self):
    model = testing.tiny_classifier()
    originals, perturbed = _pairs()
    originals[0] = surfaces.Surface(vertices=originals[0].vertices, id='s0')
    perturbed[0] = surfaces.Surface(vertices=perturbed[0].vertices, id='s0')
    metrics = report.evaluate_attack(originals, perturbed, model)
    self.assertFalse(metrics.curvature_available)
    self.assertAlmostEqual(
        metrics.curvature_distortion,
        np.mean([s.curvature_distortion for s in metrics.shapes[1:]]))

  def test_length_mismatch(self):
    originals, perturbed = _pairs()
    with self.assertRaises(noticeability.PairingError):
      report.evaluate_attack(originals, perturbed[:2],
                             testing.tiny_classifier())

  def test_empty(self):
    with self.assertRaises(noticeability.PairingError):
      report.evaluate_attack([], [], testing.tiny_classifier())

  def test_workers(self):
    model = testing.tiny_classifier()
    originals, perturbed = _pairs()
    self.assertEqual(
        report.evaluate_attack(originals, perturbed, model).to_dict(),
        report.evaluate_attack(originals, perturbed, model,
                               workers=3).to_dict())


class MetricReportTest(absltest.TestCase):

  def _report(self):
    return report.MetricReport(shapes=[
        report.ShapeMetrics(
            id='a',
            original_label=0,
            final_label=1,
            l2_displacement=0.1,
            curvature_distortion=0.2),
        report.ShapeMetrics(
            id='b',
            original_label=1,
            final_label=1,
            l2_displacement=0.3,
            curvature_distortion=0.4),
    ])

  def test_aggregates(self):
    metrics = self._report()
    self.assertEqual(metrics.count, 2)
    self.assertEqual(metrics.fooled_count, 1)
    self.assertEqual(metrics.success_rate, 50.0)
    self.assertAlmostEqual(metrics.l2_displacement, 0.2)
    self.assertAlmostEqual(metrics.curvature_distortion, 0.3)

  def test_dict_round_trip(self):
    metrics = self._report()
    values = metrics.to_dict()
    self.assertTrue(values['shapes'][0]['fooled'])
    self.assertEqual(report.MetricReport.from_dict(values), metrics)


if __name__ == '__main__':
  absltest.main()
