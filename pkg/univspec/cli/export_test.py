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
"""Tests for univspec.cli.export."""

import csv
import json
import os

from absl.testing import absltest
import numpy as np

from univspec.attack import config as attack_config
from univspec.attack import engine
from univspec.cli import bundles
from univspec.cli import export
from univspec.common import testing
from univspec.geometry import laplacians
from univspec.spectral import eigensolver


def _sigma(shape, k=4):
  decomp = eigensolver.eigendecompose(laplacians.laplacian(shape), k)
  return eigensolver.spectrum(decomp, k).values


def _read_csv(path):
  with open(path, newline='') as f:
    return list(csv.DictReader(f))


class ExportTest(absltest.TestCase):

  @classmethod
  def setUpClass(cls):
    super().setUpClass()
    model = testing.tiny_classifier()
    shapes = testing.labelled_by(model, [
        testing.elongated_sphere(70, seed=i, surface_id=f'item_{i}')
        for i in range(2)
    ])
    config = attack_config.AttackConfig(k=4, b=5, iterations=2)
    cls.result = engine.run_universal_attack(shapes, model, config)
    cls.shapes = {shape.id: shape for shape in shapes}
    cls.class_names = model.class_names

  def setUp(self):
    super().setUp()
    self.bundle_dir = self.create_tempdir().full_path
    bundles.write_attack_bundle(self.bundle_dir, [self.result],
                                self.class_names)
    self.output_dir = os.path.join(self.create_tempdir().full_path, 'tables')

  def test_csv(self):
    written = export.export_report(self.bundle_dir, 'csv', self.output_dir)
    self.assertEqual([os.path.basename(p) for p in written],
                     ['shapes.csv', 'spectra.csv', 'rho.csv'])
    shapes = _read_csv(written[0])
    self.assertEqual(list(shapes[0]), list(export.SHAPE_COLUMNS))
    self.assertEqual([row['id'] for row in shapes], ['item_0', 'item_1'])
    self.assertEqual({row['group'] for row in shapes}, {'universal'})
    self.assertIn(shapes[0]['fooled'], ('true', 'false'))
    spectra = _read_csv(written[1])
    self.assertLen(spectra, 2 * 4)
    self.assertEqual([row['index'] for row in spectra[:4]],
                     ['0', '1', '2', '3'])
    rho = _read_csv(written[2])
    self.assertEqual([float(row['rho']) for row in rho],
                     list(self.result.perturbation.rho))

  def test_spectra_match_recomputed_spectra(self):
    written = export.export_report(self.bundle_dir, 'csv', self.output_dir)
    spectra = _read_csv(written[1])
    for outcome in self.result.outcomes:
      rows = [row for row in spectra if row['id'] == outcome.id]
      for column, shape in (('sigma_original', self.shapes[outcome.id]),
                            ('sigma_deformed', outcome.deformed)):
        np.testing.assert_allclose([float(row[column]) for row in rows],
                                   _sigma(shape),
                                   rtol=1e-9)

  def test_json_matches_built_report(self):
    (path,) = export.export_report(self.bundle_dir, 'json', self.output_dir)
    self.assertEqual(os.path.basename(path), export.REPORT_NAME)
    content = export.read_report(path)
    expected = export.build_report(bundles.read_bundle(self.bundle_dir))
    self.assertEqual(content, json.loads(json.dumps(expected)))
    self.assertEqual(content['success_rate'], self.result.success_rate)

  def test_missing_curvature_is_empty_cell(self):
    path = os.path.join(self.bundle_dir, bundles.RESULT_NAME)
    with open(path) as f:
      content = json.load(f)
    for row in content['metrics']['shapes']:
      row['curvature_distortion'] = None
    with open(path, 'w') as f:
      json.dump(content, f)
    written = export.export_report(self.bundle_dir, 'csv', self.output_dir)
    shapes = _read_csv(written[0])
    self.assertEqual(shapes[0]['curvature_distortion'], '')

  def test_unknown_format(self):
    with self.assertRaises(ValueError):
      export.export_report(self.bundle_dir, 'xlsx', self.output_dir)

  def test_bad_report(self):
    path = os.path.join(self.create_tempdir().full_path, 'report.json')
    with open(path, 'w') as f:
      f.write('not json')
    with self.assertRaises(bundles.BundleError):
      export.read_report(path)


if __name__ == '__main__':
  absltest.main()
