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
"""End-to-end experiments on synthetic corpora.

These train a classifier and run full-length attacks, which takes minutes.
They only run with UNIVSPEC_RUN_SLOW=1 in the environment.
"""

import collections
import os
import tempfile

from absl.testing import absltest

import numpy as np

from univspec.attack import config as attack_config
from univspec.attack import engine
from univspec.classifier import pointnet
from univspec.classifier import training
from univspec.common import seeds
from univspec.common import testing
from univspec.corpus import dataset
from univspec.corpus import manifest as manifest_lib
from univspec.corpus import primitives
from univspec.geometry import laplacians
from univspec.geometry import surfaces
from univspec.spectral import eigensolver
from univspec.synthesis import generalization
from univspec.synthesis import synthesizer

_SLOW = os.environ.get('UNIVSPEC_RUN_SLOW') == '1'
_SKIP_REASON = 'set UNIVSPEC_RUN_SLOW=1 to run the end-to-end experiments'
_WORKERS = max(1, min(8, os.cpu_count() or 1))


def _correct(model, shapes):
  return [s for s in shapes if pointnet.predict(model, s.vertices) == s.label]


@absltest.skipUnless(_SLOW, _SKIP_REASON)
class UniversalAttackExperimentTest(absltest.TestCase):

  @classmethod
  def setUpClass(cls):
    super().setUpClass()
    root = tempfile.mkdtemp(dir=absltest.get_default_test_tmpdir())
    spec = dataset.CorpusSpec(
        class_count=3, seed=seeds.derive(0, 'corpus'), workers=_WORKERS)
    corpus = dataset.generate_dataset(spec, root)
    train_shapes = corpus.load(corpus.select(manifest_lib.Split.TRAIN))
    cls.test_shapes = corpus.load(corpus.select(manifest_lib.Split.TEST))
    model = pointnet.build_model(
        corpus.class_names, seed=seeds.derive(0, 'train'))
    cls.model, cls.accuracy = training.train(
        model, train_shapes, training.TrainConfig(seed=seeds.derive(0, 'train')),
        cls.test_shapes)

    # Attack ten correctly classified shapes of the best represented class so
    # that held-out shapes of the same class exist for generalization.
    correct = _correct(cls.model, train_shapes)
    label, _ = collections.Counter(s.label for s in correct).most_common(1)[0]
    same_class = [s for s in correct if s.label == label]
    cls.attack_shapes = (same_class + [s for s in correct
                                       if s.label != label])[:10]
    cls.label = label
    cls.config = attack_config.AttackConfig(
        seed=seeds.derive(0, 'attack'), workers=_WORKERS)
    cls.universal = engine.run_universal_attack(cls.attack_shapes, cls.model,
                                                cls.config)

  def test_classifier_is_accurate(self):
    self.assertGreaterEqual(self.accuracy.train_accuracy, 95.0)

  def test_universal_attack_fools_most_shapes(self):
    self.assertLen(self.universal.outcomes, 10)
    self.assertGreaterEqual(self.universal.success_rate, 70.0)
    for outcome in self.universal.outcomes:
      self.assertIs(outcome.perturbation, self.universal.perturbation)

  def test_pershape_attack_is_at_least_as_effective(self):
    per_shape = engine.run_pershape_attack(self.attack_shapes, self.model,
                                           self.config)
    rate = 100.0 * sum(r.fooled_count for r in per_shape) / len(per_shape)
    self.assertGreaterEqual(rate, self.universal.success_rate)

  def test_resynthesis_recovers_the_attacked_shape(self):
    outcome = self.universal.outcomes[0]
    config = synthesizer.SynthesisConfig(
        k=self.config.k,
        b=self.config.b,
        learning_rate=self.config.learning_rate_alpha,
        seed=seeds.derive(0, 'synthesis'))
    result = synthesizer.synthesize_from_spectrum(
        outcome.original, self.universal.perturbation, config)
    distance = np.linalg.norm(
        result.deformed.vertices - outcome.deformed.vertices, axis=1).mean()
    self.assertLessEqual(
        distance, 0.05 * surfaces.bounding_box_diagonal(outcome.original))
    self.assertLessEqual(result.alignment_error,
                         0.1 * result.initial_alignment_error)

  def test_perturbation_generalizes_to_unseen_shapes(self):
    attacked = {s.id for s in self.attack_shapes}
    held_out = [
        s for s in _correct(self.model, self.test_shapes)
        if s.label == self.label and s.id not in attacked
    ][:5]
    self.assertNotEmpty(held_out)
    config = synthesizer.SynthesisConfig(
        k=self.config.k,
        b=self.config.b,
        seed=seeds.derive(0, 'synthesis'),
        workers=_WORKERS)
    result = generalization.generalize(held_out, self.universal.perturbation,
                                       self.model, config)
    self.assertGreaterEqual(result.success_rate, 40.0)
    drops = [
        r.initial_alignment_error / max(r.alignment_error, 1e-300)
        for r in result.results
    ]
    self.assertGreaterEqual(np.median(drops), 10.0)


@absltest.skipUnless(_SLOW, _SKIP_REASON)
class PointCloudExperimentTest(absltest.TestCase):

  def test_cloud_spectrum_matches_mesh(self):
    mesh = primitives.sphere_mesh(2000, seed=3)
    cloud = surfaces.Surface(vertices=mesh.vertices, id='cloud')
    mesh_sigma = eigensolver.spectrum(
        eigensolver.eigendecompose(laplacians.laplacian(mesh), 10), 10).values
    cloud_sigma = eigensolver.spectrum(
        eigensolver.eigendecompose(laplacians.laplacian(cloud), 10),
        10).values
    np.testing.assert_allclose(cloud_sigma, mesh_sigma, rtol=0.15)

  def test_attack_runs_on_cloud_corpus(self):
    root = self.create_tempdir().full_path
    spec = dataset.CorpusSpec(
        class_count=2,
        shapes_per_class=6,
        vertex_range=(500, 700),
        representation='cloud',
        seed=seeds.derive(1, 'corpus'),
        workers=_WORKERS)
    corpus = dataset.generate_dataset(spec, root)
    model = testing.tiny_classifier(corpus.class_names)
    shapes = testing.labelled_by(
        model, corpus.load(corpus.select(manifest_lib.Split.TRAIN)))[:4]
    config = attack_config.AttackConfig(
        k=20, b=10, iterations=50, seed=seeds.derive(1, 'attack'),
        workers=_WORKERS)
    result = engine.run_universal_attack(shapes, model, config)
    self.assertLen(result.outcomes, 4)
    self.assertTrue(np.all(np.isfinite(result.perturbation.rho)))
    self.assertFalse(result.metrics.curvature_available)
    for outcome in result.outcomes:
      self.assertFalse(outcome.deformed.is_mesh)


if __name__ == '__main__':
  absltest.main()
