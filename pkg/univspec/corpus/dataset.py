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
"""Deterministic generation of labelled, posed and randomly placed shapes."""

import os
from typing import List, Optional, Tuple

from absl import logging
import attr
import numpy as np
from scipy.spatial import transform as spatial_transform

from univspec.common import parallel
from univspec.common import seeds
from univspec.corpus import manifest as manifest_lib
from univspec.corpus import poses
from univspec.corpus import templates as templates_lib
from univspec.geometry import laplacians
from univspec.geometry import mesh_io
from univspec.geometry import surfaces
from univspec.spectral import eigensolver

REPRESENTATIONS = ('mesh', 'cloud')


def _ordered_pair(instance, attribute, value):
  del instance
  low, high = value
  if not 0 < low <= high:
    raise ValueError(
        f'{attribute.name} must satisfy 0 < low <= high, got {value!r}')


@attr.s(auto_attribs=True, frozen=True, kw_only=True)
class CorpusSpec:
  """Everything that determines a synthetic corpus.

  Attributes:
    class_count: Number of classes; built-in templates support 2..5.
    shapes_per_class: Train plus test shapes generated for every class.
    test_fraction: Fraction of each class held out for testing.
    vertex_range: Inclusive range of per-shape vertex counts.
    max_bend: Largest pose bend angle in radians.
    rotate: Apply a uniformly random rotation to every shape.
    translation_range: Translations are uniform in [-range, range]^3.
    scale_range: Scales are log-uniform in this range.
    representation: 'mesh' or 'cloud' (the mesh vertices, no faces).
    spectral_check_k: Number of eigenvalues of the separability check; 0
      disables the check.
    min_class_separation: Smallest relative distance between class mean
      spectra accepted by the check.
    seed: Corpus seed.
    workers: Threads used for shape generation.
  """

  class_count: int = attr.ib(default=3, validator=attr.validators.ge(2))
  shapes_per_class: int = attr.ib(default=20, validator=attr.validators.ge(2))
  test_fraction: float = attr.ib(default=0.3)
  vertex_range: Tuple[int, int] = attr.ib(
      default=(800, 1500), converter=tuple, validator=_ordered_pair)
  max_bend: float = attr.ib(
      default=np.pi / 6,
      validator=[attr.validators.ge(0.0),
                 attr.validators.le(poses.MAX_BEND)])
  rotate: bool = True
  translation_range: float = attr.ib(
      default=1.0, validator=attr.validators.ge(0.0))
  scale_range: Tuple[float, float] = attr.ib(
      default=(0.8, 1.25), converter=tuple, validator=_ordered_pair)
  representation: str = attr.ib(
      default='mesh', validator=attr.validators.in_(REPRESENTATIONS))
  spectral_check_k: int = attr.ib(default=20, validator=attr.validators.ge(0))
  min_class_separation: float = attr.ib(
      default=0.05, validator=attr.validators.ge(0.0))
  seed: int = 0
  workers: int = attr.ib(default=1, validator=attr.validators.ge(1))

  @test_fraction.validator
  def _check_test_fraction(self, attribute, value):
    if not 0.0 < value < 1.0:
      raise ValueError(f'{attribute.name} must lie in (0, 1), got {value!r}')
    test = self.test_count
    if test < 1 or test >= self.shapes_per_class:
      raise ValueError(
          f'{attribute.name}={value!r} leaves {test} of '
          f'{self.shapes_per_class} shapes per class for testing')

  @property
  def test_count(self) -> int:
    """Held-out shapes per class."""
    return int(round(self.test_fraction * self.shapes_per_class))


@attr.s(auto_attribs=True, frozen=True)
class _Job:
  label: int
  index: int
  seed: int
  split: manifest_lib.Split


def _random_placement(surface: surfaces.Surface, spec: CorpusSpec,
                      rng: np.random.Generator) -> surfaces.Surface:
  rotation = np.eye(3)
  if spec.rotate:
    rotation = spatial_transform.Rotation.random(random_state=rng).as_matrix()
  translation = rng.uniform(-spec.translation_range, spec.translation_range, 3)
  low, high = spec.scale_range
  scale = float(np.exp(rng.uniform(np.log(low), np.log(high))))
  return surfaces.transform(surface, rotation, translation, scale)


def make_shape(template: templates_lib.ClassTemplate, spec: CorpusSpec,
               seed: int, surface_id: str) -> Tuple[surfaces.Surface,
                                                    surfaces.Surface]:
  """Returns (posed rest-frame mesh, placed mesh) of one corpus shape."""
  rng = np.random.default_rng(seed)
  low, high = spec.vertex_range
  vertex_count = int(rng.integers(low, high + 1))
  base = templates_lib.make_base_shape(template, vertex_count, seed,
                                       surface_id)
  posed = poses.apply_pose_deformation(
      base, poses.PoseParams(joints=template.joints(), max_bend=spec.max_bend),
      seed)
  return posed, _random_placement(posed, spec, rng)


def normalized_spectrum(mesh: surfaces.Surface, k: int) -> np.ndarray:
  """First k nonzero eigenvalues of the unit-area version of a mesh."""
  pair = laplacians.cotangent_laplacian(surfaces.normalize_area(mesh))
  return eigensolver.spectrum(eigensolver.eigendecompose(pair, k), k).values


def spectral_separation(spectra: np.ndarray,
                        labels: np.ndarray) -> Tuple[float, float]:
  """Returns (within-class spread, between-class separation).

  Both are relative L2 distances: the largest distance of a spectrum to its
  class mean, and the smallest distance between two class means, each divided
  by the norm of the class mean(s) involved.
  """
  classes = np.unique(labels)
  means = {c: spectra[labels == c].mean(axis=0) for c in classes}
  within = max(
      np.linalg.norm(s - means[c]) / np.linalg.norm(means[c])
      for s, c in zip(spectra, labels))
  between = min(
      np.linalg.norm(means[a] - means[b]) /
      (0.5 * (np.linalg.norm(means[a]) + np.linalg.norm(means[b])))
      for i, a in enumerate(classes)
      for b in classes[i + 1:])
  return float(within), float(between)


def _check_separability(spectra: np.ndarray, labels: np.ndarray,
                        spec: CorpusSpec) -> None:
  within, between = spectral_separation(spectra, labels)
  logging.info(
      'Corpus spectra (k=%d): within-class spread %.4f, between-class '
      'separation %.4f', spec.spectral_check_k, within, between)
  if not within < between:
    raise templates_lib.CorpusError(
        f'Classes are not spectrally separable: within-class spread '
        f'{within:.4f} >= between-class separation {between:.4f}')
  if between < spec.min_class_separation:
    raise templates_lib.CorpusError(
        f'Class mean spectra differ by only {between:.4f} (relative), below '
        f'{spec.min_class_separation}')


def generate_dataset(
    spec: CorpusSpec,
    output_dir: str,
    templates: Optional[List[templates_lib.ClassTemplate]] = None
) -> manifest_lib.Manifest:
  """Generates a corpus, writes its shape files and manifest.

  Shapes are generated class by class; within a class the last
  `spec.test_count` shapes form the test split. Every shape draws from its
  own seed, so the corpus does not depend on `spec.workers`.

  Args:
    spec: Corpus parameters.
    output_dir: Directory receiving `shapes/*.off` and `manifest.json`.
    templates: Class templates; `default_templates(spec.class_count)` when
      None.

  Returns:
    The manifest that was written.

  Raises:
    CorpusError: If the generated classes are not spectrally separable.
    InputError: On I/O failure.
  """
  if templates is None:
    templates = templates_lib.default_templates(spec.class_count)
  if len(templates) != spec.class_count:
    raise templates_lib.CorpusError(
        f'Got {len(templates)} templates for {spec.class_count} classes')

  shape_seeds = seeds.spawn(spec.seed, spec.class_count * spec.shapes_per_class)
  train_count = spec.shapes_per_class - spec.test_count
  jobs = []
  for label in range(spec.class_count):
    for index in range(spec.shapes_per_class):
      jobs.append(
          _Job(
              label=label,
              index=index,
              seed=shape_seeds[label * spec.shapes_per_class + index],
              split=(manifest_lib.Split.TRAIN
                     if index < train_count else manifest_lib.Split.TEST)))

  shapes_dir = os.path.join(output_dir, 'shapes')
  os.makedirs(shapes_dir, exist_ok=True)

  def generate(job: _Job):
    template = templates[job.label]
    surface_id = f'{template.name}_{job.index:03d}'
    posed, placed = make_shape(template, spec, job.seed, surface_id)
    if spec.representation == 'cloud':
      placed = surfaces.Surface(vertices=placed.vertices, id=surface_id)
    relative = os.path.join('shapes', f'{surface_id}.off')
    mesh_io.save_surface(placed, os.path.join(output_dir, relative))
    spectrum = None
    if spec.spectral_check_k:
      spectrum = normalized_spectrum(posed, spec.spectral_check_k)
    entry = manifest_lib.ManifestEntry(
        path=relative,
        id=surface_id,
        label=job.label,
        split=job.split,
        seed=job.seed)
    return entry, spectrum

  logging.info('Generating %d shapes in %d classes into %s', len(jobs),
               spec.class_count, output_dir)
  results = parallel.ordered_map(generate, jobs, spec.workers)
  if spec.spectral_check_k:
    _check_separability(
        np.array([spectrum for _, spectrum in results]),
        np.array([job.label for job in jobs]), spec)

  manifest = manifest_lib.Manifest(
      entries=[entry for entry, _ in results],
      class_names=[t.name for t in templates],
      root=os.path.abspath(output_dir))
  manifest_lib.write_manifest(manifest, output_dir)
  return manifest
