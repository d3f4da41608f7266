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
"""Shapes, models and numerical helpers shared by the tests."""

from typing import Callable, List, Sequence

import attr
import numpy as np
from scipy.spatial import transform as spatial_transform

from univspec.classifier import pointnet
from univspec.corpus import dataset
from univspec.corpus import manifest as manifest_lib
from univspec.corpus import primitives
from univspec.geometry import surfaces


def irregular_sphere(vertex_count: int = 200,
                     seed: int = 0,
                     bumpiness: float = 0.05,
                     surface_id: str = 'irregular') -> surfaces.Surface:
  """A unit sphere mesh with random radial noise; its spectrum is simple."""
  sphere = primitives.sphere_mesh(vertex_count, seed, surface_id)
  rng = np.random.default_rng(seed + 1)
  radii = 1.0 + bumpiness * rng.uniform(-1.0, 1.0, vertex_count)
  return sphere.with_vertices(sphere.vertices * radii[:, None])


def elongated_sphere(vertex_count: int = 200,
                     seed: int = 0,
                     surface_id: str = 'elongated') -> surfaces.Surface:
  """An irregular sphere stretched along x, so mode multiplicities split."""
  shape = irregular_sphere(vertex_count, seed, surface_id=surface_id)
  return shape.with_vertices(shape.vertices * np.array([1.6, 1.0, 0.7]))


def random_rotation(seed: int) -> np.ndarray:
  return spatial_transform.Rotation.random(random_state=seed).as_matrix()


def tiny_classifier(class_names: Sequence[str] = ('a', 'b'),
                    seed: int = 0) -> pointnet.ClassifierModel:
  return pointnet.build_model(
      class_names, point_widths=(3, 8, 16), head_widths=(16, 8), seed=seed)


def labelled_by(model: pointnet.ClassifierModel,
                shapes: Sequence[surfaces.Surface]) -> List[surfaces.Surface]:
  """Labels every shape with the model's prediction, making it 'correct'."""
  return [s.with_label(pointnet.predict(model, s.vertices)) for s in shapes]


def tiny_corpus(directory: str,
                model: pointnet.ClassifierModel,
                seed: int = 7) -> manifest_lib.Manifest:
  """A two-class corpus of 8 meshes in `directory`, labelled by `model`.

  Every shape is classified correctly by the model, so attacks can start
  from any of them. Splits are 3 train and 1 test shape per generated class.
  """
  spec = dataset.CorpusSpec(
      class_count=2,
      shapes_per_class=4,
      test_fraction=0.25,
      vertex_range=(400, 480),
      spectral_check_k=0,
      seed=seed)
  corpus = dataset.generate_dataset(spec, directory)
  shapes = corpus.load(corpus.entries)
  relabelled = attr.evolve(
      corpus,
      entries=[
          attr.evolve(entry, label=pointnet.predict(model, shape.vertices))
          for entry, shape in zip(corpus.entries, shapes)
      ])
  manifest_lib.write_manifest(relabelled, directory)
  return relabelled


def central_difference(fn: Callable[[np.ndarray], float], x: np.ndarray,
                       step: float) -> np.ndarray:
  """Central finite-difference gradient of a scalar function of an array."""
  x = np.array(x, dtype=np.float64)
  gradient = np.zeros_like(x)
  for index in np.ndindex(*x.shape):
    original = x[index]
    x[index] = original + step
    forward = fn(x)
    x[index] = original - step
    backward = fn(x)
    x[index] = original
    gradient[index] = (forward - backward) / (2 * step)
  return gradient
