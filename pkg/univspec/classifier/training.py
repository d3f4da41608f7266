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
"""Supervised training of the PointNet classifier on labelled shapes."""

import copy
import time
from typing import List, Optional, Sequence

from absl import logging
import attr
import numpy as np
from scipy.spatial import transform as spatial_transform
import torch
from torch.nn import functional as F

from univspec.classifier import pointnet
from univspec.common import errors
from univspec.geometry import surfaces


class TrainingDivergedError(errors.NumericalError):
  """The training loss became NaN or infinite."""


class TrainingDataError(errors.PreconditionError):
  """The dataset can not be used for training."""


@attr.s(auto_attribs=True, frozen=True, kw_only=True)
class TrainConfig:
  """Optimization and augmentation settings.

  Attributes:
    epochs: Passes over the training set.
    learning_rate: Adam step size.
    betas: Adam moment decay rates.
    eps: Adam denominator offset.
    batch_size: Shapes per step.
    sample_points: Every shape is subsampled (or padded by resampling) to this
      many points.
    rotate: Apply a uniformly random rotation to every sample.
    translation_range: Random translations are uniform in [-r, r]^3.
    jitter_sigma: Standard deviation of per-point Gaussian jitter.
    jitter_clip: Jitter is clipped to [-clip, clip].
    seed: Seeds initialization order, batching and augmentation.
    log_every: Log every this many epochs.
  """

  epochs: int = attr.ib(default=50, validator=attr.validators.ge(1))
  learning_rate: float = attr.ib(default=1e-3, validator=attr.validators.gt(0))
  betas: Sequence[float] = (0.9, 0.999)
  eps: float = attr.ib(default=1e-8, validator=attr.validators.gt(0))
  batch_size: int = attr.ib(default=16, validator=attr.validators.ge(1))
  sample_points: int = attr.ib(default=1024, validator=attr.validators.ge(1))
  rotate: bool = True
  translation_range: float = attr.ib(
      default=0.1, validator=attr.validators.ge(0))
  jitter_sigma: float = attr.ib(default=0.01, validator=attr.validators.ge(0))
  jitter_clip: float = attr.ib(default=0.03, validator=attr.validators.ge(0))
  seed: int = 0
  log_every: int = attr.ib(default=10, validator=attr.validators.ge(1))


@attr.s(auto_attribs=True, frozen=True)
class AccuracyReport:
  """Accuracies in percent and the per-epoch mean training loss."""

  train_accuracy: float
  test_accuracy: Optional[float]
  losses: List[float]
  elapsed_seconds: float = 0.0

  def to_dict(self):
    return {
        'train_accuracy': self.train_accuracy,
        'test_accuracy': self.test_accuracy,
        'final_loss': self.losses[-1] if self.losses else None,
        'epochs': len(self.losses),
    }


def evaluate_accuracy(model: pointnet.ClassifierModel,
                      shapes: Sequence[surfaces.Surface]) -> float:
  """Percentage of labelled shapes predicted correctly from all vertices."""
  if not shapes:
    raise ValueError('Can not evaluate accuracy on an empty set')
  correct = sum(
      pointnet.predict(model, shape.vertices) == shape.label
      for shape in shapes)
  return 100.0 * correct / len(shapes)


def compute_normalization(shapes: Sequence[surfaces.Surface]):
  """Per-coordinate (shift, scale) of the centred training points."""
  centred = np.concatenate(
      [s.vertices - s.vertices.mean(axis=0) for s in shapes])
  shift = centred.mean(axis=0)
  spread = centred.std(axis=0)
  return shift, 1.0 / np.where(spread > 0, spread, 1.0)


def _check_dataset(shapes: Sequence[surfaces.Surface], class_count: int):
  labels = [s.label for s in shapes]
  if any(label is None for label in labels):
    missing = [s.id for s in shapes if s.label is None]
    raise TrainingDataError(f'Shapes without a label: {missing!r}')
  counts = np.bincount(labels, minlength=class_count)
  if len(counts) > class_count:
    raise TrainingDataError(
        f'Labels exceed the {class_count} classes of the model')
  sparse_classes = np.flatnonzero(counts < 2)
  if sparse_classes.size:
    raise TrainingDataError(
        f'Classes {sparse_classes.tolist()!r} have fewer than 2 training '
        f'samples (counts {counts.tolist()!r})')


def _sample(shape: surfaces.Surface, config: TrainConfig,
            rng: np.random.Generator) -> np.ndarray:
  n = shape.vertex_count
  chosen = rng.choice(n, config.sample_points, replace=n < config.sample_points)
  points = shape.vertices[chosen]
  if config.rotate:
    rotation = spatial_transform.Rotation.random(random_state=rng)
    points = rotation.apply(points)
  points = points + rng.uniform(-config.translation_range,
                                config.translation_range, 3)
  jitter = np.clip(
      config.jitter_sigma * rng.standard_normal(points.shape),
      -config.jitter_clip, config.jitter_clip)
  return points + jitter


def train(model: pointnet.ClassifierModel,
          shapes: Sequence[surfaces.Surface],
          config: TrainConfig = TrainConfig(),
          test_shapes: Optional[Sequence[surfaces.Surface]] = None):
  """Minimizes softmax cross-entropy with Adam.

  The input model is left untouched; a deep copy is trained, its input
  normalization frozen from `shapes`, and returned.

  Args:
    model: Initial model, e.g. from `build_model`.
    shapes: Labelled training shapes.
    config: Training settings.
    test_shapes: Optional labelled shapes for the test accuracy.

  Returns:
    (trained model, AccuracyReport).

  Raises:
    TrainingDataError: Fewer than 2 samples in some class.
    TrainingDivergedError: If the loss becomes non-finite.
  """
  _check_dataset(shapes, model.class_count)
  start = time.time()
  network = copy.deepcopy(model.network)
  shift, scale = compute_normalization(shapes)
  with torch.no_grad():
    network.feature_shift.copy_(torch.from_numpy(shift))
    network.feature_scale.copy_(torch.from_numpy(scale))
  for parameter in network.parameters():
    parameter.requires_grad_(True)
  network.train()

  optimizer = torch.optim.Adam(
      network.parameters(),
      lr=config.learning_rate,
      betas=tuple(config.betas),
      eps=config.eps)
  rng = np.random.default_rng(config.seed)
  labels = torch.tensor([s.label for s in shapes], dtype=torch.long)
  losses = []
  for epoch in range(config.epochs):
    order = rng.permutation(len(shapes))
    total = 0.0
    for first in range(0, len(order), config.batch_size):
      batch = order[first:first + config.batch_size]
      points = torch.from_numpy(
          np.stack([_sample(shapes[i], config, rng) for i in batch]))
      loss = F.cross_entropy(network(points), labels[batch])
      if not torch.isfinite(loss):
        raise TrainingDivergedError(
            f'Loss became {loss.item()!r} at epoch {epoch}, batch starting at '
            f'{first} (shapes {[shapes[i].id for i in batch]!r}); try a '
            f'smaller learning rate than {config.learning_rate}')
      optimizer.zero_grad()
      loss.backward()
      optimizer.step()
      total += loss.item() * len(batch)
    losses.append(total / len(shapes))
    if (epoch + 1) % config.log_every == 0 or epoch + 1 == config.epochs:
      logging.info('Epoch %d/%d: loss %.5f', epoch + 1, config.epochs,
                   losses[-1])

  trained = pointnet.ClassifierModel(
      network=network, class_names=model.class_names)
  report = AccuracyReport(
      train_accuracy=evaluate_accuracy(trained, shapes),
      test_accuracy=(evaluate_accuracy(trained, test_shapes)
                     if test_shapes else None),
      losses=losses,
      elapsed_seconds=time.time() - start)
  logging.info('Training accuracy %.1f%%, test accuracy %s',
               report.train_accuracy, report.test_accuracy)
  return trained, report
