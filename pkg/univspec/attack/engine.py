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
"""Joint Adam optimization of the universal perturbation and the coefficients.

The engine starts from rho = 0 and alpha_i = 0, keeps every basis Phi_i fixed
at the original shape and recomputes the deformed spectra at every iteration.
Per-shape work inside an iteration runs through `parallel.ordered_map`; the
reduction and the Adam step happen in the calling thread.
"""

import time
from typing import List, Optional, Sequence

from absl import logging
import attr
import numpy as np
import torch

from univspec.attack import config as config_lib
from univspec.attack import objectives
from univspec.attack import results
from univspec.classifier import pointnet
from univspec.common import errors
from univspec.common import parallel
from univspec.geometry import surfaces
from univspec.metrics import report
from univspec.spectral import cache as cache_lib


class MisclassifiedInputError(errors.PreconditionError):
  """Some input shapes are not classified correctly to begin with."""

  def __init__(self, ids: List[str]) -> None:
    super().__init__(
        f'{len(ids)} shapes are misclassified before the attack: {ids!r}')
    self.ids = ids


class AttackDivergedError(errors.NumericalError):
  """The objective became NaN or infinite."""

  def __init__(self, message: str,
               trace: List[results.TraceRecord]) -> None:
    super().__init__(message)
    self.trace = trace


def check_correctly_classified(shapes: Sequence[surfaces.Surface],
                               classifier: pointnet.ClassifierModel) -> None:
  """Raises MisclassifiedInputError listing every misclassified shape."""
  unlabelled = [s.id for s in shapes if s.label is None]
  if unlabelled:
    raise errors.InputError(f'Shapes without a label: {unlabelled!r}')
  wrong = [
      s.id for s in shapes
      if pointnet.predict(classifier, s.vertices) != s.label
  ]
  if wrong:
    raise MisclassifiedInputError(wrong)


def _check_ids(shapes: Sequence[surfaces.Surface]) -> None:
  if not shapes:
    raise ValueError('The attack needs at least one shape')
  ids = [s.id for s in shapes]
  if len(set(ids)) != len(ids):
    duplicates = sorted({i for i in ids if ids.count(i) > 1})
    raise errors.InputError(f'Duplicate shape ids {duplicates!r}')


def _trace_record(iteration: int,
                  evaluations: Sequence[objectives.ShapeEvaluation],
                  config: config_lib.AttackConfig) -> results.TraceRecord:
  loss, spectral, penalty = objectives.objective(evaluations, config)
  return results.TraceRecord(
      iteration=iteration,
      loss=loss,
      spectral_loss=spectral,
      penalty=penalty,
      fooled=sum(e.fooled for e in evaluations),
      skipped_modes=sum(e.skipped_modes for e in evaluations))


def _check_finite(record: results.TraceRecord,
                  trace: List[results.TraceRecord]) -> None:
  if not np.isfinite(record.loss):
    raise AttackDivergedError(
        f'Attack objective became {record.loss!r} at iteration '
        f'{record.iteration} (spectral {record.spectral_loss!r}, penalty '
        f'{record.penalty!r})', trace)


def run_universal_attack(
    shapes: Sequence[surfaces.Surface],
    classifier: pointnet.ClassifierModel,
    config: config_lib.AttackConfig = config_lib.AttackConfig(),
    cache: Optional[cache_lib.DecompositionCache] = None
) -> results.AttackResult:
  """Finds one rho and per-shape alphas that fool the classifier on all shapes.

  Args:
    shapes: Labelled shapes, all correctly classified.
    classifier: The attacked model (read only).
    config: Attack parameters.
    cache: Optional cache for the decompositions of the original shapes.

  Returns:
    The result at the final iterate.

  Raises:
    MisclassifiedInputError: If some shape is misclassified to begin with.
    EigensolverError: If a decomposition fails (message names the shape).
    AttackDivergedError: If the objective becomes non-finite.
  """
  start = time.time()
  _check_ids(shapes)
  check_correctly_classified(shapes, classifier)
  targets = parallel.ordered_map(
      lambda shape: objectives.prepare_target(shape, config, cache), shapes,
      config.workers)
  logging.info('Attacking %d shapes: k=%d, b=%d, c=%g, %d iterations',
               len(targets), config.k, config.b, config.c, config.iterations)

  rho = torch.zeros(config.k, dtype=torch.float64, requires_grad=True)
  alphas = torch.zeros((len(targets), config.b, 3),
                       dtype=torch.float64,
                       requires_grad=True)
  optimizer = torch.optim.Adam([
      {
          'params': [rho],
          'lr': config.learning_rate_rho
      },
      {
          'params': [alphas],
          'lr': config.learning_rate_alpha
      },
  ])

  def evaluate(with_gradients: bool):
    return objectives.evaluate_all(targets,
                                   rho.detach().numpy().copy(),
                                   list(alphas.detach().numpy().copy()),
                                   classifier, config, with_gradients)

  trace = []
  for iteration in range(config.iterations):
    evaluations = evaluate(with_gradients=True)
    record = _trace_record(iteration, evaluations, config)
    trace.append(record)
    _check_finite(record, trace)
    if iteration % config.log_every == 0:
      logging.info(
          'Iteration %d/%d: loss %.6g (spectral %.6g, penalty %.4g), '
          'fooled %d/%d, skipped modes %d', iteration, config.iterations,
          record.loss, record.spectral_loss, record.penalty, record.fooled,
          len(targets), record.skipped_modes)

    optimizer.zero_grad()
    rho.grad = torch.from_numpy(np.sum([e.grad_rho for e in evaluations],
                                       axis=0))
    alphas.grad = torch.from_numpy(
        np.stack([e.grad_alpha for e in evaluations]))
    optimizer.step()
    with torch.no_grad():
      rho.clamp_(min=-1.0 + config.rho_floor)

  evaluations = evaluate(with_gradients=False)
  record = _trace_record(config.iterations, evaluations, config)
  trace.append(record)
  _check_finite(record, trace)

  perturbation = results.UniversalPerturbation(rho=rho.detach().numpy())
  outcomes = [
      results.ShapeOutcome(
          original=target.surface,
          deformed=evaluation.deformed,
          perturbation=perturbation,
          coefficients=results.ShapeCoefficients(alpha=alpha),
          original_label=target.label,
          final_label=evaluation.predicted,
          spectral_loss=evaluation.spectral_loss,
          penalty=evaluation.penalty,
          sigma_original=target.sigma,
          sigma_deformed=evaluation.sigma_deformed)
      for target, evaluation, alpha in zip(targets, evaluations,
                                           alphas.detach().numpy())
  ]
  metrics = report.evaluate_attack(
      [o.original for o in outcomes], [o.deformed for o in outcomes],
      classifier, [o.alignment_error for o in outcomes], config.workers)
  result = results.AttackResult(
      perturbation=perturbation,
      outcomes=outcomes,
      trace=trace,
      config=config,
      metrics=metrics,
      elapsed_seconds=time.time() - start)
  logging.info('Attack fooled %d of %d shapes (%.1f%%), final loss %.6g',
               result.fooled_count, len(outcomes), result.success_rate,
               record.loss)
  return result


def run_pershape_attack(
    shapes: Sequence[surfaces.Surface],
    classifier: pointnet.ClassifierModel,
    config: config_lib.AttackConfig = config_lib.AttackConfig(),
    cache: Optional[cache_lib.DecompositionCache] = None
) -> List[results.AttackResult]:
  """Attacks every shape on its own, each with its own rho_i.

  This is the universal algorithm applied to singleton sets, so its output
  for one shape is identical to `run_universal_attack([shape], ...)`.
  """
  _check_ids(shapes)
  check_correctly_classified(shapes, classifier)
  single = attr.evolve(config, workers=1)
  return parallel.ordered_map(
      lambda shape: run_universal_attack([shape], classifier, single, cache),
      shapes, config.workers)
