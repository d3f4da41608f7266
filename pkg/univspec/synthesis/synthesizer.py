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
"""Shape from spectrum with a fixed multiplicative perturbation.

Given a shape X and a perturbation rho, find alpha so that the spectrum of
X + Phi alpha matches sigma(X) (1 + rho). Only the spectral alignment term is
minimized; the displacement stays in the span of the first b eigenfunctions
of X and is therefore smooth.
"""

import time
from typing import List, Optional, Tuple, Union

from absl import logging
import attr
import numpy as np
import torch

from univspec.attack import config as attack_config
from univspec.attack import objectives
from univspec.attack import results
from univspec.classifier import pointnet
from univspec.geometry import laplacians
from univspec.geometry import surfaces
from univspec.spectral import cache as cache_lib
from univspec.spectral import eigensolver

PerturbationLike = Union[np.ndarray, results.UniversalPerturbation]


@attr.s(auto_attribs=True, frozen=True, kw_only=True)
class SynthesisConfig:
  """Parameters of shape-from-spectrum synthesis.

  Attributes:
    k: Spectrum length; must equal the length of rho.
    b: Number of eigenfunctions spanning the displacement.
    iterations: Adam step budget.
    learning_rate: Adam step size for alpha.
    tolerance: Stop once the alignment error falls below tolerance * |sigma|.
    margin: Margin of the logged adversarial penalty.
    degeneracy_tolerance: As in AttackConfig.
    seed: Stage seed, recorded in results. Synthesis starts from alpha = 0 and
      draws no random numbers.
    eigen_count: Nonzero modes per decomposition (default max(k, b) + 1).
    neighbors: Graph neighbours for point clouds.
    bandwidth: Heat-kernel time for point clouds, or 'auto'.
    workers: Threads used across shapes by `generalize`.
    log_every: Iterations between progress lines.
  """

  k: int = attr.ib(default=60, validator=attr.validators.ge(1))
  b: int = attr.ib(default=20, validator=attr.validators.ge(1))
  iterations: int = attr.ib(default=300, validator=attr.validators.ge(1))
  learning_rate: float = attr.ib(default=1e-3, validator=attr.validators.gt(0))
  tolerance: float = attr.ib(default=1e-6, validator=attr.validators.gt(0))
  margin: float = attr.ib(default=1.0, validator=attr.validators.ge(0.0))
  degeneracy_tolerance: float = attr.ib(
      default=eigensolver.DEFAULT_DEGENERACY_TOLERANCE,
      validator=attr.validators.ge(0.0))
  seed: int = 0
  eigen_count: Optional[int] = None
  neighbors: int = attr.ib(
      default=laplacians.DEFAULT_NEIGHBORS, validator=attr.validators.ge(3))
  bandwidth: Union[str, float] = 'auto'
  workers: int = attr.ib(default=1, validator=attr.validators.ge(1))
  log_every: int = attr.ib(default=25, validator=attr.validators.ge(1))

  def objective_config(self) -> attack_config.AttackConfig:
    """The attack configuration whose objective is the alignment term alone."""
    return attack_config.AttackConfig(
        k=self.k,
        b=self.b,
        c=0.0,
        iterations=self.iterations,
        learning_rate_alpha=self.learning_rate,
        degeneracy_tolerance=self.degeneracy_tolerance,
        seed=self.seed,
        eigen_count=self.eigen_count,
        neighbors=self.neighbors,
        bandwidth=self.bandwidth,
        log_every=self.log_every)


@attr.s(auto_attribs=True, frozen=True, eq=False)
class SynthesisResult:
  """A synthesized shape and how well its spectrum matches the target.

  Attributes:
    original: The input shape.
    deformed: X + Phi alpha at the returned iterate.
    coefficients: alpha.
    perturbation: The rho that defined the target.
    sigma_original: sigma(X).
    sigma_deformed: sigma(X + Phi alpha).
    alignment_trace: Alignment error at every evaluated iterate.
    penalty_trace: (iteration, clamped logit gap) pairs, logged only.
    label_before: Prediction on X, when a classifier was given.
    label_after: Prediction on the synthesized shape.
    converged: Whether the tolerance was reached.
  """

  original: surfaces.Surface
  deformed: surfaces.Surface
  coefficients: results.ShapeCoefficients
  perturbation: results.UniversalPerturbation
  sigma_original: np.ndarray
  sigma_deformed: np.ndarray
  alignment_trace: List[float]
  penalty_trace: List[Tuple[int, float]] = attr.Factory(list)
  label_before: Optional[int] = None
  label_after: Optional[int] = None
  converged: bool = False
  elapsed_seconds: float = 0.0

  @property
  def id(self) -> str:
    return self.original.id

  @property
  def sigma_target(self) -> np.ndarray:
    return perturb_spectrum(self.sigma_original, self.perturbation)

  @property
  def initial_alignment_error(self) -> float:
    return self.alignment_trace[0]

  @property
  def alignment_error(self) -> float:
    return self.alignment_trace[-1]

  @property
  def fooled(self) -> Optional[bool]:
    if self.label_before is None or self.label_after is None:
      return None
    return self.label_after != self.label_before


def _as_perturbation(rho: PerturbationLike) -> results.UniversalPerturbation:
  if isinstance(rho, results.UniversalPerturbation):
    return rho
  return results.UniversalPerturbation(rho=rho)


def perturb_spectrum(sigma, rho: PerturbationLike) -> np.ndarray:
  """sigma * (1 + rho), element by element and deliberately not re-sorted.

  Raises:
    ValueError: On a length mismatch or if some 1 + rho_j <= 0.
  """
  sigma = objectives.spectrum_values(sigma)
  rho = objectives.rho_values(rho)
  if len(sigma) != len(rho):
    raise ValueError(
        f'Spectrum has {len(sigma)} values but rho has {len(rho)}')
  if np.any(1.0 + rho <= 0.0):
    raise ValueError(
        f'1 + rho must be positive, got min(rho) = {rho.min()!r}')
  return sigma * (1.0 + rho)


def invert_perturbation(rho: PerturbationLike) -> results.UniversalPerturbation:
  """The perturbation undoing rho: (1 + rho)(1 + rho') = 1."""
  rho = _as_perturbation(rho).rho
  return results.UniversalPerturbation(rho=-rho / (1.0 + rho))


def alignment_error(shape: surfaces.Surface,
                    rho: PerturbationLike,
                    alpha: np.ndarray,
                    k: int,
                    b: Optional[int] = None,
                    neighbors: int = laplacians.DEFAULT_NEIGHBORS,
                    bandwidth: Union[str, float] = 'auto') -> float:
  """|sigma(X) (1 + rho) - sigma(X + Phi alpha)| with Phi from X itself.

  `b` defaults to the number of rows of alpha.
  """
  alpha = np.asarray(alpha, dtype=np.float64)
  config = attack_config.AttackConfig(
      k=k,
      b=len(alpha) if b is None else b,
      c=0.0,
      neighbors=neighbors,
      bandwidth=bandwidth)
  target = objectives.prepare_target(shape, config, require_label=False)
  evaluation = objectives.evaluate_target(
      target,
      _as_perturbation(rho).rho,
      alpha,
      None,
      config,
      with_gradients=False)
  return float(np.sqrt(evaluation.spectral_loss))


def synthesize_from_spectrum(
    shape: surfaces.Surface,
    rho: PerturbationLike,
    config: SynthesisConfig = SynthesisConfig(),
    classifier: Optional[pointnet.ClassifierModel] = None,
    cache: Optional[cache_lib.DecompositionCache] = None) -> SynthesisResult:
  """Deforms `shape` until its spectrum matches sigma(shape) (1 + rho).

  Adam runs over alpha alone, from alpha = 0, with rho fixed. When a
  classifier is given, its prediction before and after is recorded and the
  adversarial penalty is logged every `log_every` iterations; the classifier
  never contributes to the gradient.

  Args:
    shape: The shape to deform (labels are optional).
    rho: Perturbation of length `config.k`.
    config: Synthesis parameters.
    classifier: Optional model whose predictions are recorded.
    cache: Optional decomposition cache for the input shape.

  Returns:
    The SynthesisResult at the last evaluated iterate.

  Raises:
    ValueError: If rho does not have length k or 1 + rho is not positive.
    EigensolverError: If a decomposition fails.
  """
  start = time.time()
  perturbation = _as_perturbation(rho)
  if perturbation.k != config.k:
    raise ValueError(
        f'rho has length {perturbation.k} but the synthesis uses k={config.k}')
  objective_config = config.objective_config()
  target = objectives.prepare_target(
      shape, objective_config, cache, require_label=False)
  stop = config.tolerance * np.linalg.norm(target.sigma)

  label_before = None
  if classifier is not None:
    label_before = pointnet.predict(classifier, shape.vertices)
  alpha = torch.zeros((config.b, 3), dtype=torch.float64, requires_grad=True)
  optimizer = torch.optim.Adam([alpha], lr=config.learning_rate)
  trace = []
  penalties = []
  converged = False
  evaluation = None
  for iteration in range(config.iterations + 1):
    evaluation = objectives.evaluate_target(
        target,
        perturbation.rho,
        alpha.detach().numpy().copy(),
        None,
        objective_config,
        with_gradients=iteration < config.iterations)
    error = float(np.sqrt(evaluation.spectral_loss))
    trace.append(error)
    if not np.isfinite(error):
      raise eigensolver.EigensolverError(
          f'Alignment error became {error!r} while synthesizing {shape.id!r}')
    if classifier is not None and iteration % config.log_every == 0:
      logits = pointnet.forward(classifier, evaluation.deformed.vertices)
      penalty = objectives.adversarial_penalty(logits, label_before,
                                               config.margin)
      penalties.append((iteration, penalty))
      logging.info('%s iteration %d: alignment error %.4g, penalty %.4g',
                   shape.id, iteration, error, penalty)
    if error <= stop:
      converged = True
      break
    if iteration == config.iterations:
      break
    optimizer.zero_grad()
    alpha.grad = torch.from_numpy(evaluation.grad_alpha)
    optimizer.step()

  label_after = None
  if classifier is not None:
    label_after = pointnet.predict(classifier, evaluation.deformed.vertices)
  logging.info(
      'Synthesized %s: alignment error %.4g -> %.4g after %d iterations%s',
      shape.id, trace[0], trace[-1],
      len(trace) - 1, ' (converged)' if converged else '')
  return SynthesisResult(
      original=shape,
      deformed=evaluation.deformed,
      coefficients=results.ShapeCoefficients(alpha=alpha.detach().numpy()),
      perturbation=perturbation,
      sigma_original=target.sigma,
      sigma_deformed=evaluation.sigma_deformed,
      alignment_trace=trace,
      penalty_trace=penalties,
      label_before=label_before,
      label_after=label_after,
      converged=converged,
      elapsed_seconds=time.time() - start)
