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
"""The penalized attack objective and its gradients.

For shapes X_i with fixed bases Phi_i the attack minimizes

  E(rho, alpha) = sum_i |sigma(X_i) (1 + rho) - sigma(X_i + Phi_i alpha_i)|^2
                  + c * mu(Z_true(X_i + Phi_i alpha_i) - max_j!=true Z_j),

with mu(x) = max(x, -m). The spectral term is differentiated in closed form
through the eigenvalue derivatives; the penalty through the classifier.
"""

from typing import List, Optional, Sequence, Tuple, Union

import attr
import numpy as np

from univspec.attack import config as config_lib
from univspec.attack import results
from univspec.classifier import pointnet
from univspec.common import errors
from univspec.common import parallel
from univspec.geometry import laplacians
from univspec.geometry import surfaces
from univspec.spectral import cache as cache_lib
from univspec.spectral import eigen_gradients
from univspec.spectral import eigensolver

ArrayOrSlice = Union[np.ndarray, eigensolver.SpectrumSlice]
ArrayOrPerturbation = Union[np.ndarray, results.UniversalPerturbation]


def spectrum_values(sigma: ArrayOrSlice) -> np.ndarray:
  if isinstance(sigma, eigensolver.SpectrumSlice):
    return sigma.values
  return np.asarray(sigma, dtype=np.float64)


def rho_values(rho: ArrayOrPerturbation) -> np.ndarray:
  if isinstance(rho, results.UniversalPerturbation):
    return rho.rho
  return np.asarray(rho, dtype=np.float64)


def logit_gap(logits: np.ndarray, true_class: int) -> Tuple[float, int]:
  """Returns (Z_true - max other logit, index of that other logit)."""
  logits = np.asarray(logits, dtype=np.float64)
  if len(logits) < 2:
    raise ValueError(f'Need at least 2 logits, got {len(logits)}')
  if not 0 <= true_class < len(logits):
    raise ValueError(
        f'True class {true_class} outside [0, {len(logits)})')
  competitors = np.delete(np.arange(len(logits)), true_class)
  other = int(competitors[np.argmax(logits[competitors])])
  return float(logits[true_class] - logits[other]), other


def adversarial_penalty(logits: np.ndarray, true_class: int,
                        margin: float) -> float:
  """mu(Z_true - max_{j != true} Z_j) with mu(x) = max(x, -margin)."""
  gap, _ = logit_gap(logits, true_class)
  return max(gap, -margin)


def spectral_alignment_loss(sigma_original: ArrayOrSlice,
                            rho: ArrayOrPerturbation,
                            sigma_deformed: ArrayOrSlice) -> float:
  """sum_j (sigma_j (1 + rho_j) - sigma'_j)^2, index by index."""
  sigma, rho, deformed = (spectrum_values(sigma_original), rho_values(rho),
                          spectrum_values(sigma_deformed))
  if not len(sigma) == len(rho) == len(deformed):
    raise ValueError(
        f'Length mismatch: sigma {len(sigma)}, rho {len(rho)}, deformed '
        f'sigma {len(deformed)}')
  return float(np.sum((sigma * (1.0 + rho) - deformed)**2))


@attr.s(auto_attribs=True, frozen=True, eq=False)
class AttackTarget:
  """A shape prepared for attack: its operator and frozen basis.

  Attributes:
    surface: The original shape X.
    label: Its class (None only for unlabelled synthesis inputs).
    discretization: Rebuilds the operator of displaced coordinates.
    decomposition: Eigenpairs of the original operator.
    basis: Phi, the first b eigenfunctions (constant mode included).
    sigma: sigma(X), the first k nonzero eigenvalues.
  """

  surface: surfaces.Surface
  label: Optional[int]
  discretization: laplacians.Discretization
  decomposition: eigensolver.SpectralDecomposition
  basis: np.ndarray
  sigma: np.ndarray

  @property
  def id(self) -> str:
    return self.surface.id

  def displaced(self, alpha: np.ndarray) -> surfaces.Surface:
    return surfaces.apply_displacement(self.surface, self.basis, alpha)


def prepare_target(
    surface: surfaces.Surface,
    config: config_lib.AttackConfig,
    cache: Optional[cache_lib.DecompositionCache] = None,
    require_label: bool = True) -> AttackTarget:
  """Computes the original decomposition, basis and spectrum of a shape."""
  if require_label and surface.label is None:
    raise errors.InputError(f'Shape {surface.id!r} has no label')
  discretization = laplacians.discretization_for(surface, config.neighbors,
                                                 config.bandwidth)
  if cache is not None:
    decomp = cache.get_or_compute(surface, config.modes, discretization)
  else:
    decomp = eigensolver.eigendecompose(
        discretization.operator(surface.vertices, surface.id), config.modes)
  return AttackTarget(
      surface=surface,
      label=surface.label,
      discretization=discretization,
      decomposition=decomp,
      basis=decomp.eigenfunctions[:, :config.b],
      sigma=eigensolver.spectrum(decomp, config.k).values)


@attr.s(auto_attribs=True, frozen=True, eq=False)
class ShapeEvaluation:
  """Objective terms and gradients of one shape at one iterate."""

  deformed: surfaces.Surface
  label: int
  predicted: int
  sigma_deformed: np.ndarray
  residual: np.ndarray
  spectral_loss: float
  logits: np.ndarray
  penalty: float
  skipped_modes: int
  grad_rho: Optional[np.ndarray] = None
  grad_alpha: Optional[np.ndarray] = None

  @property
  def fooled(self) -> bool:
    return self.predicted != self.label


class ShapeEigensolverError(eigensolver.EigensolverError):
  """The eigensolver failed on a deformed shape."""


def evaluate_target(target: AttackTarget,
                    rho: np.ndarray,
                    alpha: np.ndarray,
                    classifier: Optional[pointnet.ClassifierModel],
                    config: config_lib.AttackConfig,
                    with_gradients: bool = True) -> ShapeEvaluation:
  """Objective terms (and optionally gradients) for one shape.

  With `classifier=None` only the spectral term is evaluated; this is the
  synthesis objective.
  """
  k = config.k
  deformed = target.displaced(alpha)
  try:
    decomp = eigensolver.eigendecompose(
        target.discretization.operator(deformed.vertices, deformed.id),
        config.modes)
  except eigensolver.EigensolverError as e:
    raise ShapeEigensolverError(
        f'Eigensolver failed on deformed shape {target.id!r}: {e}') from e
  sigma_deformed = decomp.eigenvalues[1:k + 1]
  residual = target.sigma * (1.0 + rho) - sigma_deformed
  spectral_loss = float(residual @ residual)
  flags = eigensolver.degeneracy_flags(decomp,
                                       config.degeneracy_tolerance)[1:k + 1]

  logits = np.zeros(0)
  penalty = 0.0
  predicted = target.label
  gap, other = 0.0, -1
  if classifier is not None:
    logits = pointnet.forward(classifier, deformed.vertices)
    predicted = pointnet.predict_logits(logits)
    gap, other = logit_gap(logits, target.label)
    penalty = max(gap, -config.margin)

  grad_rho = grad_alpha = None
  if with_gradients:
    grad_vertices = np.zeros_like(deformed.vertices)
    grad_rho = np.zeros(k)
    if config.spectral_term:
      grad_rho = 2.0 * residual * target.sigma
      weights = np.zeros(decomp.q + 1)
      weights[1:k + 1] = np.where(flags, 0.0, -2.0 * residual)
      grad_vertices += eigen_gradients.weighted_eigenvalue_gradient(
          target.discretization, deformed.vertices, decomp, weights)
    if classifier is not None and config.c > 0 and gap > -config.margin:
      grad_vertices += config.c * pointnet.logit_gap_gradient(
          classifier, deformed.vertices, target.label, other)
    grad_alpha = target.basis.T @ grad_vertices

  return ShapeEvaluation(
      deformed=deformed,
      label=target.label,
      predicted=predicted,
      sigma_deformed=sigma_deformed,
      residual=residual,
      spectral_loss=spectral_loss,
      logits=logits,
      penalty=penalty,
      skipped_modes=int(np.count_nonzero(flags)),
      grad_rho=grad_rho,
      grad_alpha=grad_alpha)


def objective(evaluations: Sequence[ShapeEvaluation],
              config: config_lib.AttackConfig) -> Tuple[float, float, float]:
  """Returns (total loss, spectral loss sum, penalty sum)."""
  spectral = sum(e.spectral_loss for e in evaluations)
  penalty = sum(e.penalty for e in evaluations)
  total = config.c * penalty
  if config.spectral_term:
    total += spectral
  return total, spectral, penalty


def evaluate_all(targets: Sequence[AttackTarget],
                 rho: np.ndarray,
                 alphas: Sequence[np.ndarray],
                 classifier: Optional[pointnet.ClassifierModel],
                 config: config_lib.AttackConfig,
                 with_gradients: bool = True) -> List[ShapeEvaluation]:
  """`evaluate_target` for every shape, in input order."""
  if len(alphas) != len(targets):
    raise ValueError(f'Got {len(alphas)} coefficient arrays for '
                     f'{len(targets)} shapes')
  return parallel.ordered_map(
      lambda pair: evaluate_target(pair[0], rho, pair[1], classifier, config,
                                   with_gradients),
      list(zip(targets, alphas)), config.workers)


def attack_gradients(
    targets: Sequence[AttackTarget], rho: ArrayOrPerturbation,
    alphas: Sequence[np.ndarray], classifier: pointnet.ClassifierModel,
    config: config_lib.AttackConfig) -> Tuple[np.ndarray, List[np.ndarray]]:
  """Gradients of the objective with respect to rho and every alpha_i.

  Args:
    targets: Prepared shapes (see `prepare_target`).
    rho: Current perturbation, length k.
    alphas: Current b x 3 coefficients, one per shape.
    classifier: The attacked model.
    config: Attack parameters.

  Returns:
    (grad_rho, [grad_alpha_i]). Degenerate modes contribute nothing.
  """
  evaluations = evaluate_all(targets, rho_values(rho), alphas, classifier,
                             config)
  grad_rho = np.sum([e.grad_rho for e in evaluations], axis=0)
  return grad_rho, [e.grad_alpha for e in evaluations]
