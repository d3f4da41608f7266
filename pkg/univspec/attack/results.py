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
"""Values produced by an attack: the shared perturbation and per-shape outcomes."""

from typing import Any, Dict, List, Optional

import attr
import numpy as np

from univspec.attack import config as config_lib
from univspec.geometry import surfaces
from univspec.metrics import report


def _finite_vector(value) -> np.ndarray:
  array = np.array(value, dtype=np.float64, copy=True).reshape(-1)
  if not np.all(np.isfinite(array)):
    raise ValueError('Perturbation contains non-finite values')
  array.setflags(write=False)
  return array


def _finite_coefficients(value) -> np.ndarray:
  array = np.array(value, dtype=np.float64, copy=True)
  if array.ndim != 2 or array.shape[1] != 3:
    raise ValueError(f'Coefficients must be b x 3, got {array.shape!r}')
  if not np.all(np.isfinite(array)):
    raise ValueError('Coefficients contain non-finite values')
  array.setflags(write=False)
  return array


@attr.s(auto_attribs=True, frozen=True, eq=False)
class UniversalPerturbation:
  """rho: one multiplicative change per eigenvalue, shared by all shapes."""

  rho: np.ndarray = attr.ib(converter=_finite_vector)

  def __attrs_post_init__(self):
    if np.any(1.0 + self.rho <= 0.0):
      bad = int(np.argmax(1.0 + self.rho <= 0.0))
      raise ValueError(
          f'1 + rho must be positive, got rho[{bad}] = {self.rho[bad]!r}')

  @property
  def k(self) -> int:
    return len(self.rho)

  @classmethod
  def zeros(cls, k: int) -> 'UniversalPerturbation':
    return cls(rho=np.zeros(k))


@attr.s(auto_attribs=True, frozen=True, eq=False)
class ShapeCoefficients:
  """alpha: b x 3 coefficients of a displacement in the eigenfunction basis."""

  alpha: np.ndarray = attr.ib(converter=_finite_coefficients)

  @property
  def b(self) -> int:
    return len(self.alpha)


@attr.s(auto_attribs=True, frozen=True)
class TraceRecord:
  """Objective terms at one iterate, before its update."""

  iteration: int
  loss: float
  spectral_loss: float
  penalty: float
  fooled: int
  skipped_modes: int

  def to_dict(self) -> Dict[str, Any]:
    return attr.asdict(self)


@attr.s(auto_attribs=True, frozen=True, eq=False)
class ShapeOutcome:
  """Final state of one attacked shape.

  Attributes:
    original: The input shape.
    deformed: X + Phi alpha at the final iterate.
    perturbation: The rho this shape was attacked with (shared object).
    coefficients: Final alpha.
    original_label: Predicted (and true) class of the input.
    final_label: Predicted class of the deformed shape.
    spectral_loss: Final squared alignment residual.
    penalty: Final clamped logit gap.
    sigma_original: sigma(X).
    sigma_deformed: sigma(X + Phi alpha).
  """

  original: surfaces.Surface
  deformed: surfaces.Surface
  perturbation: UniversalPerturbation
  coefficients: ShapeCoefficients
  original_label: int
  final_label: int
  spectral_loss: float
  penalty: float
  sigma_original: np.ndarray
  sigma_deformed: np.ndarray

  @property
  def id(self) -> str:
    return self.original.id

  @property
  def fooled(self) -> bool:
    return self.final_label != self.original_label

  @property
  def sigma_target(self) -> np.ndarray:
    return self.sigma_original * (1.0 + self.perturbation.rho)

  @property
  def alignment_error(self) -> float:
    return float(np.linalg.norm(self.sigma_target - self.sigma_deformed))


@attr.s(auto_attribs=True, frozen=True, eq=False)
class AttackResult:
  """Output of one attack run over a set of shapes sharing one rho.

  Attributes:
    perturbation: The shared rho; every outcome references this instance.
    outcomes: One record per input shape, in input order.
    trace: One record per iteration.
    config: The configuration the run used.
    metrics: Noticeability and efficacy recomputed from the final geometry.
    elapsed_seconds: Wall-clock duration.
  """

  perturbation: UniversalPerturbation
  outcomes: List[ShapeOutcome]
  trace: List[TraceRecord]
  config: config_lib.AttackConfig
  metrics: Optional[report.MetricReport] = None
  elapsed_seconds: float = 0.0

  @property
  def seed(self) -> int:
    return self.config.seed

  @property
  def fooled_count(self) -> int:
    return sum(outcome.fooled for outcome in self.outcomes)

  @property
  def success_rate(self) -> float:
    return 100.0 * self.fooled_count / len(self.outcomes)

  def outcome(self, shape_id: str) -> Optional[ShapeOutcome]:
    for outcome in self.outcomes:
      if outcome.id == shape_id:
        return outcome
    return None
