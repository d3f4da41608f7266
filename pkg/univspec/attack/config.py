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
"""Attack hyperparameters."""

from typing import Optional, Union

import attr

from univspec.geometry import laplacians
from univspec.spectral import eigensolver


def _positive(instance, attribute, value):
  del instance
  if not value > 0:
    raise ValueError(f'{attribute.name} must be positive, got {value!r}')


def _bandwidth(instance, attribute, value):
  del instance
  if value != 'auto' and not (isinstance(value, (int, float)) and value > 0):
    raise ValueError(
        f"{attribute.name} must be 'auto' or a positive number, got {value!r}")


@attr.s(auto_attribs=True, frozen=True, kw_only=True)
class AttackConfig:
  """Parameters of the universal (and per-shape) spectral attack.

  Attributes:
    k: Length of the spectral representation and of rho.
    b: Number of eigenfunctions spanning each displacement field.
    c: Weight of the adversarial penalty.
    margin: Logit margin m at which the penalty stops pulling.
    iterations: Adam steps.
    learning_rate_rho: Adam step size for rho.
    learning_rate_alpha: Adam step size for the coefficients.
    degeneracy_tolerance: Relative eigenvalue gap below which a mode is
      treated as repeated and skipped for that iteration.
    seed: Stage seed, recorded in results and bundles. The optimization starts
      from rho = 0 and alpha = 0 and draws no random numbers.
    spectral_term: When False the spectral alignment term is dropped and
      only the penalty is minimized (a baseline without smoothness energy).
    eigen_count: Nonzero modes computed per shape; at least max(k, b).
      Defaults to max(k, b) + 1 so the top mode of sigma has an upper
      neighbour for the degeneracy check.
    neighbors: Graph neighbours for point clouds.
    bandwidth: Heat-kernel time for point clouds, or 'auto'.
    rho_floor: rho is kept >= -1 + rho_floor so eigenvalues stay positive.
    workers: Threads used for per-shape work within an iteration.
    log_every: Iterations between progress lines.
  """

  k: int = attr.ib(default=60, validator=attr.validators.ge(1))
  b: int = attr.ib(default=20, validator=attr.validators.ge(1))
  c: float = attr.ib(default=5e-2, validator=attr.validators.ge(0.0))
  margin: float = attr.ib(default=1.0, validator=attr.validators.ge(0.0))
  iterations: int = attr.ib(default=500, validator=attr.validators.ge(1))
  learning_rate_rho: float = attr.ib(default=1e-3, validator=_positive)
  learning_rate_alpha: float = attr.ib(default=1e-3, validator=_positive)
  degeneracy_tolerance: float = attr.ib(
      default=eigensolver.DEFAULT_DEGENERACY_TOLERANCE,
      validator=attr.validators.ge(0.0))
  seed: int = 0
  spectral_term: bool = True
  eigen_count: Optional[int] = attr.ib(default=None)
  neighbors: int = attr.ib(
      default=laplacians.DEFAULT_NEIGHBORS, validator=attr.validators.ge(3))
  bandwidth: Union[str, float] = attr.ib(default='auto', validator=_bandwidth)
  rho_floor: float = attr.ib(default=1e-3, validator=_positive)
  workers: int = attr.ib(default=1, validator=attr.validators.ge(1))
  log_every: int = attr.ib(default=25, validator=attr.validators.ge(1))

  @eigen_count.validator
  def _check_eigen_count(self, attribute, value):
    if value is not None and value < max(self.k, self.b):
      raise ValueError(
          f'{attribute.name}={value} is below max(k, b)='
          f'{max(self.k, self.b)}')

  @property
  def modes(self) -> int:
    """Number of nonzero eigenpairs computed for every shape."""
    if self.eigen_count is not None:
      return self.eigen_count
    return max(self.k, self.b) + 1

  def to_dict(self):
    return attr.asdict(self)
