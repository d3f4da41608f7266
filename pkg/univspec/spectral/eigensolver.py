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
"""Generalized symmetric eigenproblem W phi = lambda M phi.

Small operators are solved densely. Larger ones use shift-invert Lanczos
(ARPACK) around a shift just below zero: W itself is singular, so the
factorized matrix is W + eps M with eps = 1e-8 trace(W) / n.

Results are post-processed into a canonical form: ascending eigenvalues,
M-orthonormal eigenfunctions and the sign of every eigenfunction fixed so
that its largest-magnitude entry is positive.
"""

from typing import Optional

from absl import logging
import attr
import numpy as np
from scipy import linalg
from scipy import sparse
from scipy.sparse import linalg as sparse_linalg

from univspec.common import errors
from univspec.geometry import laplacians

# Operators smaller than this are solved with a dense eigensolver.
DENSE_LIMIT = 500

DEFAULT_DEGENERACY_TOLERANCE = 1e-5

_ORTHONORMALITY_TOLERANCE = 1e-10
_RESIDUAL_WARNING = 1e-8
_RESIDUAL_FAILURE = 1e-5
_ZERO_MODE_RATIO = 1e-8


class EigensolverError(errors.NumericalError):
  """The eigensolver did not converge or produced inaccurate pairs."""


class DegenerateEigenvalueError(errors.NumericalError):
  """An eigenvalue derivative was requested for a repeated eigenvalue."""


def _read_only(array: np.ndarray) -> np.ndarray:
  array = np.array(array, dtype=np.float64, copy=True)
  array.setflags(write=False)
  return array


@attr.s(auto_attribs=True, frozen=True, eq=False)
class SpectralDecomposition:
  """The q + 1 smallest eigenpairs of a LaplacianPair.

  Attributes:
    eigenvalues: Ascending array of length q + 1; entry 0 is the zero mode.
    eigenfunctions: n x (q + 1) M-orthonormal columns.
    laplacian: The operator the pairs belong to.
    disconnected: True if a second (near) zero eigenvalue was found.
    max_residual: Largest relative residual of the retained pairs.
  """

  eigenvalues: np.ndarray = attr.ib(converter=_read_only)
  eigenfunctions: np.ndarray = attr.ib(converter=_read_only)
  laplacian: laplacians.LaplacianPair
  disconnected: bool = False
  max_residual: float = 0.0

  @property
  def q(self) -> int:
    """Number of nonzero modes retained."""
    return len(self.eigenvalues) - 1

  @property
  def source_id(self) -> str:
    return self.laplacian.source_id


@attr.s(auto_attribs=True, frozen=True)
class SpectrumSlice:
  """The first k nonzero eigenvalues of a shape, in ascending order."""

  values: np.ndarray = attr.ib(converter=_read_only)

  @property
  def k(self) -> int:
    return len(self.values)

  def __len__(self) -> int:
    return self.k


def _dense_pairs(pair: laplacians.LaplacianPair, count: int):
  return linalg.eigh(
      pair.stiffness.toarray(),
      pair.mass.toarray(),
      subset_by_index=[0, count - 1])


def _shift_invert_pairs(pair: laplacians.LaplacianPair, count: int,
                        max_iterations: Optional[int]):
  n = pair.size
  shift = 1e-8 * pair.stiffness.diagonal().sum() / n
  factor = sparse_linalg.splu((pair.stiffness + shift * pair.mass).tocsc())
  inverse = sparse_linalg.LinearOperator((n, n),
                                         matvec=factor.solve,
                                         dtype=np.float64)
  start = np.random.default_rng(0).standard_normal(n)
  try:
    return sparse_linalg.eigsh(
        pair.stiffness,
        k=count,
        M=pair.mass,
        sigma=-shift,
        which='LM',
        OPinv=inverse,
        v0=start,
        maxiter=max_iterations)
  except sparse_linalg.ArpackNoConvergence as e:
    raise EigensolverError(
        f'Lanczos did not converge for {pair.source_id!r}: '
        f'{len(e.eigenvalues)} of {count} pairs after {max_iterations} '
        'iterations') from e


def _m_orthonormalize(vectors: np.ndarray,
                      mass: sparse.spmatrix) -> np.ndarray:
  gram = vectors.T @ (mass @ vectors)
  if np.max(np.abs(gram - np.eye(len(gram)))) <= _ORTHONORMALITY_TOLERANCE:
    return vectors
  try:
    cholesky = linalg.cholesky(gram, lower=True)
  except linalg.LinAlgError as e:
    raise EigensolverError('Eigenvectors are linearly dependent') from e
  return linalg.solve_triangular(cholesky, vectors.T, lower=True).T


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
  pivots = np.argmax(np.abs(vectors), axis=0)
  signs = np.sign(vectors[pivots, np.arange(vectors.shape[1])])
  signs[signs == 0] = 1.0
  return vectors * signs


def relative_residuals(pair: laplacians.LaplacianPair, eigenvalues: np.ndarray,
                       eigenfunctions: np.ndarray) -> np.ndarray:
  """|W phi - lambda M phi| / |W phi| per pair (floored for the zero mode)."""
  applied = pair.stiffness @ eigenfunctions
  residual = applied - (pair.mass @ eigenfunctions) * eigenvalues
  scale = np.abs(pair.stiffness).max() * np.linalg.norm(eigenfunctions, axis=0)
  denominator = np.maximum(np.linalg.norm(applied, axis=0), 1e-6 * scale)
  return np.linalg.norm(residual, axis=0) / denominator


def eigendecompose(laplacian: laplacians.LaplacianPair,
                   count: int,
                   max_iterations: Optional[int] = None) -> SpectralDecomposition:
  """Computes the zero mode and the q = `count` smallest nonzero modes.

  Args:
    laplacian: Operator pair (W, M).
    count: Number q of nonzero modes; q + 1 <= n.
    max_iterations: Lanczos iteration cap (ARPACK default when None).

  Returns:
    A SpectralDecomposition in canonical form.

  Raises:
    ValueError: If q + 1 > n or q < 0.
    EigensolverError: On non-convergence or residuals above 1e-5.
  """
  n = laplacian.size
  if count < 0 or count + 1 > n:
    raise ValueError(
        f'Can not compute {count + 1} eigenpairs of an operator of size {n}')

  if n < DENSE_LIMIT or count + 1 >= n - 1:
    eigenvalues, eigenfunctions = _dense_pairs(laplacian, count + 1)
  else:
    eigenvalues, eigenfunctions = _shift_invert_pairs(laplacian, count + 1,
                                                      max_iterations)

  order = np.argsort(eigenvalues, kind='stable')
  eigenvalues = eigenvalues[order]
  eigenfunctions = _m_orthonormalize(eigenfunctions[:, order], laplacian.mass)
  eigenfunctions = _fix_signs(eigenfunctions)

  if not np.all(np.isfinite(eigenvalues)):
    raise EigensolverError(
        f'Non-finite eigenvalues for {laplacian.source_id!r}')
  residuals = relative_residuals(laplacian, eigenvalues, eigenfunctions)
  max_residual = float(residuals.max())
  if max_residual > _RESIDUAL_FAILURE:
    raise EigensolverError(
        f'Eigenpair {int(residuals.argmax())} of {laplacian.source_id!r} has '
        f'relative residual {max_residual:.3g}')
  if max_residual > _RESIDUAL_WARNING:
    logging.warning('Eigenpairs of %r have relative residual up to %.3g',
                    laplacian.source_id, max_residual)

  disconnected = False
  if count >= 2 and eigenvalues[1] <= _ZERO_MODE_RATIO * eigenvalues[2]:
    disconnected = True
    logging.warning(
        'Surface %r looks disconnected: second eigenvalue %.3g is not '
        'separated from zero', laplacian.source_id, eigenvalues[1])

  return SpectralDecomposition(
      eigenvalues=eigenvalues,
      eigenfunctions=eigenfunctions,
      laplacian=laplacian,
      disconnected=disconnected,
      max_residual=max_residual)


def spectrum(decomp: SpectralDecomposition, k: int) -> SpectrumSlice:
  """Returns sigma, the eigenvalues with indices 1..k (zero mode excluded)."""
  if k < 0:
    raise ValueError(f'Spectrum length must be nonnegative, got {k}')
  if k > decomp.q:
    raise ValueError(
        f'Requested {k} eigenvalues but only {decomp.q} nonzero modes of '
        f'{decomp.source_id!r} were computed')
  return SpectrumSlice(values=decomp.eigenvalues[1:k + 1])


def degeneracy_flags(
    decomp: SpectralDecomposition,
    relative_gap_tolerance: float = DEFAULT_DEGENERACY_TOLERANCE
) -> np.ndarray:
  """Marks eigenvalues too close to a neighbour for first-order derivatives.

  Entry j is True iff min(lambda_j - lambda_{j-1}, lambda_{j+1} - lambda_j) is
  below `relative_gap_tolerance * lambda_j`, or is zero (exact ties are
  flagged for any tolerance). The last retained eigenvalue only has a lower
  neighbour; compute one extra mode when its upper gap matters.

  Args:
    decomp: A decomposition.
    relative_gap_tolerance: Relative gap threshold, >= 0.

  Returns:
    Boolean array of length q + 1, indexed like `decomp.eigenvalues`.
  """
  values = decomp.eigenvalues
  gaps = np.diff(values)
  lower = np.concatenate([[np.inf], gaps])
  upper = np.concatenate([gaps, [np.inf]])
  closest = np.minimum(lower, upper)
  return (closest < relative_gap_tolerance * values) | (closest <= 0.0)
