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
"""Closed-form derivatives of eigenvalues with respect to vertex positions.

For a simple eigenpair of W phi = lambda M phi,

  d lambda = phi^T (dW - lambda dM) phi / (phi^T M phi).

Both W and M are sums of small local terms (triangles for meshes, graph edges
for clouds), so the derivative is assembled locally from the derivatives of
corner cotangents and triangle areas, or of Gaussian edge weights.

`weighted_eigenvalue_gradient` computes sum_j w_j d lambda_j / dX in a single
pass, which is what loss functions over a whole spectrum need.
"""

import numpy as np

from univspec.geometry import laplacians
from univspec.geometry import surfaces
from univspec.spectral import eigensolver


def _cotangent_gradients(u: np.ndarray, v: np.ndarray):
  """Gradients of cot(angle between u and v) with respect to u and v."""
  dot = np.einsum('ij,ij->i', u, v)
  uu = np.einsum('ij,ij->i', u, u)
  vv = np.einsum('ij,ij->i', v, v)
  s = np.linalg.norm(np.cross(u, v), axis=1)
  ds_du = (u * vv[:, None] - v * dot[:, None]) / s[:, None]
  ds_dv = (v * uu[:, None] - u * dot[:, None]) / s[:, None]
  ratio = (dot / s**2)[:, None]
  return v / s[:, None] - ratio * ds_du, u / s[:, None] - ratio * ds_dv


def _area_gradients(u: np.ndarray, v: np.ndarray):
  """Gradients of the area |u x v| / 2 with respect to u and v."""
  dot = np.einsum('ij,ij->i', u, v)
  uu = np.einsum('ij,ij->i', u, u)
  vv = np.einsum('ij,ij->i', v, v)
  s = np.linalg.norm(np.cross(u, v), axis=1)[:, None]
  return ((u * vv[:, None] - v * dot[:, None]) / (2 * s),
          (v * uu[:, None] - u * dot[:, None]) / (2 * s))


def _scatter(gradient: np.ndarray, a: np.ndarray, b: np.ndarray, c: np.ndarray,
             grad_u: np.ndarray, grad_v: np.ndarray) -> None:
  """Adds d/du at b, d/dv at c and -(d/du + d/dv) at a (u = b - a, v = c - a)."""
  np.add.at(gradient, b, grad_u)
  np.add.at(gradient, c, grad_v)
  np.add.at(gradient, a, -(grad_u + grad_v))


def _mesh_gradient(faces: np.ndarray, vertices: np.ndarray,
                   eigenvalues: np.ndarray, eigenfunctions: np.ndarray,
                   weights: np.ndarray) -> np.ndarray:
  gradient = np.zeros_like(vertices)
  for corner in range(3):
    a = faces[:, corner]
    b = faces[:, (corner + 1) % 3]
    c = faces[:, (corner + 2) % 3]
    # phi^T W phi gets cot(a) / 2 * (phi_b - phi_c)^2 from this corner.
    edge_energy = 0.5 * (eigenfunctions[b] - eigenfunctions[c])**2 @ weights
    grad_u, grad_v = _cotangent_gradients(vertices[b] - vertices[a],
                                          vertices[c] - vertices[a])
    _scatter(gradient, a, b, c, edge_energy[:, None] * grad_u,
             edge_energy[:, None] * grad_v)

  a, b, c = faces[:, 0], faces[:, 1], faces[:, 2]
  # phi^T M phi gets A_t / 3 * (phi_a^2 + phi_b^2 + phi_c^2) from triangle t.
  mass_energy = -(eigenfunctions[a]**2 + eigenfunctions[b]**2 +
                  eigenfunctions[c]**2) / 3.0 @ (weights * eigenvalues)
  grad_u, grad_v = _area_gradients(vertices[b] - vertices[a],
                                   vertices[c] - vertices[a])
  _scatter(gradient, a, b, c, mass_energy[:, None] * grad_u,
           mass_energy[:, None] * grad_v)
  return gradient


def _graph_gradient(discretization: laplacians.GraphDiscretization,
                    vertices: np.ndarray, eigenvalues: np.ndarray,
                    eigenfunctions: np.ndarray,
                    weights: np.ndarray) -> np.ndarray:
  edges = discretization.edges
  t = discretization.bandwidth
  i, j = edges[:, 0], edges[:, 1]
  kernel, squared = laplacians.graph_edge_weights(vertices, edges, t)
  delta = vertices[i] - vertices[j]
  stiffness_energy = (eigenfunctions[i] - eigenfunctions[j])**2 @ weights
  mass_energy = 0.25 * (eigenfunctions[i]**2 +
                        eigenfunctions[j]**2) @ (weights * eigenvalues)
  # d w / d x_i = -w d / (2t);  d (w |d|^2) / d x_i = w d (2 - |d|^2 / (2t)).
  scale = kernel * (-stiffness_energy / (2 * t) - mass_energy *
                    (2.0 - squared / (2 * t)))
  contribution = scale[:, None] * delta
  gradient = np.zeros_like(vertices)
  np.add.at(gradient, i, contribution)
  np.add.at(gradient, j, -contribution)
  return gradient


def weighted_eigenvalue_gradient(discretization: laplacians.Discretization,
                                 vertices: np.ndarray,
                                 decomp: eigensolver.SpectralDecomposition,
                                 weights: np.ndarray) -> np.ndarray:
  """Returns sum_j weights[j] * d lambda_j / d vertices as an n x 3 array.

  Args:
    discretization: How the operator of `decomp` was built from `vertices`.
    vertices: The coordinates the decomposition was computed at.
    decomp: Eigenpairs of `discretization.operator(vertices)`.
    weights: Length q + 1 array indexed like `decomp.eigenvalues`. Entries
      of degenerate eigenvalues must be zero.

  Returns:
    The gradient field.
  """
  weights = np.asarray(weights, dtype=np.float64)
  if weights.shape != decomp.eigenvalues.shape:
    raise ValueError(
        f'Expected {len(decomp.eigenvalues)} weights, got shape '
        f'{weights.shape!r}')
  vertices = np.asarray(vertices, dtype=np.float64)
  used = np.flatnonzero(weights)
  if used.size == 0:
    return np.zeros_like(vertices)

  eigenfunctions = decomp.eigenfunctions[:, used]
  norms = np.einsum('ij,ij->j', eigenfunctions,
                    decomp.laplacian.mass @ eigenfunctions)
  scaled = weights[used] / norms
  eigenvalues = decomp.eigenvalues[used]
  if isinstance(discretization, laplacians.CotangentDiscretization):
    return _mesh_gradient(discretization.faces, vertices, eigenvalues,
                          eigenfunctions, scaled)
  if isinstance(discretization, laplacians.GraphDiscretization):
    return _graph_gradient(discretization, vertices, eigenvalues,
                           eigenfunctions, scaled)
  raise TypeError(
      f'No eigenvalue derivative for {type(discretization).__name__}')


def eigenvalue_gradient(
    mesh: surfaces.Surface,
    decomp: eigensolver.SpectralDecomposition,
    index: int,
    relative_gap_tolerance: float = eigensolver.DEFAULT_DEGENERACY_TOLERANCE
) -> np.ndarray:
  """d lambda_index / d x_v for every vertex v of a mesh.

  Raises:
    SurfaceError: If `mesh` is a point cloud.
    DegenerateEigenvalueError: If lambda_index is not simple.
  """
  if not mesh.is_mesh:
    raise surfaces.SurfaceError(
        f'Surface {mesh.id!r} is a point cloud; use '
        'weighted_eigenvalue_gradient with its discretization')
  if not 0 <= index <= decomp.q:
    raise ValueError(f'Eigenvalue index {index} outside [0, {decomp.q}]')
  if eigensolver.degeneracy_flags(decomp, relative_gap_tolerance)[index]:
    raise eigensolver.DegenerateEigenvalueError(
        f'Eigenvalue {index} of {mesh.id!r} ({decomp.eigenvalues[index]:.6g}) '
        'is repeated within the tolerance; its derivative is undefined')
  weights = np.zeros(decomp.q + 1)
  weights[index] = 1.0
  return weighted_eigenvalue_gradient(
      laplacians.CotangentDiscretization(faces=mesh.faces), mesh.vertices,
      decomp, weights)
