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
"""Discrete Laplace-Beltrami operators as (stiffness, mass) pairs.

Both discretizations produce a symmetric positive semi-definite stiffness
matrix W with zero row sums and a positive diagonal mass matrix M, so that the
spectrum is given by the generalized problem W phi = lambda M phi.

  * Meshes use the cotangent scheme with lumped (one third of the incident
    triangle areas) vertex masses.
  * Point clouds use a symmetrized k-nearest-neighbour graph with Gaussian
    weights exp(-|x_i - x_j|^2 / 4t). The diagonal mass is the local second
    moment of the kernel, M_i = 1/4 sum_j w_ij |x_i - x_j|^2, which calibrates
    M^-1 W to the Laplacian of quadratic functions on locally isotropic
    samples. This stands in for a point-set finite element operator.

A `Discretization` freezes everything except the coordinates (faces for
meshes; neighbour graph and bandwidth for clouds). Rebuilding the operator of
a displaced shape through its discretization keeps the operator a smooth
function of the coordinates, which is what the eigenvalue derivatives assume.
"""

import abc
from typing import Union

from absl import logging
import attr
import numpy as np
from scipy import sparse
from scipy import spatial

from univspec.common import errors
from univspec.geometry import surfaces

# Faces whose area is below this fraction of the mean area are degenerate.
_ZERO_AREA_FRACTION = 1e-12

DEFAULT_NEIGHBORS = 10


class DegenerateFaceError(errors.InputError):
  """A mesh has a (numerically) zero-area face."""


class DuplicatePointError(errors.InputError):
  """Two distinct points of a cloud coincide."""


@attr.s(auto_attribs=True, frozen=True, eq=False)
class LaplacianPair:
  """Stiffness/mass pair of a discrete Laplace-Beltrami operator.

  Attributes:
    stiffness: n x n symmetric PSD CSR matrix W with zero row sums.
    mass: n x n diagonal CSR matrix M with positive diagonal.
    source_id: Id of the surface the operator was built from.
  """

  stiffness: sparse.csr_matrix
  mass: sparse.csr_matrix
  source_id: str = ''

  @property
  def size(self) -> int:
    return self.stiffness.shape[0]

  @property
  def mass_diagonal(self) -> np.ndarray:
    return self.mass.diagonal()


def _assemble(rows: np.ndarray, cols: np.ndarray, weights: np.ndarray,
              mass: np.ndarray, source_id: str) -> LaplacianPair:
  """Builds W = D - S from symmetric off-diagonal weights S_ij = weights."""
  n = len(mass)
  off = sparse.coo_matrix(
      (np.concatenate([-weights, -weights]),
       (np.concatenate([rows, cols]), np.concatenate([cols, rows]))),
      shape=(n, n)).tocsr()
  off = 0.5 * (off + off.T)
  diagonal = -np.asarray(off.sum(axis=1)).ravel()
  stiffness = (off + sparse.diags(diagonal)).tocsr()
  return LaplacianPair(
      stiffness=stiffness,
      mass=sparse.diags(mass).tocsr(),
      source_id=source_id)


def cotangents(vertices: np.ndarray, faces: np.ndarray) -> np.ndarray:
  """Returns the m x 3 cotangents of the interior angle at every corner."""
  result = np.empty(faces.shape, dtype=np.float64)
  for corner in range(3):
    a = faces[:, corner]
    b = faces[:, (corner + 1) % 3]
    c = faces[:, (corner + 2) % 3]
    u = vertices[b] - vertices[a]
    v = vertices[c] - vertices[a]
    result[:, corner] = np.einsum('ij,ij->i', u, v) / np.linalg.norm(
        np.cross(u, v), axis=1)
  return result


def _check_face_areas(areas: np.ndarray, source_id: str) -> None:
  threshold = _ZERO_AREA_FRACTION * areas.mean()
  degenerate = np.flatnonzero(areas <= threshold)
  if degenerate.size:
    raise DegenerateFaceError(
        f'Surface {source_id!r} has {degenerate.size} zero-area faces, '
        f'first is face {int(degenerate[0])}')


def cotangent_operator(vertices: np.ndarray, faces: np.ndarray,
                       source_id: str = '') -> LaplacianPair:
  """Cotangent Laplacian of the mesh (vertices, faces)."""
  areas = surfaces.face_areas(vertices, faces)
  _check_face_areas(areas, source_id)
  cot = cotangents(vertices, faces)
  rows = np.concatenate([faces[:, 1], faces[:, 2], faces[:, 0]])
  cols = np.concatenate([faces[:, 2], faces[:, 0], faces[:, 1]])
  # The weight of edge (b, c) gets half the cotangent of the opposite corner a.
  weights = 0.5 * np.concatenate([cot[:, 0], cot[:, 1], cot[:, 2]])
  mass = np.bincount(
      faces.ravel(), weights=np.repeat(areas / 3.0, 3),
      minlength=len(vertices))
  return _assemble(rows, cols, weights, mass, source_id)


def cotangent_laplacian(mesh: surfaces.Surface) -> LaplacianPair:
  """Cotangent-scheme Laplace-Beltrami operator of a triangle mesh.

  Off-diagonal entries are -(cot alpha_ij + cot beta_ij) / 2, the diagonal is
  the negated row sum, and the mass is lumped (one third of the area of every
  incident triangle).

  Args:
    mesh: A surface of kind MESH.

  Returns:
    The operator pair.

  Raises:
    SurfaceError: If the surface is a point cloud.
    DegenerateFaceError: If a face has (numerically) zero area.
  """
  if not mesh.is_mesh:
    raise surfaces.SurfaceError(
        f'Surface {mesh.id!r} is a point cloud; use pointcloud_laplacian')
  return cotangent_operator(mesh.vertices, mesh.faces, mesh.id)


def knn_graph(vertices: np.ndarray, neighbors: int, source_id: str = ''):
  """Symmetrized k-nearest-neighbour graph.

  Args:
    vertices: n x 3 points.
    neighbors: Number of neighbours per point (self excluded).
    source_id: Used in error messages.

  Returns:
    (edges, mean_distance): e x 2 array of undirected edges with i < j, and
    the mean distance from a point to its `neighbors` nearest neighbours.

  Raises:
    DuplicatePointError: If two distinct points coincide.
  """
  tree = spatial.cKDTree(vertices)
  distances, indices = tree.query(vertices, k=neighbors + 1)
  # Column 0 is the point itself unless it has an exact duplicate.
  if np.any(distances[:, 1] <= 0.0):
    bad = int(np.argmax(distances[:, 1] <= 0.0))
    raise DuplicatePointError(
        f'Point {bad} of {source_id!r} coincides with another point')
  rows = np.repeat(np.arange(len(vertices)), neighbors)
  cols = indices[:, 1:].ravel()
  pairs = np.sort(np.stack([rows, cols], axis=1), axis=1)
  return np.unique(pairs, axis=0), float(np.mean(distances[:, 1:]))


def auto_bandwidth(mean_distance: float) -> float:
  """Heat-kernel bandwidth t = (mean kNN distance)^2 / 4."""
  return mean_distance**2 / 4.0


def graph_edge_weights(vertices: np.ndarray, edges: np.ndarray,
                       bandwidth: float):
  """Returns (gaussian weights, squared lengths) of every edge."""
  delta = vertices[edges[:, 0]] - vertices[edges[:, 1]]
  squared = np.einsum('ij,ij->i', delta, delta)
  return np.exp(-squared / (4.0 * bandwidth)), squared


def pointcloud_laplacian_on_graph(vertices: np.ndarray,
                                  edges: np.ndarray,
                                  bandwidth: float,
                                  source_id: str = '') -> LaplacianPair:
  """Point-cloud operator on a fixed neighbour graph and bandwidth."""
  weights, squared = graph_edge_weights(vertices, edges, bandwidth)
  moment = 0.25 * weights * squared
  mass = (np.bincount(edges[:, 0], weights=moment, minlength=len(vertices)) +
          np.bincount(edges[:, 1], weights=moment, minlength=len(vertices)))
  if np.any(mass <= 0.0):
    raise DuplicatePointError(
        f'Point {int(np.argmin(mass))} of {source_id!r} has an empty '
        'neighbourhood')
  return _assemble(edges[:, 0], edges[:, 1], weights, mass, source_id)


def pointcloud_laplacian(cloud: surfaces.Surface,
                         neighbors: int = DEFAULT_NEIGHBORS,
                         bandwidth: Union[str, float] = 'auto') -> LaplacianPair:
  """Graph Laplacian approximation of the Laplace-Beltrami operator.

  Connectivity, if any, is ignored: the operator only uses the points.

  Args:
    cloud: Any surface.
    neighbors: k of the k-nearest-neighbour graph, 3 <= k < n.
    bandwidth: Heat kernel time t, or 'auto' for (mean kNN distance)^2 / 4.

  Returns:
    The operator pair.
  """
  return GraphDiscretization.build(cloud.vertices, neighbors, bandwidth,
                                   cloud.id).operator(cloud.vertices, cloud.id)


class Discretization(abc.ABC):
  """Everything about an operator except the coordinates it is built on."""

  @abc.abstractmethod
  def operator(self, vertices: np.ndarray, source_id: str = '') -> LaplacianPair:
    """Builds the operator pair for the given coordinates."""
    raise NotImplementedError


@attr.s(auto_attribs=True, frozen=True, eq=False)
class CotangentDiscretization(Discretization):
  """Cotangent scheme on a fixed triangulation."""

  faces: np.ndarray

  def operator(self, vertices: np.ndarray, source_id: str = '') -> LaplacianPair:
    return cotangent_operator(vertices, self.faces, source_id)


@attr.s(auto_attribs=True, frozen=True, eq=False)
class GraphDiscretization(Discretization):
  """Gaussian-weighted neighbour graph with frozen edges and bandwidth."""

  edges: np.ndarray
  bandwidth: float

  @classmethod
  def build(cls,
            vertices: np.ndarray,
            neighbors: int = DEFAULT_NEIGHBORS,
            bandwidth: Union[str, float] = 'auto',
            source_id: str = '') -> 'GraphDiscretization':
    n = len(vertices)
    if not 3 <= neighbors < n:
      raise ValueError(
          f'Need 3 <= neighbors < n, got neighbors={neighbors} and n={n}')
    edges, mean_distance = knn_graph(vertices, neighbors, source_id)
    if bandwidth == 'auto':
      bandwidth = auto_bandwidth(mean_distance)
    elif not float(bandwidth) > 0:
      raise ValueError(f'Bandwidth must be positive, got {bandwidth!r}')
    logging.debug('Graph of %r: %d edges, bandwidth %.4g', source_id,
                  len(edges), float(bandwidth))
    return cls(edges=edges, bandwidth=float(bandwidth))

  def operator(self, vertices: np.ndarray, source_id: str = '') -> LaplacianPair:
    return pointcloud_laplacian_on_graph(vertices, self.edges, self.bandwidth,
                                         source_id)


def discretization_for(surface: surfaces.Surface,
                       neighbors: int = DEFAULT_NEIGHBORS,
                       bandwidth: Union[str, float] = 'auto') -> Discretization:
  """Cotangent scheme for meshes, neighbour graph for point clouds."""
  if surface.is_mesh:
    return CotangentDiscretization(faces=surface.faces)
  return GraphDiscretization.build(surface.vertices, neighbors, bandwidth,
                                   surface.id)


def laplacian(surface: surfaces.Surface,
              neighbors: int = DEFAULT_NEIGHBORS,
              bandwidth: Union[str, float] = 'auto') -> LaplacianPair:
  """The operator of a surface, whatever its kind."""
  if surface.is_mesh:
    return cotangent_laplacian(surface)
  return pointcloud_laplacian(surface, neighbors, bandwidth)
