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
"""Elementary meshes with known geometry: spheres and flat grids."""

from typing import Dict, Optional, Tuple

import numpy as np
from scipy import spatial

from univspec.geometry import surfaces

_GOLDEN = (1.0 + np.sqrt(5.0)) / 2.0

_ICOSAHEDRON_VERTICES = np.array([
    [-1, _GOLDEN, 0], [1, _GOLDEN, 0], [-1, -_GOLDEN, 0], [1, -_GOLDEN, 0],
    [0, -1, _GOLDEN], [0, 1, _GOLDEN], [0, -1, -_GOLDEN], [0, 1, -_GOLDEN],
    [_GOLDEN, 0, -1], [_GOLDEN, 0, 1], [-_GOLDEN, 0, -1], [-_GOLDEN, 0, 1],
])

_ICOSAHEDRON_FACES = np.array([
    [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
    [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
    [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
    [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
])


def orient_outward(vertices: np.ndarray, faces: np.ndarray) -> np.ndarray:
  """Flips faces of a star-shaped mesh so normals point away from the centroid."""
  centroid = vertices.mean(axis=0)
  a, b, c = (vertices[faces[:, i]] for i in range(3))
  normals = np.cross(b - a, c - a)
  outward = np.einsum('ij,ij->i', normals, (a + b + c) / 3 - centroid) > 0
  return np.where(outward[:, None], faces, faces[:, [0, 2, 1]])


def icosphere(subdivisions: int = 3,
              radius: float = 1.0,
              surface_id: str = 'icosphere') -> surfaces.Surface:
  """Loop-style subdivided icosahedron projected onto a sphere.

  Subdivision s has 10 * 4^s + 2 vertices.
  """
  if subdivisions < 0:
    raise ValueError(f'Subdivisions must be nonnegative, got {subdivisions}')
  vertices = list(_ICOSAHEDRON_VERTICES / np.linalg.norm(
      _ICOSAHEDRON_VERTICES, axis=1, keepdims=True))
  faces = _ICOSAHEDRON_FACES
  for _ in range(subdivisions):
    midpoints: Dict[Tuple[int, int], int] = {}

    def midpoint(i: int, j: int) -> int:
      key = (min(i, j), max(i, j))
      if key not in midpoints:
        point = vertices[i] + vertices[j]
        vertices.append(point / np.linalg.norm(point))
        midpoints[key] = len(vertices) - 1
      return midpoints[key]

    refined = []
    for a, b, c in faces:
      ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
      refined.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]])
    faces = np.array(refined)
  return surfaces.Surface(
      vertices=radius * np.array(vertices), faces=faces, id=surface_id)


def fibonacci_sphere(count: int,
                     rng: Optional[np.random.Generator] = None,
                     jitter: float = 0.0) -> np.ndarray:
  """`count` near-uniform points on the unit sphere.

  With `jitter` > 0 every point is moved tangentially by up to that fraction
  of the mean spacing, then projected back onto the sphere.
  """
  index = np.arange(count) + 0.5
  z = 1.0 - 2.0 * index / count
  azimuth = 2.0 * np.pi * index / _GOLDEN
  radial = np.sqrt(1.0 - z**2)
  points = np.stack([radial * np.cos(azimuth), radial * np.sin(azimuth), z],
                    axis=1)
  if jitter > 0:
    spacing = np.sqrt(4.0 * np.pi / count)
    points = points + jitter * spacing * rng.uniform(-1, 1, points.shape)
    points /= np.linalg.norm(points, axis=1, keepdims=True)
  return points


def sphere_mesh(vertex_count: int,
                seed: int = 0,
                surface_id: str = 'sphere') -> surfaces.Surface:
  """Irregular unit-sphere mesh: convex hull of jittered Fibonacci points."""
  if vertex_count < 12:
    raise ValueError(f'Need at least 12 vertices, got {vertex_count}')
  points = fibonacci_sphere(vertex_count, np.random.default_rng(seed),
                            jitter=0.25)
  hull = spatial.ConvexHull(points)
  return surfaces.Surface(
      vertices=points,
      faces=orient_outward(points, hull.simplices),
      id=surface_id)


def flat_grid(size: int = 10,
              spacing: float = 1.0,
              surface_id: str = 'grid') -> surfaces.Surface:
  """A (size + 1)^2 vertex triangulated square in the z = 0 plane."""
  if size < 1:
    raise ValueError(f'Grid size must be positive, got {size}')
  xs, ys = np.meshgrid(np.arange(size + 1), np.arange(size + 1), indexing='ij')
  vertices = spacing * np.stack(
      [xs.ravel(), ys.ravel(), np.zeros(xs.size)], axis=1).astype(np.float64)
  index = np.arange((size + 1)**2).reshape(size + 1, size + 1)
  corner = index[:-1, :-1].ravel()
  right = index[1:, :-1].ravel()
  up = index[:-1, 1:].ravel()
  diagonal = index[1:, 1:].ravel()
  faces = np.concatenate([
      np.stack([corner, right, diagonal], axis=1),
      np.stack([corner, diagonal, up], axis=1)
  ])
  return surfaces.Surface(vertices=vertices, faces=faces, id=surface_id)
