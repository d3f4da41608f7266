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
"""How visible a perturbation is, and how often it works."""

from typing import Sequence

import numpy as np

from univspec.common import errors
from univspec.geometry import curvature
from univspec.geometry import surfaces


class PairingError(errors.InputError):
  """Two shapes compared vertex by vertex do not correspond."""


def _check_counts(original: surfaces.Surface,
                  perturbed: surfaces.Surface) -> None:
  if original.vertex_count != perturbed.vertex_count:
    raise PairingError(
        f'{original.id!r} has {original.vertex_count} vertices but '
        f'{perturbed.id!r} has {perturbed.vertex_count}')


def curvature_distortion(original: surfaces.Surface,
                         perturbed: surfaces.Surface) -> float:
  """Mean |H_original - H_perturbed| over the non-boundary vertices.

  Both curvatures are unsigned magnitudes.

  Raises:
    PairingError: If the meshes differ in vertex count or connectivity.
    SurfaceError: If either shape is a point cloud.
  """
  _check_counts(original, perturbed)
  if not np.array_equal(original.faces, perturbed.faces):
    raise PairingError(
        f'{original.id!r} and {perturbed.id!r} have different connectivity')
  difference = np.abs(
      curvature.mean_curvature(original) - curvature.mean_curvature(perturbed))
  interior = ~surfaces.boundary_vertices(original)
  if not np.any(interior):
    raise PairingError(f'{original.id!r} has no interior vertices')
  return float(difference[interior].mean())


def l2_displacement(original: surfaces.Surface,
                    perturbed: surfaces.Surface) -> float:
  """Mean Euclidean distance between corresponding vertices."""
  _check_counts(original, perturbed)
  return float(
      np.linalg.norm(original.vertices - perturbed.vertices, axis=1).mean())


def success_rate(fooled: Sequence[bool]) -> float:
  """Percentage of attacks that changed the prediction."""
  if len(fooled) == 0:
    raise ValueError('Success rate of an empty set of attacks')
  return 100.0 * sum(bool(f) for f in fooled) / len(fooled)
