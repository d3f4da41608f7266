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
"""Per-vertex mean curvature from the cotangent Laplacian."""

import numpy as np

from univspec.geometry import laplacians
from univspec.geometry import surfaces


def mean_curvature(mesh: surfaces.Surface) -> np.ndarray:
  """Unsigned mean curvature H_i = |(M^-1 W x)_i| / 2 at every vertex.

  W x is the integrated mean-curvature normal, so dividing by the lumped
  vertex area and halving the norm gives H in units of 1/length. Values at
  boundary vertices of open meshes are returned but are not meaningful.

  Args:
    mesh: A surface of kind MESH.

  Returns:
    Array of n nonnegative values.

  Raises:
    SurfaceError, DegenerateFaceError: As `cotangent_laplacian`.
  """
  pair = laplacians.cotangent_laplacian(mesh)
  normal = (pair.stiffness @ mesh.vertices) / pair.mass_diagonal[:, None]
  return 0.5 * np.linalg.norm(normal, axis=1)
