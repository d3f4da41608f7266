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
"""Eigenpairs of Laplace-Beltrami operators and their derivatives."""

from univspec.spectral.cache import DecompositionCache

from univspec.spectral.eigen_gradients import eigenvalue_gradient
from univspec.spectral.eigen_gradients import weighted_eigenvalue_gradient

from univspec.spectral.eigensolver import DEFAULT_DEGENERACY_TOLERANCE
from univspec.spectral.eigensolver import degeneracy_flags
from univspec.spectral.eigensolver import DegenerateEigenvalueError
from univspec.spectral.eigensolver import eigendecompose
from univspec.spectral.eigensolver import EigensolverError
from univspec.spectral.eigensolver import SpectralDecomposition
from univspec.spectral.eigensolver import spectrum
from univspec.spectral.eigensolver import SpectrumSlice
