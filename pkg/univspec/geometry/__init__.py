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
"""Shapes, shape files and discrete Laplace-Beltrami operators."""

from univspec.geometry.curvature import mean_curvature

from univspec.geometry.laplacians import CotangentDiscretization
from univspec.geometry.laplacians import cotangent_laplacian
from univspec.geometry.laplacians import DegenerateFaceError
from univspec.geometry.laplacians import Discretization
from univspec.geometry.laplacians import discretization_for
from univspec.geometry.laplacians import DuplicatePointError
from univspec.geometry.laplacians import GraphDiscretization
from univspec.geometry.laplacians import laplacian
from univspec.geometry.laplacians import LaplacianPair
from univspec.geometry.laplacians import pointcloud_laplacian
from univspec.geometry.laplacians import pointcloud_laplacian_on_graph

from univspec.geometry.mesh_io import load_surface
from univspec.geometry.mesh_io import MeshFormat
from univspec.geometry.mesh_io import MeshFormatError
from univspec.geometry.mesh_io import save_surface

from univspec.geometry.surfaces import apply_displacement
from univspec.geometry.surfaces import boundary_vertices
from univspec.geometry.surfaces import bounding_box_diagonal
from univspec.geometry.surfaces import edges
from univspec.geometry.surfaces import euler_characteristic
from univspec.geometry.surfaces import normalize_area
from univspec.geometry.surfaces import Surface
from univspec.geometry.surfaces import surface_area
from univspec.geometry.surfaces import SurfaceError
from univspec.geometry.surfaces import SurfaceKind
from univspec.geometry.surfaces import transform
