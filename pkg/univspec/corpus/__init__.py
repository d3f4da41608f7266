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
"""Synthetic deformable shape families with known class structure."""

from univspec.corpus.dataset import CorpusSpec
from univspec.corpus.dataset import generate_dataset
from univspec.corpus.dataset import normalized_spectrum

from univspec.corpus.manifest import Manifest
from univspec.corpus.manifest import ManifestEntry
from univspec.corpus.manifest import read_manifest
from univspec.corpus.manifest import Split

from univspec.corpus.poses import apply_pose_deformation
from univspec.corpus.poses import PoseParams

from univspec.corpus.primitives import flat_grid
from univspec.corpus.primitives import icosphere
from univspec.corpus.primitives import sphere_mesh

from univspec.corpus.templates import ClassTemplate
from univspec.corpus.templates import CorpusError
from univspec.corpus.templates import default_templates
from univspec.corpus.templates import make_base_shape
from univspec.corpus.templates import Protrusion
