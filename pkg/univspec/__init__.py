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
"""Universal spectral adversarial perturbations of deformable 3D shapes."""

from univspec.common.errors import ConfigError
from univspec.common.errors import Error
from univspec.common.errors import InputError
from univspec.common.errors import NumericalError
from univspec.common.errors import PreconditionError
