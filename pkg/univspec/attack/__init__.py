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
"""Universal spectral adversarial attacks."""

from univspec.attack.config import AttackConfig

from univspec.attack.engine import AttackDivergedError
from univspec.attack.engine import check_correctly_classified
from univspec.attack.engine import MisclassifiedInputError
from univspec.attack.engine import run_pershape_attack
from univspec.attack.engine import run_universal_attack

from univspec.attack.objectives import adversarial_penalty
from univspec.attack.objectives import attack_gradients
from univspec.attack.objectives import AttackTarget
from univspec.attack.objectives import prepare_target
from univspec.attack.objectives import spectral_alignment_loss

from univspec.attack.results import AttackResult
from univspec.attack.results import ShapeCoefficients
from univspec.attack.results import ShapeOutcome
from univspec.attack.results import TraceRecord
from univspec.attack.results import UniversalPerturbation
