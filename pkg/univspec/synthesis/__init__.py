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
"""Generalization of spectral perturbations by shape-from-spectrum synthesis."""

from univspec.synthesis.generalization import generalize
from univspec.synthesis.generalization import GeneralizationResult

from univspec.synthesis.synthesizer import alignment_error
from univspec.synthesis.synthesizer import invert_perturbation
from univspec.synthesis.synthesizer import perturb_spectrum
from univspec.synthesis.synthesizer import synthesize_from_spectrum
from univspec.synthesis.synthesizer import SynthesisConfig
from univspec.synthesis.synthesizer import SynthesisResult
