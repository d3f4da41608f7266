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
"""Noticeability and success measures of shape perturbations."""

from univspec.metrics.noticeability import curvature_distortion
from univspec.metrics.noticeability import l2_displacement
from univspec.metrics.noticeability import PairingError
from univspec.metrics.noticeability import success_rate

from univspec.metrics.report import evaluate_attack
from univspec.metrics.report import MetricReport
from univspec.metrics.report import shape_metrics
from univspec.metrics.report import ShapeMetrics
