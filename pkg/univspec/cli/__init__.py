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
"""Batch driver: corpus generation, training, attacks, transfer and export."""

from univspec.cli.bundles import Bundle
from univspec.cli.bundles import BundleError
from univspec.cli.bundles import read_bundle
from univspec.cli.commands import EXIT_CODES
from univspec.cli.commands import run_command
from univspec.cli.config import parse_config
from univspec.cli.config import RunConfig
from univspec.cli.config import SweepConfig
from univspec.cli.config import write_config
from univspec.cli.export import export_report
from univspec.cli.export import read_report
