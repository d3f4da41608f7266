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
"""Exception hierarchy shared by all univspec modules.

Every failure the batch driver can surface belongs to exactly one of the four
branches below. Modules define their specific errors next to the code raising
them and derive from one of these branches, so that the driver maps any error
to an exit code without knowing the module it came from.
"""


class Error(Exception):
  """Base class for all univspec errors."""


class ConfigError(Error, ValueError):
  """A configuration value is unknown, malformed or violates a constraint."""


class InputError(Error, ValueError):
  """An input file or object is missing, unparseable or invalid."""


class NumericalError(Error, ArithmeticError):
  """A numerical routine failed: non-convergence, NaN, degenerate geometry."""


class PreconditionError(Error):
  """The inputs are valid but the requested operation can not start."""
