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
"""univspec command-line interface.

Usage:
  univspec <command> [--config run.ini] [--set section.key=value ...] [flags]

Commands: gen-corpus, train, attack, attack-pershape, generalize, evaluate,
export, sweep, describe.
"""

import sys
from typing import Dict, List

from absl import app
from absl import flags
from absl import logging

from univspec.cli import commands
from univspec.cli import config as config_lib
from univspec.common import errors

_CONFIG = flags.DEFINE_string('config', None, 'INI file with run settings.')
_SET = flags.DEFINE_multi_string(
    'set', [], 'Override of the form section.key=value; may be repeated.')

_K = flags.DEFINE_integer('k', None, 'Number of eigenvalues perturbed.')
_B = flags.DEFINE_integer('b', None, 'Number of eigenfunctions spanning the '
                          'displacement.')
_C = flags.DEFINE_float('c', None, 'Weight of the adversarial penalty.')
_MARGIN = flags.DEFINE_float('margin', None, 'Logit-gap margin.')
_ITERATIONS = flags.DEFINE_integer('iterations', None,
                                   'Attack optimizer iterations.')
_SEED = flags.DEFINE_integer('seed', None, 'Seed every stage derives from.')
_MANIFEST = flags.DEFINE_string('manifest', None, 'Corpus manifest.')
_MODEL = flags.DEFINE_string('model', None, 'Classifier weights file.')
_OUTPUT_DIR = flags.DEFINE_string('output_dir', None, 'Run directory.')
_BUNDLE = flags.DEFINE_string('bundle', None, 'Result bundle directory.')
_SHAPE = flags.DEFINE_string('shape', None, 'Shape file for describe.')
_WORKERS = flags.DEFINE_integer('workers', None, 'Per-shape worker threads.')
_FORMAT = flags.DEFINE_enum('format', None, ['csv', 'json'], 'Export format.')

# Dedicated flag -> config key.
_FLAG_KEYS = (
    (_K, 'attack.k'),
    (_B, 'attack.b'),
    (_C, 'attack.c'),
    (_MARGIN, 'attack.margin'),
    (_ITERATIONS, 'attack.iterations'),
    (_SEED, 'run.seed'),
    (_MANIFEST, 'run.manifest'),
    (_MODEL, 'run.model'),
    (_OUTPUT_DIR, 'run.output_dir'),
    (_BUNDLE, 'run.bundle'),
    (_SHAPE, 'run.shape'),
    (_WORKERS, 'run.workers'),
    (_FORMAT, 'run.format'),
)


def overrides_from_flags(assignments: List[str]) -> Dict[str, str]:
  """Collects 'section.key' -> value text; dedicated flags win over --set."""
  overrides = {}
  for assignment in assignments:
    name, separator, value = assignment.partition('=')
    if not separator:
      raise errors.ConfigError(
          f'--set expects section.key=value, got {assignment!r}')
    overrides[name.strip()] = value.strip()
  for flag, key in _FLAG_KEYS:
    if flag.value is not None:
      overrides[key] = str(flag.value)
  overrides['run.verbosity'] = str(logging.get_verbosity())
  return overrides


def main(argv):
  if len(argv) != 2:
    raise app.UsageError(
        f'Expected exactly one command, one of {list(config_lib.COMMANDS)}')
  command = argv[1]
  try:
    config = config_lib.parse_config(_CONFIG.value,
                                     overrides_from_flags(_SET.value), command)
  except errors.Error as e:
    logging.error('Invalid configuration: %s', e)
    print(f'Invalid configuration: {e}', file=sys.stderr)
    sys.exit(commands.exit_code(e))
  sys.exit(commands.run_command(config))


def entrypoint():
  app.run(main)


if __name__ == '__main__':
  app.run(main)
