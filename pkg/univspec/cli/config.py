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
"""Run configuration: INI file, flag overrides and defaults.

A config file has the sections [run], [corpus], [train], [attack],
[synthesis] and [sweep] with `key = value` lines. Values are resolved with the
precedence command-line flag > file > default, validated, and turned into the
configuration objects of the library modules. Stage seeds are never set
directly: they are derived from `run.seed` and the stage name.
"""

import configparser
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

from absl import logging
import attr
import immutabledict

from univspec.attack import config as attack_config
from univspec.classifier import training
from univspec.common import errors
from univspec.common import seeds
from univspec.corpus import dataset
from univspec.synthesis import synthesizer

COMMANDS = ('gen-corpus', 'train', 'attack', 'attack-pershape', 'generalize',
            'evaluate', 'export', 'sweep', 'describe')


def _to_bool(text: str) -> bool:
  lowered = text.strip().lower()
  if lowered in ('1', 'true', 'yes', 'on'):
    return True
  if lowered in ('0', 'false', 'no', 'off'):
    return False
  raise ValueError(f'not a boolean: {text!r}')


def _to_ints(text: str) -> Tuple[int, ...]:
  return tuple(int(part) for part in text.split(',') if part.strip())


def _to_strings(text: str) -> Tuple[str, ...]:
  return tuple(part.strip() for part in text.split(',') if part.strip())


def _to_bandwidth(text: str):
  return 'auto' if text.strip() == 'auto' else float(text)


def _format(value: Any) -> str:
  if isinstance(value, bool):
    return 'true' if value else 'false'
  if isinstance(value, tuple):
    return ','.join(str(v) for v in value)
  if isinstance(value, float):
    return repr(value)
  return str(value)


def _positive_ints(instance, attribute, value):
  del instance
  if not value or any(v < 1 for v in value):
    raise ValueError(
        f'{attribute.name} must list positive integers, got {value!r}')


# section -> key -> (parser, default)
SCHEMA: Mapping[str, Mapping[str, Tuple[Callable[[str], Any], Any]]] = (
    immutabledict.immutabledict({
        'run':
            immutabledict.immutabledict({
                'seed': (int, 0),
                'manifest': (str, ''),
                'model': (str, ''),
                'output_dir': (str, ''),
                'bundle': (str, ''),
                'cache_dir': (str, ''),
                'shape': (str, ''),
                'split': (str, 'train'),
                'ids': (_to_strings, ()),
                'count': (int, 10),
                'skip_misclassified': (_to_bool, False),
                'generalize_split': (str, 'test'),
                'generalize_count': (int, 5),
                'generalize_label': (int, -1),
                'normalize_area': (_to_bool, False),
                'format': (str, 'json'),
                'workers': (int, 1),
                'verbosity': (int, 0),
            }),
        'corpus':
            immutabledict.immutabledict({
                'class_count': (int, 3),
                'shapes_per_class': (int, 20),
                'test_fraction': (float, 0.3),
                'vertex_min': (int, 800),
                'vertex_max': (int, 1500),
                'max_bend': (float, 0.5235987755982988),
                'rotate': (_to_bool, True),
                'translation_range': (float, 1.0),
                'scale_min': (float, 0.8),
                'scale_max': (float, 1.25),
                'representation': (str, 'mesh'),
                'spectral_check_k': (int, 20),
                'min_class_separation': (float, 0.05),
            }),
        'train':
            immutabledict.immutabledict({
                'epochs': (int, 50),
                'learning_rate': (float, 1e-3),
                'batch_size': (int, 16),
                'sample_points': (int, 1024),
                'rotate': (_to_bool, True),
                'translation_range': (float, 0.1),
                'jitter_sigma': (float, 0.01),
                'jitter_clip': (float, 0.03),
                'log_every': (int, 10),
                'point_widths': (_to_ints, (3, 32, 64, 128)),
                'head_widths': (_to_ints, (128, 64)),
            }),
        'attack':
            immutabledict.immutabledict({
                'k': (int, 60),
                'b': (int, 20),
                'c': (float, 5e-2),
                'margin': (float, 1.0),
                'iterations': (int, 500),
                'learning_rate_rho': (float, 1e-3),
                'learning_rate_alpha': (float, 1e-3),
                'degeneracy_tolerance': (float, 1e-5),
                'spectral_term': (_to_bool, True),
                'eigen_count': (int, 0),
                'neighbors': (int, 10),
                'bandwidth': (_to_bandwidth, 'auto'),
                'rho_floor': (float, 1e-3),
                'log_every': (int, 25),
            }),
        'synthesis':
            immutabledict.immutabledict({
                'iterations': (int, 300),
                'learning_rate': (float, 1e-3),
                'tolerance': (float, 1e-6),
                'margin': (float, 1.0),
                'log_every': (int, 25),
            }),
        'sweep':
            immutabledict.immutabledict({
                'b_values': (_to_ints, (10, 20, 40)),
                'k_values': (_to_ints, (20, 40, 60)),
                'generalize': (_to_bool, True),
            }),
    }))

# Settings that must be non-empty for a command to start.
REQUIRED: Mapping[str, Tuple[str, ...]] = immutabledict.immutabledict({
    'gen-corpus': ('run.output_dir',),
    'train': ('run.manifest', 'run.model'),
    'attack': ('run.manifest', 'run.model', 'run.output_dir'),
    'attack-pershape': ('run.manifest', 'run.model', 'run.output_dir'),
    'generalize': ('run.manifest', 'run.model', 'run.bundle',
                   'run.output_dir'),
    'evaluate': ('run.manifest', 'run.model', 'run.bundle', 'run.output_dir'),
    'export': ('run.bundle', 'run.output_dir'),
    'sweep': ('run.manifest', 'run.model', 'run.output_dir'),
    'describe': ('run.shape',),
})


@attr.s(auto_attribs=True, frozen=True, kw_only=True)
class SweepConfig:
  """Grid of the parameter-sensitivity study.

  Attributes:
    b_values: Displacement bandwidths to try.
    k_values: Spectrum lengths to try.
    generalize: Also transfer every perturbation to held-out shapes.
  """

  b_values: Tuple[int, ...] = attr.ib(validator=_positive_ints)
  k_values: Tuple[int, ...] = attr.ib(validator=_positive_ints)
  generalize: bool = True

  @property
  def settings(self) -> List[Tuple[int, int]]:
    """(b, k) pairs in row-major order."""
    return [(b, k) for b in self.b_values for k in self.k_values]


@attr.s(auto_attribs=True, frozen=True)
class RunConfig:
  """A fully resolved run: raw settings and the derived module configs.

  Attributes:
    command: One of COMMANDS.
    values: section -> key -> typed value, every key of SCHEMA present.
  """

  command: str
  values: Mapping[str, Mapping[str, Any]]

  def get(self, name: str) -> Any:
    """Value of 'section.key'."""
    section, key = name.split('.', 1)
    return self.values[section][key]

  @property
  def seed(self) -> int:
    return self.get('run.seed')

  @property
  def workers(self) -> int:
    return self.get('run.workers')

  def stage_seed(self, stage: str) -> int:
    return seeds.derive(self.seed, stage)

  @property
  def corpus(self) -> dataset.CorpusSpec:
    v = self.values['corpus']
    return _build(
        'corpus', dataset.CorpusSpec,
        class_count=v['class_count'],
        shapes_per_class=v['shapes_per_class'],
        test_fraction=v['test_fraction'],
        vertex_range=(v['vertex_min'], v['vertex_max']),
        max_bend=v['max_bend'],
        rotate=v['rotate'],
        translation_range=v['translation_range'],
        scale_range=(v['scale_min'], v['scale_max']),
        representation=v['representation'],
        spectral_check_k=v['spectral_check_k'],
        min_class_separation=v['min_class_separation'],
        seed=self.stage_seed('corpus'),
        workers=self.workers)

  @property
  def train(self) -> training.TrainConfig:
    v = dict(self.values['train'])
    del v['point_widths'], v['head_widths']
    return _build('train', training.TrainConfig, seed=self.stage_seed('train'),
                  **v)

  @property
  def attack(self) -> attack_config.AttackConfig:
    v = dict(self.values['attack'])
    v['eigen_count'] = v['eigen_count'] or None
    return _build('attack', attack_config.AttackConfig,
                  seed=self.stage_seed('attack'), workers=self.workers, **v)

  @property
  def sweep(self) -> SweepConfig:
    return _build('sweep', SweepConfig, **self.values['sweep'])

  def synthesis(self,
                k: Optional[int] = None,
                b: Optional[int] = None) -> synthesizer.SynthesisConfig:
    """Synthesis parameters.

    k, b and the spectral settings come from the attack section unless k and b
    are given, e.g. by the bundle whose rho is being transferred.
    """
    attack = self.values['attack']
    eigen_count = attack['eigen_count'] or None
    if k is not None or b is not None:
      eigen_count = None
    return _build(
        'synthesis', synthesizer.SynthesisConfig,
        k=attack['k'] if k is None else k,
        b=attack['b'] if b is None else b,
        degeneracy_tolerance=attack['degeneracy_tolerance'],
        eigen_count=eigen_count,
        neighbors=attack['neighbors'],
        bandwidth=attack['bandwidth'],
        seed=self.stage_seed('synthesis'),
        workers=self.workers,
        **self.values['synthesis'])


def _build(section: str, cls, **kwargs):
  try:
    return cls(**kwargs)
  except (TypeError, ValueError) as e:
    raise errors.ConfigError(f'Invalid [{section}] settings: {e}') from e


def _parse_value(section: str, key: str, text: str) -> Any:
  if section not in SCHEMA:
    raise errors.ConfigError(
        f'Unknown section {section!r}; expected one of {sorted(SCHEMA)!r}')
  if key not in SCHEMA[section]:
    raise errors.ConfigError(
        f'Unknown setting {section}.{key}; [{section}] accepts '
        f'{sorted(SCHEMA[section])!r}')
  parser, _ = SCHEMA[section][key]
  try:
    return parser(text)
  except ValueError as e:
    raise errors.ConfigError(
        f'Invalid value {text!r} for {section}.{key}: {e}') from e


def read_config_file(path: str) -> Dict[str, Dict[str, str]]:
  """Raw `section -> key -> text` content of an INI file."""
  parser = configparser.ConfigParser(interpolation=None)
  try:
    with open(path, 'r', encoding='utf-8') as f:
      parser.read_file(f)
  except OSError as e:
    raise errors.InputError(f'Unable to read config {path!r}: {e}') from e
  except configparser.Error as e:
    raise errors.ConfigError(f'Malformed config {path!r}: {e}') from e
  return {
      section: dict(parser.items(section)) for section in parser.sections()
  }


def parse_config(path: Optional[str],
                 overrides: Mapping[str, str],
                 command: str) -> RunConfig:
  """Resolves a RunConfig from a file, 'section.key' overrides and defaults.

  Args:
    path: INI file, or None for defaults only.
    overrides: 'section.key' -> value text, e.g. from command-line flags.
    command: The command the config is for.

  Returns:
    The validated configuration.

  Raises:
    ConfigError: On unknown commands, sections or keys, unparseable values,
      constraint violations or missing required settings.
  """
  if command not in COMMANDS:
    raise errors.ConfigError(
        f'Unknown command {command!r}; expected one of {list(COMMANDS)!r}')
  values = {
      section: {key: default for key, (_, default) in keys.items()
               } for section, keys in SCHEMA.items()
  }
  layers = []
  if path:
    layers.append(read_config_file(path))
  layered = {}
  for name, text in overrides.items():
    if '.' not in name:
      raise errors.ConfigError(
          f'Override {name!r} is not of the form section.key')
    section, key = name.split('.', 1)
    layered.setdefault(section, {})[key] = text
  layers.append(layered)
  for layer in layers:
    for section, items in layer.items():
      for key, text in items.items():
        values[section][key] = _parse_value(section, key, text)

  config = RunConfig(
      command=command,
      values=immutabledict.immutabledict(
          {s: immutabledict.immutabledict(v) for s, v in values.items()}))
  for name in REQUIRED[command]:
    if not config.get(name):
      raise errors.ConfigError(f'{name} is required for {command!r}')
  if config.workers < 1:
    raise errors.ConfigError('run.workers must be at least 1')
  for name in ('run.split', 'run.generalize_split'):
    if config.get(name) not in ('train', 'test'):
      raise errors.ConfigError(
          f"{name} must be 'train' or 'test', got {config.get(name)!r}")
  if config.get('run.format') not in ('csv', 'json'):
    raise errors.ConfigError(
        f"run.format must be 'csv' or 'json', got {config.get('run.format')!r}")
  # Build every block once so that constraint violations surface up front.
  for block in ('corpus', 'train', 'attack', 'sweep'):
    getattr(config, block)
  config.synthesis()
  logging.debug('Resolved configuration for %s: %s', command, config.values)
  return config


def write_config(config: RunConfig, path: str) -> None:
  """Writes the resolved configuration; `parse_config` reads it back."""
  lines = [f'# univspec {config.command}']
  for section in sorted(config.values):
    lines.append(f'\n[{section}]')
    for key in sorted(config.values[section]):
      lines.append(f'{key} = {_format(config.values[section][key])}')
  try:
    with open(path, 'w', encoding='utf-8') as f:
      f.write('\n'.join(lines) + '\n')
  except OSError as e:
    raise errors.InputError(f'Unable to write config {path!r}: {e}') from e
