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
"""Tests for univspec.cli.config."""

import os

from absl.testing import absltest
from absl.testing import parameterized

from univspec.cli import config as config_lib
from univspec.common import errors
from univspec.common import seeds

_ATTACK = {
    'run.manifest': 'corpus/manifest.json',
    'run.model': 'model.bin',
    'run.output_dir': 'out',
}


class ParseConfigTest(parameterized.TestCase):

  def _write(self, text):
    path = os.path.join(self.create_tempdir().full_path, 'run.ini')
    with open(path, 'w') as f:
      f.write(text)
    return path

  def test_defaults(self):
    config = config_lib.parse_config(None, _ATTACK, 'attack')
    attack = config.attack
    self.assertEqual(attack.k, 60)
    self.assertEqual(attack.b, 20)
    self.assertEqual(attack.c, 5e-2)
    self.assertEqual(attack.iterations, 500)
    self.assertIsNone(attack.eigen_count)
    self.assertEqual(config.seed, 0)
    self.assertEqual(config.workers, 1)

  def test_file_beats_default_and_override_beats_file(self):
    path = self._write('[attack]\nk = 30\nb = 10\n[run]\nseed = 4\n')
    config = config_lib.parse_config(path, {**_ATTACK, 'attack.k': '12'},
                                     'attack')
    self.assertEqual(config.attack.k, 12)
    self.assertEqual(config.attack.b, 10)
    self.assertEqual(config.seed, 4)

  def test_stage_seeds_derive_from_run_seed(self):
    config = config_lib.parse_config(None, {**_ATTACK, 'run.seed': '9'},
                                     'attack')
    self.assertEqual(config.attack.seed, seeds.derive(9, 'attack'))
    self.assertEqual(config.train.seed, seeds.derive(9, 'train'))
    self.assertEqual(config.corpus.seed, seeds.derive(9, 'corpus'))
    self.assertEqual(config.synthesis().seed, seeds.derive(9, 'synthesis'))
    self.assertNotEqual(config.attack.seed, config.train.seed)

  def test_workers_reach_every_stage(self):
    config = config_lib.parse_config(None, {**_ATTACK, 'run.workers': '3'},
                                     'attack')
    self.assertEqual(config.attack.workers, 3)
    self.assertEqual(config.corpus.workers, 3)
    self.assertEqual(config.synthesis().workers, 3)

  def test_zero_k_names_the_field(self):
    with self.assertRaisesRegex(errors.ConfigError, r'\[attack\].*k'):
      config_lib.parse_config(None, {**_ATTACK, 'attack.k': '0'}, 'attack')

  def test_eigen_count_below_k(self):
    with self.assertRaisesRegex(errors.ConfigError, 'eigen_count'):
      config_lib.parse_config(None, {
          **_ATTACK, 'attack.k': '10',
          'attack.eigen_count': '5'
      }, 'attack')

  @parameterized.named_parameters(
      ('unknown_key', {'attack.kk': '3'}, 'attack.kk'),
      ('unknown_section', {'plot.k': '3'}, 'plot'),
      ('no_section', {'k': '3'}, 'section.key'),
      ('bad_int', {'attack.k': 'many'}, 'attack.k'),
      ('bad_bool', {'attack.spectral_term': 'maybe'}, 'spectral_term'),
      ('split', {'run.split': 'validation'}, 'run.split'),
      ('format', {'run.format': 'xml'}, 'run.format'),
      ('workers', {'run.workers': '0'}, 'workers'),
      ('sweep', {'sweep.b_values': '0,5'}, 'b_values'),
      ('corpus', {'corpus.vertex_min': '900', 'corpus.vertex_max': '800'},
       'vertex_range'),
  )
  def test_invalid(self, overrides, message):
    with self.assertRaisesRegex(errors.ConfigError, message):
      config_lib.parse_config(None, {**_ATTACK, **overrides}, 'attack')

  def test_unknown_key_in_file(self):
    path = self._write('[attack]\nlearning_rate = 0.1\n')
    with self.assertRaisesRegex(errors.ConfigError, 'attack.learning_rate'):
      config_lib.parse_config(path, _ATTACK, 'attack')

  def test_malformed_file(self):
    path = self._write('k = 3\n')
    with self.assertRaisesRegex(errors.ConfigError, 'Malformed'):
      config_lib.parse_config(path, _ATTACK, 'attack')

  def test_missing_file(self):
    with self.assertRaises(errors.InputError):
      config_lib.parse_config('/nonexistent/run.ini', _ATTACK, 'attack')

  def test_required_settings(self):
    with self.assertRaisesRegex(errors.ConfigError, 'run.model'):
      config_lib.parse_config(None, {'run.manifest': 'm'}, 'train')

  def test_unknown_command(self):
    with self.assertRaisesRegex(errors.ConfigError, 'plot'):
      config_lib.parse_config(None, {}, 'plot')

  def test_lists_and_bandwidth(self):
    config = config_lib.parse_config(
        None, {
            **_ATTACK, 'run.ids': 'a, b,c',
            'attack.bandwidth': '0.5',
            'sweep.k_values': '5,10'
        }, 'attack')
    self.assertEqual(config.get('run.ids'), ('a', 'b', 'c'))
    self.assertEqual(config.attack.bandwidth, 0.5)
    self.assertEqual(config.sweep.settings, [(10, 5), (10, 10), (20, 5),
                                             (20, 10), (40, 5), (40, 10)])

  def test_synthesis_takes_bundle_sizes(self):
    config = config_lib.parse_config(None, {
        **_ATTACK, 'attack.eigen_count': '70'
    }, 'attack')
    self.assertEqual(config.synthesis().eigen_count, 70)
    synthesis = config.synthesis(k=8, b=4)
    self.assertEqual((synthesis.k, synthesis.b), (8, 4))
    self.assertIsNone(synthesis.eigen_count)
    self.assertEqual(synthesis.iterations, 300)


class WriteConfigTest(absltest.TestCase):

  def test_written_config_reads_back(self):
    config = config_lib.parse_config(
        None, {
            **_ATTACK, 'attack.k': '7',
            'attack.c': '0.25',
            'run.ids': 'x,y',
            'corpus.rotate': 'false',
            'attack.bandwidth': '0.125'
        }, 'attack')
    path = os.path.join(self.create_tempdir().full_path, 'config.ini')
    config_lib.write_config(config, path)
    again = config_lib.parse_config(path, {}, 'attack')
    self.assertEqual(again.values, config.values)


if __name__ == '__main__':
  absltest.main()
