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
"""Tests for univspec.cli.cli."""

import os

from absl import app
from absl.testing import absltest
from absl.testing import flagsaver

from univspec.cli import cli
from univspec.common import errors
from univspec.common import testing
from univspec.geometry import mesh_io


class OverridesTest(absltest.TestCase):

  def test_set_assignments(self):
    overrides = cli.overrides_from_flags(['attack.c = 0.5', 'run.ids=a,b'])
    self.assertEqual(overrides['attack.c'], '0.5')
    self.assertEqual(overrides['run.ids'], 'a,b')
    self.assertIn('run.verbosity', overrides)

  @flagsaver.flagsaver(k=12, seed=3)
  def test_dedicated_flags_win(self):
    overrides = cli.overrides_from_flags(['attack.k=30', 'attack.b=7'])
    self.assertEqual(overrides['attack.k'], '12')
    self.assertEqual(overrides['attack.b'], '7')
    self.assertEqual(overrides['run.seed'], '3')

  def test_malformed_assignment(self):
    with self.assertRaisesRegex(errors.ConfigError, 'section.key=value'):
      cli.overrides_from_flags(['attack.k'])


class MainTest(absltest.TestCase):

  def test_requires_one_command(self):
    with self.assertRaises(app.UsageError):
      cli.main(['univspec'])
    with self.assertRaises(app.UsageError):
      cli.main(['univspec', 'attack', 'sweep'])

  def test_invalid_configuration_exit_code(self):
    with self.assertRaises(SystemExit) as raised:
      cli.main(['univspec', 'attack'])
    self.assertEqual(raised.exception.code, 2)

  def test_describe(self):
    root = self.create_tempdir().full_path
    path = os.path.join(root, 'sphere.off')
    mesh_io.save_surface(testing.irregular_sphere(80), path)
    output = os.path.join(root, 'out')
    with flagsaver.flagsaver(k=5, shape=path, output_dir=output):
      with self.assertRaises(SystemExit) as raised:
        cli.main(['univspec', 'describe'])
    self.assertEqual(raised.exception.code, 0)
    self.assertTrue(os.path.exists(os.path.join(output, 'spectrum.csv')))
    self.assertTrue(os.path.exists(os.path.join(output, 'config.ini')))


if __name__ == '__main__':
  absltest.main()
