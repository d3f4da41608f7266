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
"""Tests for univspec.common.seeds."""

from absl.testing import absltest

import numpy as np

from univspec.common import seeds


class SeedsTest(absltest.TestCase):

  def test_derive_is_stable(self):
    self.assertEqual(seeds.derive(7, 'attack'), seeds.derive(7, 'attack'))

  def test_stage_names_give_distinct_seeds(self):
    derived = {seeds.derive(7, name) for name in ('corpus', 'train', 'attack',
                                                   'synthesis', 'sweep')}
    self.assertLen(derived, 5)

  def test_path_of_names_differs_from_prefix(self):
    self.assertNotEqual(
        seeds.derive(0, 'sweep'), seeds.derive(0, 'sweep', 'b10_k20'))

  def test_generator_matches_derived_seed(self):
    expected = np.random.default_rng(seeds.derive(3, 'corpus')).uniform()
    self.assertEqual(seeds.generator(3, 'corpus').uniform(), expected)

  def test_spawn(self):
    children = seeds.spawn(11, 4)
    self.assertLen(children, 4)
    self.assertLen(set(children), 4)
    self.assertEqual(children, seeds.spawn(11, 4))
    self.assertEqual(children[:2], seeds.spawn(11, 2))


if __name__ == '__main__':
  absltest.main()
