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
"""Tests for univspec.common.parallel."""

import threading
import unittest

from univspec.common import parallel


class OrderedMapTest(unittest.TestCase):

  def test_preserves_order(self):
    self.assertEqual(
        parallel.ordered_map(lambda x: x * x, list(range(20)), workers=4),
        [x * x for x in range(20)])

  def test_single_worker_runs_inline(self):
    threads = parallel.ordered_map(lambda _: threading.get_ident(), [1, 2, 3])
    self.assertEqual(set(threads), {threading.get_ident()})

  def test_empty(self):
    self.assertEqual(parallel.ordered_map(str, [], workers=3), [])

  def test_propagates_first_failure(self):

    def fail_on_odd(x):
      if x % 2:
        raise ValueError(f'odd {x}')
      return x

    with self.assertRaisesRegex(ValueError, 'odd 1'):
      parallel.ordered_map(fail_on_odd, [0, 1, 2, 3], workers=2)


if __name__ == '__main__':
  unittest.main()
