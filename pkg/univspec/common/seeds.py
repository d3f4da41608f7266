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
"""Named sub-seeds derived from a single run seed.

A run is configured with one integer seed. Each stage (corpus generation,
training, attack, synthesis, ...) draws from its own stream derived from that
seed and the stage name, so re-running one stage alone reproduces it.

Usage:
  corpus_rng = seeds.generator(run_seed, 'corpus')
  train_seed = seeds.derive(run_seed, 'train')
"""

from typing import List
import zlib

import numpy as np


def _name_key(name: str) -> int:
  return zlib.crc32(name.encode('utf-8'))


def derive(seed: int, *names: str) -> int:
  """Returns a 32-bit seed derived from `seed` and a path of stage names."""
  entropy = [int(seed)] + [_name_key(name) for name in names]
  return int(np.random.SeedSequence(entropy).generate_state(1)[0])


def generator(seed: int, *names: str) -> np.random.Generator:
  """Returns a numpy generator for the named stream."""
  return np.random.default_rng(derive(seed, *names))


def spawn(seed: int, count: int) -> List[int]:
  """Returns `count` independent integer seeds, e.g. one per shape."""
  children = np.random.SeedSequence(int(seed)).spawn(count)
  return [int(child.generate_state(1)[0]) for child in children]
