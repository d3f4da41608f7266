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
"""Order-preserving parallel map over independent per-shape jobs."""

from concurrent import futures
from typing import Callable, List, Sequence, TypeVar

ItemType = TypeVar('ItemType')
ReturnType = TypeVar('ReturnType')


def ordered_map(fn: Callable[[ItemType], ReturnType],
                items: Sequence[ItemType],
                workers: int = 1) -> List[ReturnType]:
  """Applies `fn` to every item and returns results in input order.

  Jobs must not share mutable state. With `workers <= 1` (or a single item)
  everything runs inline in the calling thread, which keeps stack traces
  simple and avoids thread start-up cost in tight optimization loops.

  Args:
    fn: A pure function of one item.
    items: Items to process.
    workers: Maximum number of threads.

  Returns:
    `[fn(item) for item in items]`.

  Raises:
    Whatever `fn` raises for the first failing item (in input order).
  """
  if workers <= 1 or len(items) <= 1:
    return [fn(item) for item in items]

  with futures.ThreadPoolExecutor(max_workers=workers) as executor:
    pending = [executor.submit(fn, item) for item in items]
    return [future.result() for future in pending]
