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
"""Transfer of a universal perturbation to unseen shapes."""

from typing import List, Optional, Sequence

import attr

from univspec.classifier import pointnet
from univspec.common import parallel
from univspec.geometry import surfaces
from univspec.spectral import cache as cache_lib
from univspec.synthesis import synthesizer


@attr.s(auto_attribs=True, frozen=True, eq=False)
class GeneralizationResult:
  """Synthesis results of unseen shapes and how many of them were fooled."""

  results: List[synthesizer.SynthesisResult]

  @property
  def fooled_count(self) -> int:
    return sum(bool(r.fooled) for r in self.results)

  @property
  def success_rate(self) -> float:
    return 100.0 * self.fooled_count / len(self.results)


def generalize(
    shapes: Sequence[surfaces.Surface],
    rho: synthesizer.PerturbationLike,
    classifier: pointnet.ClassifierModel,
    config: synthesizer.SynthesisConfig = synthesizer.SynthesisConfig(),
    cache: Optional[cache_lib.DecompositionCache] = None
) -> GeneralizationResult:
  """Applies rho to every shape by synthesis and records predictions.

  A shape counts as fooled when the prediction on the synthesized shape
  differs from the prediction on the original.
  """
  if not shapes:
    raise ValueError('Generalization needs at least one shape')
  results = parallel.ordered_map(
      lambda shape: synthesizer.synthesize_from_spectrum(
          shape, rho, config, classifier, cache), shapes, config.workers)
  return GeneralizationResult(results=results)
