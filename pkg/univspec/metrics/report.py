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
"""Aggregated attack metrics, always recomputed from geometry."""

from typing import Any, Dict, List, Optional, Sequence

import attr
import numpy as np

from univspec.classifier import pointnet
from univspec.common import parallel
from univspec.geometry import surfaces
from univspec.metrics import noticeability


@attr.s(auto_attribs=True, frozen=True)
class ShapeMetrics:
  """Metrics of one (original, perturbed) pair.

  `curvature_distortion` is None for point clouds.
  """

  id: str
  original_label: int
  final_label: int
  l2_displacement: float
  curvature_distortion: Optional[float] = None
  alignment_error: Optional[float] = None

  @property
  def fooled(self) -> bool:
    return self.final_label != self.original_label

  def to_dict(self) -> Dict[str, Any]:
    values = attr.asdict(self)
    values['fooled'] = self.fooled
    return values

  @classmethod
  def from_dict(cls, values: Dict[str, Any]) -> 'ShapeMetrics':
    values = dict(values)
    values.pop('fooled', None)
    return cls(**values)


def _mean(values: List[float]) -> Optional[float]:
  return float(np.mean(values)) if values else None


@attr.s(auto_attribs=True, frozen=True)
class MetricReport:
  """Noticeability and efficacy of a set of perturbations.

  Point clouds have no curvature: `curvature_available` is then False and
  the curvature aggregate covers the meshes only (None if there are none).
  """

  shapes: List[ShapeMetrics] = attr.ib(converter=list)

  @property
  def count(self) -> int:
    return len(self.shapes)

  @property
  def fooled_count(self) -> int:
    return sum(s.fooled for s in self.shapes)

  @property
  def success_rate(self) -> float:
    return noticeability.success_rate([s.fooled for s in self.shapes])

  @property
  def curvature_distortion(self) -> Optional[float]:
    return _mean([
        s.curvature_distortion
        for s in self.shapes
        if s.curvature_distortion is not None
    ])

  @property
  def curvature_available(self) -> bool:
    return all(s.curvature_distortion is not None for s in self.shapes)

  @property
  def l2_displacement(self) -> float:
    return float(np.mean([s.l2_displacement for s in self.shapes]))

  @property
  def alignment_errors(self) -> List[Optional[float]]:
    return [s.alignment_error for s in self.shapes]

  def to_dict(self) -> Dict[str, Any]:
    return {
        'count': self.count,
        'fooled_count': self.fooled_count,
        'success_rate': self.success_rate,
        'curvature_distortion': self.curvature_distortion,
        'curvature_available': self.curvature_available,
        'l2_displacement': self.l2_displacement,
        'shapes': [s.to_dict() for s in self.shapes],
    }

  @classmethod
  def from_dict(cls, values: Dict[str, Any]) -> 'MetricReport':
    return cls(shapes=[ShapeMetrics.from_dict(s) for s in values['shapes']])


def shape_metrics(original: surfaces.Surface,
                  perturbed: surfaces.Surface,
                  classifier: pointnet.ClassifierModel,
                  alignment_error: Optional[float] = None) -> ShapeMetrics:
  distortion = None
  if original.is_mesh:
    distortion = noticeability.curvature_distortion(original, perturbed)
  return ShapeMetrics(
      id=original.id,
      original_label=pointnet.predict(classifier, original.vertices),
      final_label=pointnet.predict(classifier, perturbed.vertices),
      l2_displacement=noticeability.l2_displacement(original, perturbed),
      curvature_distortion=distortion,
      alignment_error=alignment_error)


def evaluate_attack(originals: Sequence[surfaces.Surface],
                    perturbed: Sequence[surfaces.Surface],
                    classifier: pointnet.ClassifierModel,
                    alignment_errors: Optional[Sequence[float]] = None,
                    workers: int = 1) -> MetricReport:
  """Recomputes predictions and noticeability for paired shapes.

  Stored labels or fooled flags are never consulted.

  Raises:
    PairingError: If the lists differ in length or a pair does not match.
  """
  if len(originals) != len(perturbed):
    raise noticeability.PairingError(
        f'{len(originals)} originals but {len(perturbed)} perturbed shapes')
  if not originals:
    raise noticeability.PairingError('Nothing to evaluate')
  if alignment_errors is None:
    alignment_errors = [None] * len(originals)
  rows = parallel.ordered_map(
      lambda job: shape_metrics(job[0], job[1], classifier, job[2]),
      list(zip(originals, perturbed, alignment_errors)), workers)
  return MetricReport(shapes=rows)
