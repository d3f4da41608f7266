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
"""Class templates: ellipsoids with a class-specific pattern of limbs.

The class of a synthetic shape is encoded in intrinsic geometry (how many
limbs it has, where and how large), so that pose changes, which are close to
isometries, do not change it.
"""

from typing import List, Tuple

import attr
import numpy as np

from univspec.common import errors
from univspec.corpus import primitives
from univspec.geometry import surfaces

# A limb cap must hold at least this many vertices to be resolved.
_MIN_VERTICES_PER_LIMB = 8

_LIMB_AXES = (
    (0.0, 0.0, 1.0),
    (0.0, 0.0, -1.0),
    (1.0, 0.0, 0.0),
    (-1.0, 0.0, 0.0),
    (0.0, 1.0, 0.0),
    (0.0, -1.0, 0.0),
)


class CorpusError(errors.ConfigError):
  """Corpus parameters do not produce a valid, separable corpus."""


def _unit(value) -> Tuple[float, float, float]:
  direction = np.asarray(value, dtype=np.float64)
  norm = np.linalg.norm(direction)
  if direction.shape != (3,) or not norm > 0:
    raise ValueError(f'Expected a nonzero 3-vector, got {value!r}')
  return tuple(direction / norm)


def _positive(instance, attribute, value):
  del instance
  if not np.all(np.asarray(value) > 0):
    raise ValueError(f'{attribute.name} must be positive, got {value!r}')


@attr.s(auto_attribs=True, frozen=True)
class Protrusion:
  """A Gaussian radial bump around `direction`.

  The radius along a unit direction u is scaled by
  1 + height * exp(-angle(u, direction)^2 / (2 width^2)).
  """

  direction: Tuple[float, float, float] = attr.ib(converter=_unit)
  height: float = attr.ib(default=0.8, validator=_positive)
  width: float = attr.ib(default=0.3, validator=_positive)


@attr.s(auto_attribs=True, frozen=True)
class Joint:
  """Where a limb attaches: points beyond `origin` along `axis` may bend."""

  origin: Tuple[float, float, float]
  axis: Tuple[float, float, float] = attr.ib(converter=_unit)
  ramp: float = attr.ib(default=0.2, validator=_positive)


@attr.s(auto_attribs=True, frozen=True)
class ClassTemplate:
  """Rest geometry of one class."""

  name: str
  radii: Tuple[float, float, float] = attr.ib(
      converter=tuple, validator=_positive)
  protrusions: Tuple[Protrusion, ...] = attr.ib(converter=tuple, default=())

  def radial_scale(self, directions: np.ndarray) -> np.ndarray:
    scale = np.ones(len(directions))
    for limb in self.protrusions:
      cosine = np.clip(directions @ np.asarray(limb.direction), -1.0, 1.0)
      scale += limb.height * np.exp(-np.arccos(cosine)**2 /
                                    (2.0 * limb.width**2))
    return scale

  def joints(self) -> Tuple[Joint, ...]:
    """One joint per limb, at the base of its bump."""
    result = []
    radii = np.asarray(self.radii)
    for limb in self.protrusions:
      axis = radii * np.asarray(limb.direction)
      length = np.linalg.norm(axis)
      base = np.cos(1.5 * limb.width) * length
      result.append(
          Joint(
              origin=tuple(base * axis / length),
              axis=tuple(axis),
              ramp=0.5 * limb.height * length))
    return tuple(result)


def default_templates(class_count: int) -> List[ClassTemplate]:
  """Class c has 2 + c limbs on distinct coordinate axes and its own radii."""
  if not 2 <= class_count <= len(_LIMB_AXES) - 1:
    raise CorpusError(
        f'Built-in templates support 2 to {len(_LIMB_AXES) - 1} classes, '
        f'got {class_count}')
  templates = []
  for c in range(class_count):
    templates.append(
        ClassTemplate(
            name=f'class{c}',
            radii=(1.0, 0.8 + 0.1 * c, 0.7 + 0.05 * c),
            protrusions=[
                Protrusion(direction=axis, height=0.9 - 0.1 * (i % 2))
                for i, axis in enumerate(_LIMB_AXES[:2 + c])
            ]))
  return templates


def make_base_shape(template: ClassTemplate,
                    vertex_count: int,
                    seed: int,
                    surface_id: str = 'base') -> surfaces.Surface:
  """Closed genus-0 rest shape of a class at the given resolution.

  A jittered sphere mesh (seeded) is pushed out radially by the limb bumps and
  then scaled by the ellipsoid radii.

  Raises:
    CorpusError: If the resolution can not resolve the limbs.
  """
  for limb in template.protrusions:
    cap = 0.5 * (1.0 - np.cos(limb.width)) * vertex_count
    if cap < _MIN_VERTICES_PER_LIMB:
      raise CorpusError(
          f'{vertex_count} vertices are too few for template '
          f'{template.name!r}: a limb of width {limb.width} would hold '
          f'{cap:.1f} vertices, need {_MIN_VERTICES_PER_LIMB}')
  sphere = primitives.sphere_mesh(vertex_count, seed)
  directions = sphere.vertices
  vertices = (directions * template.radial_scale(directions)[:, None] *
              np.asarray(template.radii))
  return surfaces.Surface(
      vertices=vertices, faces=sphere.faces, id=surface_id)
