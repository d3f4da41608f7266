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
"""Skeletal-style pose changes that keep shapes close to isometric."""

from typing import Optional, Sequence, Tuple

import attr
import numpy as np
from scipy.spatial import transform as spatial_transform

from univspec.corpus import templates
from univspec.geometry import surfaces

MAX_BEND = np.pi / 4


def _bend_range(instance, attribute, value):
  del instance
  if not 0.0 <= value <= MAX_BEND:
    raise ValueError(
        f'{attribute.name} must lie in [0, pi/4] to avoid self-intersection, '
        f'got {value!r}')


@attr.s(auto_attribs=True, frozen=True)
class PoseParams:
  """Joints to bend and the range of bend angles.

  Attributes:
    joints: Limb joints, usually `ClassTemplate.joints()`.
    max_bend: Angles are drawn uniformly from [-max_bend, max_bend].
    angles: Explicit per-joint angles; overrides sampling when given.
  """

  joints: Tuple[templates.Joint, ...] = attr.ib(converter=tuple)
  max_bend: float = attr.ib(default=np.pi / 6, validator=_bend_range)
  angles: Optional[Sequence[float]] = None

  def __attrs_post_init__(self):
    if self.angles is not None:
      if len(self.angles) != len(self.joints):
        raise ValueError(
            f'Got {len(self.angles)} angles for {len(self.joints)} joints')
      for angle in self.angles:
        _bend_range(self, attr.fields(PoseParams).max_bend, abs(angle))


def _smoothstep(x: np.ndarray) -> np.ndarray:
  x = np.clip(x, 0.0, 1.0)
  return x * x * (3.0 - 2.0 * x)


def _bend_axis(limb_axis: np.ndarray, rng: np.random.Generator) -> np.ndarray:
  """A random unit vector perpendicular to the limb."""
  helper = np.eye(3)[np.argmin(np.abs(limb_axis))]
  first = np.cross(limb_axis, helper)
  first /= np.linalg.norm(first)
  second = np.cross(limb_axis, first)
  phase = rng.uniform(0.0, 2.0 * np.pi)
  return np.cos(phase) * first + np.sin(phase) * second


def apply_pose_deformation(shape: surfaces.Surface, pose: PoseParams,
                           seed: int) -> surfaces.Surface:
  """Bends every limb about its joint.

  Vertices past a joint rotate rigidly by the joint angle; within `ramp` of
  the joint the angle blends in with a smoothstep, which keeps the bend
  smooth. Joints with a zero angle leave the shape bit-for-bit unchanged.

  Args:
    shape: Rest shape, in the frame of the joints.
    pose: Joints and angle range.
    seed: Seeds the angles (unless given) and the bend directions.

  Returns:
    The posed shape with the same connectivity.
  """
  rng = np.random.default_rng(seed)
  if pose.angles is None:
    angles = rng.uniform(-pose.max_bend, pose.max_bend, len(pose.joints))
  else:
    angles = np.asarray(pose.angles, dtype=np.float64)

  vertices = np.array(shape.vertices)
  rest = shape.vertices
  for joint, angle in zip(pose.joints, angles):
    limb_axis = np.asarray(joint.axis)
    bend_axis = _bend_axis(limb_axis, rng)
    if angle == 0.0:
      continue
    origin = np.asarray(joint.origin)
    # Limb membership is decided on the rest shape; limbs do not overlap.
    blend = _smoothstep((rest - origin) @ limb_axis / joint.ramp)
    moving = np.flatnonzero(blend > 0)
    rotations = spatial_transform.Rotation.from_rotvec(
        (angle * blend[moving])[:, None] * bend_axis)
    vertices[moving] = origin + rotations.apply(vertices[moving] - origin)
  return shape.with_vertices(vertices)
