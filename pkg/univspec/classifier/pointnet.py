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
"""A small PointNet: shared per-point MLP, max pooling and an MLP head.

Batch normalization is replaced by a frozen affine normalization of the
(centred) input coordinates, fixed from the training data. The network is
then a plain function of its input in evaluation and training alike, and
input gradients are exact.
"""

from typing import Callable, List, Optional, Sequence

import attr
import numpy as np
import torch
from torch import nn

from univspec.common import errors

DTYPE = torch.float64

DEFAULT_POINT_WIDTHS = (3, 32, 64, 128)
DEFAULT_HEAD_WIDTHS = (128, 64)


class NonFiniteInputError(errors.InputError):
  """Points or logits contain NaN or Inf."""


class PointNet(nn.Module):
  """Permutation-invariant classifier of n x 3 point sets.

  Inputs are centred per shape, mapped through x -> (x - shift) * scale with
  frozen `feature_shift`/`feature_scale` buffers, passed through the point
  layers (ReLU after each), max-pooled over points and classified by the head
  (ReLU after every layer but the last).
  """

  def __init__(self, point_widths: Sequence[int], head_widths: Sequence[int],
               class_count: int) -> None:
    super().__init__()
    point_widths = list(point_widths)
    head_widths = list(head_widths) + [class_count]
    if point_widths[0] != 3:
      raise ValueError(f'Point layers must start at 3, got {point_widths!r}')
    if head_widths[0] != point_widths[-1]:
      raise ValueError(
          f'Head input width {head_widths[0]} does not match pooled width '
          f'{point_widths[-1]}')
    if class_count < 2:
      raise ValueError(f'Need at least 2 classes, got {class_count}')
    self.point_layers = nn.ModuleList([
        nn.Linear(a, b, dtype=DTYPE)
        for a, b in zip(point_widths[:-1], point_widths[1:])
    ])
    self.head_layers = nn.ModuleList([
        nn.Linear(a, b, dtype=DTYPE)
        for a, b in zip(head_widths[:-1], head_widths[1:])
    ])
    self.register_buffer('feature_shift', torch.zeros(3, dtype=DTYPE))
    self.register_buffer('feature_scale', torch.ones(3, dtype=DTYPE))

  def forward(self, points: torch.Tensor) -> torch.Tensor:
    """Maps (..., n, 3) points to (..., C) logits."""
    x = points - points.mean(dim=-2, keepdim=True)
    x = (x - self.feature_shift) * self.feature_scale
    for layer in self.point_layers:
      x = torch.relu(layer(x))
    x = x.max(dim=-2).values
    for layer in self.head_layers[:-1]:
      x = torch.relu(layer(x))
    return self.head_layers[-1](x)

  @property
  def point_widths(self) -> List[int]:
    return [self.point_layers[0].in_features
           ] + [layer.out_features for layer in self.point_layers]

  @property
  def head_widths(self) -> List[int]:
    return [self.head_layers[0].in_features
           ] + [layer.out_features for layer in self.head_layers]


def initialize(network: PointNet, seed: int) -> None:
  """Seeded uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) initialization."""
  rng = np.random.default_rng(seed)
  with torch.no_grad():
    for layer in list(network.point_layers) + list(network.head_layers):
      bound = 1.0 / np.sqrt(layer.in_features)
      layer.weight.copy_(
          torch.from_numpy(rng.uniform(-bound, bound, layer.weight.shape)))
      layer.bias.copy_(
          torch.from_numpy(rng.uniform(-bound, bound, layer.bias.shape)))


def _check_network(instance, attribute, value):
  del instance, attribute
  if not isinstance(value, PointNet):
    raise TypeError(f'Expected a PointNet, got {type(value).__name__}')


@attr.s(auto_attribs=True, frozen=True, eq=False)
class ClassifierModel:
  """A trained, frozen classifier and the names of its classes.

  Attributes:
    network: The PointNet, in evaluation mode with gradients disabled on its
      parameters. Never mutated after construction.
    class_names: Names of the |C| >= 2 output classes.
  """

  network: PointNet = attr.ib(validator=_check_network)
  class_names: List[str] = attr.ib(converter=list)

  def __attrs_post_init__(self):
    count = self.network.head_layers[-1].out_features
    if len(self.class_names) != count:
      raise ValueError(
          f'Network has {count} outputs but {len(self.class_names)} class '
          'names were given')
    for value in self.network.state_dict().values():
      if not torch.all(torch.isfinite(value)):
        raise NonFiniteInputError('Classifier weights are not finite')
    self.network.eval()
    for parameter in self.network.parameters():
      parameter.requires_grad_(False)

  @property
  def class_count(self) -> int:
    return len(self.class_names)

  @property
  def point_mlp_widths(self) -> List[int]:
    return self.network.point_widths

  @property
  def head_widths(self) -> List[int]:
    return self.network.head_widths


def build_model(class_names: Sequence[str],
                point_widths: Sequence[int] = DEFAULT_POINT_WIDTHS,
                head_widths: Sequence[int] = DEFAULT_HEAD_WIDTHS,
                seed: int = 0) -> ClassifierModel:
  """A freshly initialized model."""
  network = PointNet(point_widths, head_widths, len(class_names))
  initialize(network, seed)
  return ClassifierModel(network=network, class_names=list(class_names))


def _as_tensor(points: np.ndarray, requires_grad: bool = False) -> torch.Tensor:
  points = np.asarray(points, dtype=np.float64)
  if points.ndim != 2 or points.shape[1] != 3 or len(points) == 0:
    raise ValueError(f'Expected n x 3 points with n >= 1, got {points.shape!r}')
  if not np.all(np.isfinite(points)):
    raise NonFiniteInputError('Input points are not finite')
  return torch.tensor(points, dtype=DTYPE, requires_grad=requires_grad)


def forward(model: ClassifierModel, points: np.ndarray) -> np.ndarray:
  """Logits Z of one shape: a length-|C| array of unnormalized log-probs."""
  with torch.no_grad():
    logits = model.network(_as_tensor(points)).numpy()
  if not np.all(np.isfinite(logits)):
    raise NonFiniteInputError('Classifier produced non-finite logits')
  return logits


def predict_logits(logits: np.ndarray) -> int:
  """Argmax; ties resolve to the lowest index."""
  return int(np.argmax(logits))


def predict(model: ClassifierModel, points: np.ndarray) -> int:
  return predict_logits(forward(model, points))


def softmax(logits: np.ndarray) -> np.ndarray:
  shifted = np.exp(logits - np.max(logits))
  return shifted / shifted.sum()


def input_gradient(
    model: ClassifierModel, points: np.ndarray,
    objective: Callable[[torch.Tensor], torch.Tensor]) -> np.ndarray:
  """Reverse-mode gradient of objective(logits) with respect to the points.

  Args:
    model: The classifier; its parameters are not differentiated.
    points: n x 3 input.
    objective: Maps the length-|C| logits tensor to a scalar tensor.

  Returns:
    n x 3 gradient.
  """
  tensor = _as_tensor(points, requires_grad=True)
  value = objective(model.network(tensor))
  if not torch.isfinite(value):
    raise NonFiniteInputError(f'Objective is not finite: {value.item()!r}')
  (gradient,) = torch.autograd.grad(value, tensor)
  return gradient.numpy()


def logit_gap_gradient(model: ClassifierModel, points: np.ndarray,
                       true_class: int,
                       other_class: Optional[int] = None) -> np.ndarray:
  """Gradient of Z_true - Z_other (other = best competing class by default)."""
  if other_class is None:
    logits = forward(model, points)
    competitors = np.delete(np.arange(len(logits)), true_class)
    other_class = int(competitors[np.argmax(logits[competitors])])
  return input_gradient(model, points,
                        lambda z: z[true_class] - z[other_class])
