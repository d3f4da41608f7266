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
"""Result bundles: the on-disk record of an attack or generalization run.

A bundle directory holds

  result.json   perturbations, traces, per-shape outcomes and metrics
  shapes/       one OFF file per perturbed shape
  README.md     this layout, for whoever finds the directory later
  config.ini    the resolved configuration of the run (written by the caller)

`result.json` is written with sorted keys and without timings, so reruns
with the same seed produce identical files.
"""

import json
import os
import re
from typing import Any, Dict, List, Optional, Sequence

import attr
import numpy as np

from univspec.attack import results
from univspec.common import errors
from univspec.geometry import mesh_io
from univspec.geometry import surfaces
from univspec.metrics import report
from univspec.synthesis import generalization

FORMAT_VERSION = 1
RESULT_NAME = 'result.json'
SHAPES_DIR = 'shapes'

_UNSAFE_CHARACTERS = re.compile(r'[^A-Za-z0-9_.-]')

_README = """\
# univspec {mode} run

Files:

* `config.ini`: resolved configuration; `univspec <command> --config
  config.ini` reruns the experiment.
* `result.json`: sorted-key JSON with
  * `format_version`, `mode` (`universal`, `pershape` or `generalization`),
    `seed`, `class_names`, `attack_config`;
  * `groups`: one entry per perturbation (a single group for universal and
    generalization runs, one per shape for per-shape runs), each with
    `name`, `rho` (length k), `trace` (per-iteration loss, spectral_loss,
    penalty, fooled, skipped_modes; empty for generalization runs) and
    `shapes`;
  * every shape record has `id`, `path` (perturbed geometry, relative to this
    directory), `original_label`, `final_label`, `alpha` (b x 3),
    `sigma_original`, `sigma_target` = sigma_original * (1 + rho) and
    `sigma_deformed`; generalization records add `alignment_trace` and
    `penalty_trace`;
  * `metrics`: per-shape rows (`id`, `original_label`, `final_label`,
    `fooled`, `curvature_distortion`, `l2_displacement`,
    `alignment_error`) recomputed from the geometry.
* `shapes/<id>.off`: perturbed shapes.

`univspec export --bundle <this directory>` turns the bundle into CSV or JSON
tables.
"""


class BundleError(errors.InputError):
  """A result bundle is missing or corrupt."""


def _floats(values) -> List[float]:
  return [float(v) for v in np.asarray(values, dtype=np.float64).ravel()]


def _matrix(values) -> List[List[float]]:
  return [_floats(row) for row in np.asarray(values, dtype=np.float64)]


@attr.s(auto_attribs=True, frozen=True, eq=False)
class BundleShape:
  """The recorded outcome of one perturbed shape."""

  id: str
  path: str
  original_label: Optional[int]
  final_label: Optional[int]
  alpha: np.ndarray
  sigma_original: np.ndarray
  sigma_target: np.ndarray
  sigma_deformed: np.ndarray
  alignment_trace: List[float] = attr.Factory(list)
  penalty_trace: List[List[float]] = attr.Factory(list)

  @property
  def fooled(self) -> bool:
    return self.final_label != self.original_label

  @property
  def alignment_error(self) -> float:
    return float(np.linalg.norm(self.sigma_target - self.sigma_deformed))

  def to_dict(self) -> Dict[str, Any]:
    values = {
        'id': self.id,
        'path': self.path,
        'original_label': self.original_label,
        'final_label': self.final_label,
        'alpha': _matrix(self.alpha),
        'sigma_original': _floats(self.sigma_original),
        'sigma_target': _floats(self.sigma_target),
        'sigma_deformed': _floats(self.sigma_deformed),
    }
    if self.alignment_trace:
      values['alignment_trace'] = _floats(self.alignment_trace)
      values['penalty_trace'] = [[int(i), float(p)]
                                 for i, p in self.penalty_trace]
    return values

  @classmethod
  def from_dict(cls, values: Dict[str, Any]) -> 'BundleShape':
    return cls(
        id=values['id'],
        path=values['path'],
        original_label=values['original_label'],
        final_label=values['final_label'],
        alpha=np.array(values['alpha'], dtype=np.float64).reshape(-1, 3),
        sigma_original=np.array(values['sigma_original'], dtype=np.float64),
        sigma_target=np.array(values['sigma_target'], dtype=np.float64),
        sigma_deformed=np.array(values['sigma_deformed'], dtype=np.float64),
        alignment_trace=list(values.get('alignment_trace', [])),
        penalty_trace=list(values.get('penalty_trace', [])))


@attr.s(auto_attribs=True, frozen=True, eq=False)
class BundleGroup:
  """Shapes that share one rho."""

  name: str
  rho: np.ndarray
  trace: List[Dict[str, Any]]
  shapes: List[BundleShape]

  def to_dict(self) -> Dict[str, Any]:
    return {
        'name': self.name,
        'rho': _floats(self.rho),
        'trace': list(self.trace),
        'shapes': [shape.to_dict() for shape in self.shapes],
    }

  @classmethod
  def from_dict(cls, values: Dict[str, Any]) -> 'BundleGroup':
    return cls(
        name=values['name'],
        rho=np.array(values['rho'], dtype=np.float64),
        trace=list(values['trace']),
        shapes=[BundleShape.from_dict(s) for s in values['shapes']])


@attr.s(auto_attribs=True, frozen=True, eq=False)
class Bundle:
  """A parsed result bundle.

  Attributes:
    directory: Where the bundle lives.
    mode: 'universal', 'pershape' or 'generalization'.
    seed: Seed of the stage that produced it.
    class_names: Classes of the attacked model.
    attack_config: Attack (or synthesis) parameters as plain values.
    groups: Perturbation groups in run order.
    metrics: Metrics recorded with the run.
  """

  directory: str
  mode: str
  seed: int
  class_names: List[str]
  attack_config: Dict[str, Any]
  groups: List[BundleGroup]
  metrics: report.MetricReport

  @property
  def shapes(self) -> List[BundleShape]:
    return [shape for group in self.groups for shape in group.shapes]

  @property
  def universal_rho(self) -> np.ndarray:
    """The single shared rho of a universal or generalization bundle."""
    if len(self.groups) != 1:
      raise BundleError(
          f'Bundle {self.directory!r} holds {len(self.groups)} perturbations '
          f'({self.mode} run); a universal run is needed')
    return self.groups[0].rho

  def load_shape(self, shape: BundleShape) -> surfaces.Surface:
    """Reads the perturbed geometry of one record."""
    return mesh_io.load_surface(
        os.path.join(self.directory, shape.path),
        surface_id=shape.id,
        label=shape.original_label)

  def to_dict(self) -> Dict[str, Any]:
    return {
        'format_version': FORMAT_VERSION,
        'mode': self.mode,
        'seed': self.seed,
        'class_names': list(self.class_names),
        'attack_config': dict(self.attack_config),
        'groups': [group.to_dict() for group in self.groups],
        'metrics': self.metrics.to_dict(),
    }


def shape_file(shape_id: str) -> str:
  """Bundle-relative path of the perturbed geometry of a shape."""
  return f'{SHAPES_DIR}/{_UNSAFE_CHARACTERS.sub("_", shape_id)}.off'


def _config_values(config) -> Dict[str, Any]:
  values = attr.asdict(config)
  values.pop('workers', None)
  return values


def _check_unique(shapes: Sequence[surfaces.Surface]) -> None:
  names = [shape_file(s.id) for s in shapes]
  if len(set(names)) != len(names):
    raise BundleError('Shape ids collide after sanitizing file names')


def _write(bundle: Bundle, perturbed: Sequence[surfaces.Surface]) -> str:
  directory = bundle.directory
  try:
    os.makedirs(os.path.join(directory, SHAPES_DIR), exist_ok=True)
  except OSError as e:
    raise BundleError(f'Unable to create bundle {directory!r}: {e}') from e
  for record, surface in zip(bundle.shapes, perturbed):
    mesh_io.save_surface(surface, os.path.join(directory, record.path))
  path = os.path.join(directory, RESULT_NAME)
  try:
    with open(path, 'w', encoding='utf-8') as f:
      json.dump(bundle.to_dict(), f, indent=1, sort_keys=True)
      f.write('\n')
    with open(os.path.join(directory, 'README.md'), 'w',
              encoding='utf-8') as f:
      f.write(_README.format(mode=bundle.mode))
  except OSError as e:
    raise BundleError(f'Unable to write bundle {directory!r}: {e}') from e
  return path


def _outcome_record(outcome: results.ShapeOutcome) -> BundleShape:
  return BundleShape(
      id=outcome.id,
      path=shape_file(outcome.id),
      original_label=outcome.original_label,
      final_label=outcome.final_label,
      alpha=outcome.coefficients.alpha,
      sigma_original=outcome.sigma_original,
      sigma_target=outcome.sigma_target,
      sigma_deformed=outcome.sigma_deformed)


def _merged_metrics(
    attack_results: Sequence[results.AttackResult]) -> report.MetricReport:
  rows = []
  for result in attack_results:
    if result.metrics is None:
      raise ValueError('Attack results must carry metrics to be bundled')
    rows.extend(result.metrics.shapes)
  return report.MetricReport(shapes=rows)


def write_attack_bundle(directory: str,
                        attack_results: Sequence[results.AttackResult],
                        class_names: Sequence[str],
                        mode: str = 'universal') -> str:
  """Writes the bundle of a universal run (one result) or per-shape run.

  Returns:
    Path of result.json.
  """
  if mode not in ('universal', 'pershape'):
    raise ValueError(f'Unknown attack mode {mode!r}')
  if not attack_results:
    raise ValueError('Nothing to bundle')
  groups = []
  perturbed = []
  for result in attack_results:
    name = 'universal' if mode == 'universal' else result.outcomes[0].id
    groups.append(
        BundleGroup(
            name=name,
            rho=result.perturbation.rho,
            trace=[record.to_dict() for record in result.trace],
            shapes=[_outcome_record(o) for o in result.outcomes]))
    perturbed.extend(o.deformed for o in result.outcomes)
  _check_unique(perturbed)
  bundle = Bundle(
      directory=directory,
      mode=mode,
      seed=attack_results[0].seed,
      class_names=list(class_names),
      attack_config=_config_values(attack_results[0].config),
      groups=groups,
      metrics=_merged_metrics(attack_results))
  return _write(bundle, perturbed)


def write_generalization_bundle(directory: str,
                                result: generalization.GeneralizationResult,
                                metrics: report.MetricReport,
                                class_names: Sequence[str],
                                config) -> str:
  """Writes the bundle of a generalization run; returns result.json's path."""
  shapes = []
  for r in result.results:
    shapes.append(
        BundleShape(
            id=r.id,
            path=shape_file(r.id),
            original_label=r.label_before,
            final_label=r.label_after,
            alpha=r.coefficients.alpha,
            sigma_original=r.sigma_original,
            sigma_target=r.sigma_target,
            sigma_deformed=r.sigma_deformed,
            alignment_trace=list(r.alignment_trace),
            penalty_trace=[[i, p] for i, p in r.penalty_trace]))
  perturbed = [r.deformed for r in result.results]
  _check_unique(perturbed)
  bundle = Bundle(
      directory=directory,
      mode='generalization',
      seed=config.seed,
      class_names=list(class_names),
      attack_config=_config_values(config),
      groups=[
          BundleGroup(
              name='generalization',
              rho=result.results[0].perturbation.rho,
              trace=[],
              shapes=shapes)
      ],
      metrics=metrics)
  return _write(bundle, perturbed)


def read_bundle(directory: str) -> Bundle:
  """Parses the bundle in `directory`.

  Raises:
    BundleError: If result.json is missing, malformed or inconsistent.
  """
  path = os.path.join(directory, RESULT_NAME)
  try:
    with open(path, 'r', encoding='utf-8') as f:
      content = json.load(f)
  except OSError as e:
    raise BundleError(f'Unable to read bundle {path!r}: {e}') from e
  except ValueError as e:
    raise BundleError(f'Bundle {path!r} is not valid JSON: {e}') from e
  try:
    if content['format_version'] != FORMAT_VERSION:
      raise BundleError(
          f'Bundle {path!r} has format version '
          f'{content["format_version"]!r}, expected {FORMAT_VERSION}')
    bundle = Bundle(
        directory=directory,
        mode=content['mode'],
        seed=int(content['seed']),
        class_names=list(content['class_names']),
        attack_config=dict(content['attack_config']),
        groups=[BundleGroup.from_dict(g) for g in content['groups']],
        metrics=report.MetricReport.from_dict(content['metrics']))
  except (KeyError, TypeError, ValueError) as e:
    raise BundleError(f'Bundle {path!r} is malformed: {e!r}') from e
  for group in bundle.groups:
    for shape in group.shapes:
      if len(shape.sigma_original) != len(group.rho) or len(
          shape.sigma_deformed) != len(group.rho):
        raise BundleError(
            f'Bundle {path!r}: spectra of {shape.id!r} do not match the '
            f'length {len(group.rho)} of rho')
  if {s.id for s in bundle.shapes} != {m.id for m in bundle.metrics.shapes}:
    raise BundleError(f'Bundle {path!r}: metrics and shapes disagree on ids')
  return bundle
