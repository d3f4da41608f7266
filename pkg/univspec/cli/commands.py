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
"""Command implementations: each reads a RunConfig and writes a run directory.

Every command that writes an output directory also writes the resolved
configuration to `<output_dir>/config.ini`. Inputs (manifests, shape files,
model files, bundles) are only ever read.
"""

import csv
import datetime
import json
import os
from typing import Callable, Dict, List, Optional, Sequence

from absl import logging
import attr
import humanize
import immutabledict
import numpy as np
import termcolor

from univspec.attack import engine
from univspec.classifier import pointnet
from univspec.classifier import training
from univspec.classifier import weights
from univspec.cli import bundles
from univspec.cli import config as config_lib
from univspec.cli import export
from univspec.common import errors
from univspec.common import seeds
from univspec.corpus import dataset
from univspec.corpus import manifest as manifest_lib
from univspec.geometry import laplacians
from univspec.geometry import mesh_io
from univspec.geometry import surfaces
from univspec.metrics import report
from univspec.spectral import cache as cache_lib
from univspec.spectral import eigensolver
from univspec.synthesis import generalization

EXIT_OK = 0
EXIT_UNKNOWN = 1

EXIT_CODES = immutabledict.immutabledict({
    errors.ConfigError: 2,
    errors.InputError: 3,
    errors.NumericalError: 4,
    errors.PreconditionError: 5,
})

SWEEP_COLUMNS = ('b', 'k', 'success_rate', 'curvature_distortion',
                 'l2_displacement', 'alignment_error',
                 'generalization_success_rate',
                 'generalization_alignment_error')


def exit_code(error: BaseException) -> int:
  for error_class, code in EXIT_CODES.items():
    if isinstance(error, error_class):
      return code
  return EXIT_UNKNOWN


def _duration(seconds: float) -> str:
  return humanize.naturaldelta(datetime.timedelta(seconds=seconds))


def _percent(value: Optional[float]) -> str:
  return 'n/a' if value is None else f'{value:.1f}%'


def _prepare_output(config: config_lib.RunConfig) -> str:
  output_dir = config.get('run.output_dir')
  try:
    os.makedirs(output_dir, exist_ok=True)
  except OSError as e:
    raise errors.InputError(
        f'Unable to create output directory {output_dir!r}: {e}') from e
  config_lib.write_config(config, os.path.join(output_dir, 'config.ini'))
  return output_dir


def _write_json(path: str, content) -> None:
  try:
    with open(path, 'w', encoding='utf-8') as f:
      json.dump(content, f, indent=1, sort_keys=True)
      f.write('\n')
  except OSError as e:
    raise errors.InputError(f'Unable to write {path!r}: {e}') from e


def _write_csv(path: str, header: Sequence[str], rows) -> None:
  try:
    with open(path, 'w', encoding='utf-8', newline='') as f:
      writer = csv.writer(f, lineterminator='\n')
      writer.writerow(header)
      writer.writerows(rows)
  except OSError as e:
    raise errors.InputError(f'Unable to write {path!r}: {e}') from e


def _cache(config: config_lib.RunConfig) -> Optional[cache_lib.DecompositionCache]:
  directory = config.get('run.cache_dir')
  return cache_lib.DecompositionCache(directory) if directory else None


def _load_model(config: config_lib.RunConfig) -> pointnet.ClassifierModel:
  return weights.deserialize_model(config.get('run.model'))


def _load_shapes(config: config_lib.RunConfig, manifest: manifest_lib.Manifest,
                 entries: Sequence[manifest_lib.ManifestEntry]
                ) -> List[surfaces.Surface]:
  shapes = manifest.load(list(entries))
  if config.get('run.normalize_area'):
    shapes = [surfaces.normalize_area(s) if s.is_mesh else s for s in shapes]
  return shapes


def _attack_shapes(config: config_lib.RunConfig,
                   manifest: manifest_lib.Manifest,
                   model: pointnet.ClassifierModel) -> List[surfaces.Surface]:
  """The shapes named by run.ids, or the first run.count of run.split."""
  ids = list(config.get('run.ids')) or None
  entries = manifest.select(config.get('run.split'), ids)
  shapes = _load_shapes(config, manifest, entries)
  if config.get('run.skip_misclassified'):
    kept = [s for s in shapes if pointnet.predict(model, s.vertices) == s.label]
    if len(kept) < len(shapes):
      logging.info('Skipping %d misclassified shapes', len(shapes) - len(kept))
    shapes = kept
  if ids is None:
    shapes = shapes[:config.get('run.count')]
  if not shapes:
    raise errors.PreconditionError('No shapes left to attack')
  return shapes


def _held_out_shapes(config: config_lib.RunConfig,
                     manifest: manifest_lib.Manifest,
                     exclude: Sequence[str]) -> List[surfaces.Surface]:
  """Unseen shapes for generalization, optionally of a single class."""
  label = config.get('run.generalize_label')
  excluded = set(exclude)
  entries = [
      e for e in manifest.select(config.get('run.generalize_split'))
      if e.id not in excluded and (label < 0 or e.label == label)
  ][:config.get('run.generalize_count')]
  if not entries:
    raise errors.PreconditionError(
        f'No held-out shapes in split {config.get("run.generalize_split")!r}'
        + (f' with label {label}' if label >= 0 else ''))
  return _load_shapes(config, manifest, entries)


def _gen_corpus(config: config_lib.RunConfig) -> None:
  output_dir = _prepare_output(config)
  manifest = dataset.generate_dataset(config.corpus, output_dir)
  counts = {s: len(manifest.select(s)) for s in manifest_lib.Split}
  print('Corpus written to', termcolor.colored(output_dir, color='blue'))
  print(f'{counts[manifest_lib.Split.TRAIN]} training and '
        f'{counts[manifest_lib.Split.TEST]} test shapes in '
        f'{len(manifest.class_names)} classes')


def _train(config: config_lib.RunConfig) -> None:
  manifest = manifest_lib.read_manifest(config.get('run.manifest'))
  train_shapes = _load_shapes(config, manifest,
                              manifest.select(manifest_lib.Split.TRAIN))
  test_shapes = _load_shapes(config, manifest,
                             manifest.select(manifest_lib.Split.TEST))
  model = pointnet.build_model(
      manifest.class_names,
      point_widths=config.get('train.point_widths'),
      head_widths=config.get('train.head_widths'),
      seed=config.stage_seed('train'))
  model, accuracy = training.train(model, train_shapes, config.train,
                                   test_shapes or None)
  model_path = config.get('run.model')
  if os.path.dirname(model_path):
    os.makedirs(os.path.dirname(model_path), exist_ok=True)
  weights.serialize_model(model, model_path)
  if config.get('run.output_dir'):
    output_dir = _prepare_output(config)
    _write_json(os.path.join(output_dir, 'accuracy.json'), accuracy.to_dict())

  print('Model written to', termcolor.colored(model_path, color='blue'),
        f'({humanize.naturalsize(os.path.getsize(model_path))})')
  print(f'Train accuracy {_percent(accuracy.train_accuracy)}, test accuracy '
        f'{_percent(accuracy.test_accuracy)} after '
        f'{_duration(accuracy.elapsed_seconds)}')


def _print_attack_summary(fooled: int, total: int,
                          metrics: report.MetricReport, output_dir: str,
                          elapsed: float) -> None:
  color = 'green' if fooled == total else 'yellow'
  print('Fooled',
        termcolor.colored(f'{fooled}/{total}', color=color),
        f'shapes in {_duration(elapsed)}')
  curvature = metrics.curvature_distortion
  print('Mean L2 displacement', f'{metrics.l2_displacement:.4g},',
        'curvature distortion',
        'n/a' if curvature is None else f'{curvature:.4g}')
  print('Result bundle:', termcolor.colored(output_dir, color='blue'))


def _attack(config: config_lib.RunConfig) -> None:
  model = _load_model(config)
  manifest = manifest_lib.read_manifest(config.get('run.manifest'))
  shapes = _attack_shapes(config, manifest, model)
  result = engine.run_universal_attack(shapes, model, config.attack,
                                       _cache(config))
  output_dir = _prepare_output(config)
  bundles.write_attack_bundle(output_dir, [result], model.class_names,
                              'universal')
  _print_attack_summary(result.fooled_count, len(result.outcomes),
                        result.metrics, output_dir, result.elapsed_seconds)


def _attack_pershape(config: config_lib.RunConfig) -> None:
  model = _load_model(config)
  manifest = manifest_lib.read_manifest(config.get('run.manifest'))
  shapes = _attack_shapes(config, manifest, model)
  attack_results = engine.run_pershape_attack(shapes, model, config.attack,
                                              _cache(config))
  output_dir = _prepare_output(config)
  bundles.write_attack_bundle(output_dir, attack_results, model.class_names,
                              'pershape')
  metrics = report.MetricReport(
      shapes=[row for r in attack_results for row in r.metrics.shapes])
  _print_attack_summary(
      sum(r.fooled_count for r in attack_results), len(attack_results),
      metrics, output_dir, sum(r.elapsed_seconds for r in attack_results))


def _transfer(shapes: Sequence[surfaces.Surface], rho: np.ndarray,
              model: pointnet.ClassifierModel, synthesis_config,
              config: config_lib.RunConfig):
  result = generalization.generalize(shapes, rho, model, synthesis_config,
                                     _cache(config))
  metrics = report.evaluate_attack(
      [r.original for r in result.results],
      [r.deformed for r in result.results],
      model,
      alignment_errors=[r.alignment_error for r in result.results],
      workers=config.workers)
  return result, metrics


def _generalize(config: config_lib.RunConfig) -> None:
  model = _load_model(config)
  manifest = manifest_lib.read_manifest(config.get('run.manifest'))
  bundle = bundles.read_bundle(config.get('run.bundle'))
  rho = bundle.universal_rho
  synthesis_config = config.synthesis(
      k=len(rho), b=bundle.attack_config.get('b'))
  shapes = _held_out_shapes(config, manifest, [s.id for s in bundle.shapes])
  result, metrics = _transfer(shapes, rho, model, synthesis_config, config)
  output_dir = _prepare_output(config)
  bundles.write_generalization_bundle(output_dir, result, metrics,
                                      model.class_names, synthesis_config)

  drops = [
      r.initial_alignment_error / max(r.alignment_error, 1e-300)
      for r in result.results
  ]
  print('Fooled',
        termcolor.colored(f'{result.fooled_count}/{len(result.results)}',
                          color='green' if result.fooled_count else 'yellow'),
        'unseen shapes')
  print(f'Median alignment error reduction {np.median(drops):.3g}x')
  print('Result bundle:', termcolor.colored(output_dir, color='blue'))


def _evaluate(config: config_lib.RunConfig) -> None:
  model = _load_model(config)
  manifest = manifest_lib.read_manifest(config.get('run.manifest'))
  bundle = bundles.read_bundle(config.get('run.bundle'))
  records = bundle.shapes
  entries = {e.id: e for e in manifest.select(ids=[s.id for s in records])}
  originals = _load_shapes(config, manifest, [entries[s.id] for s in records])
  perturbed = [bundle.load_shape(s) for s in records]
  metrics = report.evaluate_attack(
      originals,
      perturbed,
      model,
      alignment_errors=[s.alignment_error for s in records],
      workers=config.workers)
  recorded = {row.id: row for row in bundle.metrics.shapes}
  changed = [
      row.id for row in metrics.shapes
      if row.final_label != recorded[row.id].final_label
  ]
  if changed:
    logging.warning('Predictions differ from the bundle for %d shapes: %s',
                    len(changed), changed)
  output_dir = _prepare_output(config)
  _write_json(os.path.join(output_dir, 'metrics.json'), metrics.to_dict())
  print('Success rate', termcolor.colored(_percent(metrics.success_rate),
                                          color='blue'),
        f'over {metrics.count} shapes')


def _export(config: config_lib.RunConfig) -> None:
  output_dir = _prepare_output(config)
  written = export.export_report(
      config.get('run.bundle'), config.get('run.format'), output_dir)
  for path in written:
    print('Wrote', termcolor.colored(path, color='blue'),
          f'({humanize.naturalsize(os.path.getsize(path))})')


def _mean(values: Sequence[Optional[float]]) -> Optional[float]:
  present = [v for v in values if v is not None]
  return float(np.mean(present)) if present else None


def _sweep(config: config_lib.RunConfig) -> None:
  model = _load_model(config)
  manifest = manifest_lib.read_manifest(config.get('run.manifest'))
  sweep = config.sweep
  shapes = _attack_shapes(config, manifest, model)
  held_out = []
  if sweep.generalize:
    held_out = _held_out_shapes(config, manifest, [s.id for s in shapes])
  output_dir = _prepare_output(config)
  cache = _cache(config)

  rows = []
  for b, k in sweep.settings:
    name = f'b{b}_k{k}'
    attack_config = attr.evolve(
        config.attack,
        b=b,
        k=k,
        eigen_count=None,
        seed=seeds.derive(config.seed, 'sweep', name))
    logging.info('Sweep setting %s', name)
    result = engine.run_universal_attack(shapes, model, attack_config, cache)
    bundles.write_attack_bundle(
        os.path.join(output_dir, name), [result], model.class_names)
    generalization_rate = generalization_error = None
    if held_out:
      transferred, _ = _transfer(held_out, result.perturbation.rho, model,
                                 config.synthesis(k=k, b=b), config)
      generalization_rate = transferred.success_rate
      generalization_error = _mean(
          [r.alignment_error for r in transferred.results])
    rows.append((b, k, result.success_rate, result.metrics.curvature_distortion,
                 result.metrics.l2_displacement,
                 _mean([o.alignment_error for o in result.outcomes]),
                 generalization_rate, generalization_error))
    print(f'b={b} k={k}:', termcolor.colored(
        _percent(result.success_rate), color='blue'))

  path = os.path.join(output_dir, 'sweep.csv')
  _write_csv(path, SWEEP_COLUMNS,
             [['' if v is None else v for v in row] for row in rows])
  print('Sweep table:', termcolor.colored(path, color='blue'))


def _describe(config: config_lib.RunConfig) -> None:
  shape = mesh_io.load_surface(config.get('run.shape'))
  if config.get('run.normalize_area') and shape.is_mesh:
    shape = surfaces.normalize_area(shape)
  k = config.get('attack.k')
  pair = laplacians.laplacian(shape, config.get('attack.neighbors'),
                              config.get('attack.bandwidth'))
  sigma = eigensolver.spectrum(eigensolver.eigendecompose(pair, k), k).values
  print(termcolor.colored(repr(shape), color='blue'))
  for index, value in enumerate(sigma, start=1):
    print(f'{index:4d} {value:.10g}')
  if config.get('run.output_dir'):
    output_dir = _prepare_output(config)
    _write_csv(
        os.path.join(output_dir, 'spectrum.csv'), ('index', 'eigenvalue'),
        [(i, repr(float(v))) for i, v in enumerate(sigma, 1)])


_COMMANDS: Dict[str, Callable[[config_lib.RunConfig], None]] = (
    immutabledict.immutabledict({
        'gen-corpus': _gen_corpus,
        'train': _train,
        'attack': _attack,
        'attack-pershape': _attack_pershape,
        'generalize': _generalize,
        'evaluate': _evaluate,
        'export': _export,
        'sweep': _sweep,
        'describe': _describe,
    }))


def run_command(config: config_lib.RunConfig) -> int:
  """Runs the configured command and maps library failures to exit codes.

  Returns:
    0 on success; 2 configuration, 3 input, 4 numerical and 5 precondition
    failures, 1 for anything else.
  """
  try:
    _COMMANDS[config.command](config)
  except errors.Error as e:
    code = exit_code(e)
    logging.error('%s failed (%s): %s', config.command, type(e).__name__, e)
    print(termcolor.colored(f'{config.command} failed: {e}', color='red'))
    return code
  except Exception as e:  # pylint: disable=broad-except
    logging.exception('%s failed unexpectedly', config.command)
    print(termcolor.colored(f'{config.command} failed: {e!r}', color='red'))
    return EXIT_UNKNOWN
  return EXIT_OK
