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
"""Plot-ready tables from a result bundle.

CSV export writes three files:

  shapes.csv   group, id, original_label, final_label, fooled,
               curvature_distortion, l2_displacement, alignment_error
  spectra.csv  group, id, index, sigma_original, sigma_target, sigma_deformed
  rho.csv      group, index, rho

Missing values (curvature of point clouds) are empty cells. JSON export
writes the same content to report.json; `read_report` parses it back.
"""

import csv
import json
import os
from typing import Any, Dict, List

from univspec.cli import bundles
from univspec.common import errors

SHAPE_COLUMNS = ('group', 'id', 'original_label', 'final_label', 'fooled',
                 'curvature_distortion', 'l2_displacement', 'alignment_error')
SPECTRUM_COLUMNS = ('group', 'id', 'index', 'sigma_original', 'sigma_target',
                    'sigma_deformed')
RHO_COLUMNS = ('group', 'index', 'rho')

REPORT_NAME = 'report.json'
FORMATS = ('csv', 'json')


def _cell(value: Any) -> str:
  if value is None:
    return ''
  if isinstance(value, bool):
    return 'true' if value else 'false'
  if isinstance(value, float):
    return repr(value)
  return str(value)


def build_report(bundle: bundles.Bundle) -> Dict[str, Any]:
  """Tabular content of a bundle as plain values."""
  metrics = {row.id: row for row in bundle.metrics.shapes}
  groups = []
  for group in bundle.groups:
    shapes = []
    for shape in group.shapes:
      row = metrics[shape.id]
      shapes.append({
          'id': shape.id,
          'original_label': row.original_label,
          'final_label': row.final_label,
          'fooled': row.fooled,
          'curvature_distortion': row.curvature_distortion,
          'l2_displacement': row.l2_displacement,
          'alignment_error': shape.alignment_error,
          'sigma_original': [float(v) for v in shape.sigma_original],
          'sigma_target': [float(v) for v in shape.sigma_target],
          'sigma_deformed': [float(v) for v in shape.sigma_deformed],
      })
    groups.append({
        'name': group.name,
        'rho': [float(v) for v in group.rho],
        'shapes': shapes,
    })
  return {
      'mode': bundle.mode,
      'class_names': list(bundle.class_names),
      'success_rate': bundle.metrics.success_rate,
      'curvature_distortion': bundle.metrics.curvature_distortion,
      'l2_displacement': bundle.metrics.l2_displacement,
      'groups': groups,
  }


def _write_csv(path: str, columns, rows) -> None:
  with open(path, 'w', encoding='utf-8', newline='') as f:
    writer = csv.writer(f, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
      writer.writerow([_cell(value) for value in row])


def _csv_files(content: Dict[str, Any], output_dir: str) -> List[str]:
  shape_rows, spectrum_rows, rho_rows = [], [], []
  for group in content['groups']:
    name = group['name']
    rho_rows.extend((name, i, v) for i, v in enumerate(group['rho']))
    for shape in group['shapes']:
      shape_rows.append([name] + [shape[c] for c in SHAPE_COLUMNS[1:]])
      spectrum_rows.extend(
          (name, shape['id'], i, original, target, deformed)
          for i, (original, target, deformed) in enumerate(
              zip(shape['sigma_original'], shape['sigma_target'],
                  shape['sigma_deformed'])))
  written = []
  for filename, columns, rows in (('shapes.csv', SHAPE_COLUMNS, shape_rows),
                                  ('spectra.csv', SPECTRUM_COLUMNS,
                                   spectrum_rows),
                                  ('rho.csv', RHO_COLUMNS, rho_rows)):
    path = os.path.join(output_dir, filename)
    _write_csv(path, columns, rows)
    written.append(path)
  return written


def export_report(bundle_dir: str, fmt: str, output_dir: str) -> List[str]:
  """Writes the tables of the bundle in `bundle_dir`.

  Args:
    bundle_dir: A directory written by `bundles.write_*_bundle`.
    fmt: 'csv' or 'json'.
    output_dir: Destination, created if needed.

  Returns:
    Paths of the written files.

  Raises:
    BundleError: If the bundle can not be parsed.
    ValueError: On an unknown format.
  """
  if fmt not in FORMATS:
    raise ValueError(f'Unknown export format {fmt!r}; expected one of '
                     f'{list(FORMATS)!r}')
  content = build_report(bundles.read_bundle(bundle_dir))
  try:
    os.makedirs(output_dir, exist_ok=True)
    if fmt == 'csv':
      return _csv_files(content, output_dir)
    path = os.path.join(output_dir, REPORT_NAME)
    with open(path, 'w', encoding='utf-8') as f:
      json.dump(content, f, indent=1, sort_keys=True)
      f.write('\n')
    return [path]
  except OSError as e:
    raise errors.InputError(
        f'Unable to write the report to {output_dir!r}: {e}') from e


def read_report(path: str) -> Dict[str, Any]:
  """Parses a report.json written by `export_report`."""
  try:
    with open(path, 'r', encoding='utf-8') as f:
      return json.load(f)
  except OSError as e:
    raise errors.InputError(f'Unable to read report {path!r}: {e}') from e
  except ValueError as e:
    raise bundles.BundleError(f'Report {path!r} is not valid JSON: {e}') from e
