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
"""Corpus manifests: one JSON record per shape file."""

import enum
import json
import os
from typing import List, Optional

import attr

from univspec.common import errors
from univspec.geometry import mesh_io
from univspec.geometry import surfaces

MANIFEST_NAME = 'manifest.json'


class Split(enum.Enum):
  TRAIN = 'train'
  TEST = 'test'


@attr.s(auto_attribs=True, frozen=True)
class ManifestEntry:
  """A shape file, relative to the manifest directory."""

  path: str
  id: str
  label: int
  split: Split = attr.ib(converter=Split)
  seed: int = 0

  def to_dict(self):
    return {
        'path': self.path,
        'id': self.id,
        'label': self.label,
        'split': self.split.value,
        'seed': self.seed,
    }


@attr.s(auto_attribs=True, frozen=True)
class Manifest:
  """All shapes of a corpus and the names of its classes.

  Attributes:
    entries: Shape records in generation order.
    class_names: Class index -> name.
    root: Directory that entry paths are relative to.
  """

  entries: List[ManifestEntry] = attr.ib(converter=list)
  class_names: List[str] = attr.ib(converter=list)
  root: str = '.'

  def select(self,
             split: Optional[Split] = None,
             ids: Optional[List[str]] = None) -> List[ManifestEntry]:
    """Entries of one split and/or with the given ids (in manifest order)."""
    chosen = self.entries
    if split is not None:
      chosen = [e for e in chosen if e.split == Split(split)]
    if ids is not None:
      known = {e.id for e in chosen}
      missing = [i for i in ids if i not in known]
      if missing:
        raise errors.InputError(f'Unknown shape ids {missing!r}')
      wanted = set(ids)
      chosen = [e for e in chosen if e.id in wanted]
    return chosen

  def load(self, entries: List[ManifestEntry]) -> List[surfaces.Surface]:
    """Reads the shape files of `entries`, labelled and with manifest ids."""
    return [
        mesh_io.load_surface(
            os.path.join(self.root, e.path), surface_id=e.id, label=e.label)
        for e in entries
    ]

  def to_dict(self):
    return {
        'class_names': self.class_names,
        'shapes': [e.to_dict() for e in self.entries],
    }


def write_manifest(manifest: Manifest, directory: str) -> str:
  path = os.path.join(directory, MANIFEST_NAME)
  try:
    with open(path, 'w', encoding='utf-8') as f:
      json.dump(manifest.to_dict(), f, indent=2, sort_keys=True)
      f.write('\n')
  except OSError as e:
    raise errors.InputError(f'Unable to write manifest {path!r}: {e}') from e
  return path


def read_manifest(path: str) -> Manifest:
  """Reads a manifest file (or the manifest of a corpus directory)."""
  if os.path.isdir(path):
    path = os.path.join(path, MANIFEST_NAME)
  try:
    with open(path, 'r', encoding='utf-8') as f:
      content = json.load(f)
    entries = [ManifestEntry(**record) for record in content['shapes']]
    class_names = content['class_names']
  except OSError as e:
    raise errors.InputError(f'Unable to read manifest {path!r}: {e}') from e
  except (KeyError, TypeError, ValueError) as e:
    raise errors.InputError(f'Malformed manifest {path!r}: {e}') from e
  return Manifest(
      entries=entries,
      class_names=class_names,
      root=os.path.dirname(os.path.abspath(path)))
