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
"""Tests for univspec.classifier.weights."""

import os
import struct

from absl.testing import absltest

import numpy as np

from univspec.classifier import pointnet
from univspec.classifier import weights
from univspec.common import errors
from univspec.common import testing


class WeightsTest(absltest.TestCase):

  def setUp(self):
    super().setUp()
    self.model = testing.tiny_classifier(('cat', 'dog', 'horse'), seed=5)
    self.path = os.path.join(self.create_tempdir().full_path, 'model.bin')
    weights.serialize_model(self.model, self.path)

  def _read(self):
    with open(self.path, 'rb') as f:
      return f.read()

  def _write(self, data):
    with open(self.path, 'wb') as f:
      f.write(data)

  def test_reload_is_bit_exact(self):
    loaded = weights.deserialize_model(self.path)
    self.assertEqual(loaded.class_names, ['cat', 'dog', 'horse'])
    self.assertEqual(loaded.point_mlp_widths, self.model.point_mlp_widths)
    self.assertEqual(loaded.head_widths, self.model.head_widths)
    points = np.random.default_rng(0).normal(size=(50, 3))
    np.testing.assert_array_equal(
        pointnet.forward(loaded, points), pointnet.forward(self.model, points))

  def test_same_model_same_bytes(self):
    other = os.path.join(self.create_tempdir().full_path, 'again.bin')
    weights.serialize_model(self.model, other)
    with open(other, 'rb') as f:
      self.assertEqual(f.read(), self._read())

  def test_truncated(self):
    self._write(self._read()[:-100])
    with self.assertRaises(weights.ModelFormatError):
      weights.deserialize_model(self.path)

  def test_very_short_file(self):
    self._write(b'UNIV')
    with self.assertRaisesRegex(weights.ModelFormatError, 'truncated'):
      weights.deserialize_model(self.path)

  def test_corrupted_byte(self):
    data = bytearray(self._read())
    data[len(data) // 2] ^= 0xFF
    self._write(bytes(data))
    with self.assertRaisesRegex(weights.ModelFormatError, 'Checksum'):
      weights.deserialize_model(self.path)

  def test_foreign_file(self):
    self._write(b'NOTAMODEL' * 10)
    with self.assertRaisesRegex(weights.ModelFormatError, 'not a univspec'):
      weights.deserialize_model(self.path)

  def test_version_mismatch(self):
    data = self._read()
    prefix = struct.pack('<8sII', weights.MAGIC, weights.FORMAT_VERSION + 1,
                         struct.unpack_from('<8sII', data)[2])
    self._write(prefix + data[len(prefix):])
    with self.assertRaisesRegex(weights.ModelFormatError, 'format version'):
      weights.deserialize_model(self.path)

  def test_missing_file(self):
    with self.assertRaises(errors.InputError):
      weights.deserialize_model(self.path + '.missing')


if __name__ == '__main__':
  absltest.main()
