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
"""The white-box point-cloud classifier under attack."""

from univspec.classifier.pointnet import build_model
from univspec.classifier.pointnet import ClassifierModel
from univspec.classifier.pointnet import forward
from univspec.classifier.pointnet import input_gradient
from univspec.classifier.pointnet import logit_gap_gradient
from univspec.classifier.pointnet import NonFiniteInputError
from univspec.classifier.pointnet import PointNet
from univspec.classifier.pointnet import predict
from univspec.classifier.pointnet import predict_logits
from univspec.classifier.pointnet import softmax

from univspec.classifier.training import AccuracyReport
from univspec.classifier.training import evaluate_accuracy
from univspec.classifier.training import train
from univspec.classifier.training import TrainConfig
from univspec.classifier.training import TrainingDataError
from univspec.classifier.training import TrainingDivergedError

from univspec.classifier.weights import deserialize_model
from univspec.classifier.weights import ModelFormatError
from univspec.classifier.weights import serialize_model
