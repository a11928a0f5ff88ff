# Copyright 2026 fedsentinel contributors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#     http://www.apache.org/licenses/LICENSE-2.0
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""
.. autosummary::
    :toctree: _autosummary

    ModelSpec
    ParamVector
    TrainConfig
    forward
    per_sample_loss
    train_local
    evaluate
"""

from .engine import dataset_losses, evaluate, forward, gradient, init_params, per_sample_loss, predict, train_local
from .model_spec import ModelSpec, ParamVector, TrainConfig
