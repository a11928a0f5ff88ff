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

    Dataset
    PartitionConfig
    load_idx
    make_synthetic
    partition_dirichlet
    shuffle_labels
"""

from .dataset import Dataset
from .idx import load_idx, write_idx
from .partition import PartitionConfig, heterogeneity, partition_dirichlet
from .poisoning import LABEL_SHUFFLE_MODES, poison_labels, randomize_labels, shuffle_labels
from .sources import load_source, parse_source
from .synthetic import make_synthetic, train_test_split
