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

from typing import Tuple

import numpy as np

from fedsentinel.exceptions import ValidationError

from .dataset import Dataset

CLUSTER_SPREAD = 2.0


def make_synthetic(n_samples: int, n_features: int, C: int, seed: int) -> Dataset:
    """Gaussian class-conditional clusters, standardized per feature.

    Every class gets a mean drawn from N(0, CLUSTER_SPREAD^2 I) and unit-variance samples around it.
    Labels are balanced (round-robin) before being shuffled, so all C classes appear whenever
    ``n_samples >= C``. Each feature is then shifted to zero mean and scaled to unit variance; a
    constant feature becomes all zeros.
    """
    if n_samples <= 0 or n_features <= 0 or C <= 0:
        raise ValidationError(f"All arguments must be positive, got ({n_samples}, {n_features}, {C})")
    rng = np.random.default_rng(seed)
    means = rng.normal(0.0, CLUSTER_SPREAD, size=(C, n_features))
    labels = rng.permutation(np.arange(n_samples) % C)
    features = means[labels] + rng.normal(0.0, 1.0, size=(n_samples, n_features))

    features = features - features.mean(axis=0)
    scale = features.std(axis=0)
    features = np.divide(features, scale, out=np.zeros_like(features), where=scale > 0)
    return Dataset(features, labels, C)


def train_test_split(ds: Dataset, fraction: float, seed: int) -> Tuple[Dataset, Dataset]:
    """Holds out ``fraction`` of the samples (at least one, never all) as a test set."""
    if not 0.0 < fraction < 1.0:
        raise ValidationError(f"Test fraction must lie in (0, 1), got {fraction}")
    if len(ds) < 2:
        raise ValidationError("Need at least 2 samples to split")
    order = np.random.default_rng(seed).permutation(len(ds))
    num_test = min(max(int(round(fraction * len(ds))), 1), len(ds) - 1)
    return ds.subset(np.sort(order[num_test:])), ds.subset(np.sort(order[:num_test]))
