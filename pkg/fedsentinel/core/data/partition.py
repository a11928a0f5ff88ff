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

import logging
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from fedsentinel.exceptions import ConfigurationError

from .dataset import Dataset

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PartitionConfig:
    """Dirichlet non-IID split of a dataset across ``n_clients``.

    Smaller ``alpha`` gives more heterogeneous clients.
    """

    n_clients: int = 10
    alpha: float = 0.5
    seed: int = 0
    min_samples_per_client: int = 32

    def __post_init__(self):
        if self.n_clients < 2:
            raise ConfigurationError(f"n_clients must be at least 2, got {self.n_clients}")
        if not self.alpha > 0:
            raise ConfigurationError(f"alpha must be positive, got {self.alpha}")
        if self.min_samples_per_client < 1:
            raise ConfigurationError(f"min_samples_per_client must be positive, got {self.min_samples_per_client}")


def partition_dirichlet(ds: Dataset, cfg: PartitionConfig) -> List[List[int]]:
    """Splits sample indices across clients class by class.

    For every class, the class's (shuffled) samples are cut into ``n_clients`` consecutive chunks whose
    sizes follow proportions drawn from Dirichlet(alpha). Clients left below ``min_samples_per_client``
    then receive samples taken one at a time from the currently largest client.

    Returns:
        One ascending index list per client. The lists are disjoint and cover ``range(len(ds))``.
    """
    n = cfg.n_clients
    if len(ds) < n * cfg.min_samples_per_client:
        raise ConfigurationError(
            f"{len(ds)} samples cannot give {n} clients at least {cfg.min_samples_per_client} samples each"
        )

    rng = np.random.default_rng(cfg.seed)
    buckets: List[List[int]] = [[] for _ in range(n)]
    for k in range(ds.num_classes):
        class_indices = np.flatnonzero(ds.labels == k)
        if class_indices.size == 0:
            continue
        class_indices = rng.permutation(class_indices)
        proportions = rng.dirichlet(np.full(n, cfg.alpha))
        cuts = (np.cumsum(proportions)[:-1] * class_indices.size).astype(np.int64)
        for client, chunk in enumerate(np.split(class_indices, cuts)):
            buckets[client].extend(int(i) for i in chunk)

    moved = 0
    for client in range(n):
        while len(buckets[client]) < cfg.min_samples_per_client:
            donor = max(range(n), key=lambda c: (len(buckets[c]), -c))
            buckets[client].append(buckets[donor].pop())
            moved += 1
    if moved:
        logger.debug("Moved %d samples to satisfy min_samples_per_client=%d", moved, cfg.min_samples_per_client)

    return [sorted(bucket) for bucket in buckets]


def heterogeneity(ds: Dataset, partitions: Sequence[Sequence[int]]) -> float:
    """Mean total-variation distance between each client's class distribution and the global one."""
    global_dist = ds.class_histogram() / max(len(ds), 1)
    distances = []
    for indices in partitions:
        if len(indices) == 0:
            continue
        hist = np.bincount(ds.labels[np.asarray(indices, dtype=np.int64)], minlength=ds.num_classes)
        distances.append(0.5 * np.abs(hist / hist.sum() - global_dist).sum())
    return float(np.mean(distances)) if distances else 0.0
