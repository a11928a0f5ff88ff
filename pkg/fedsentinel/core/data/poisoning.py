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

import numpy as np

from fedsentinel.exceptions import UnknownTypeError, ValidationError

from .dataset import Dataset

LABEL_SHUFFLE_MODES = ["permute", "uniform"]


def shuffle_labels(ds: Dataset, seed: int) -> Dataset:
    """Label-shuffle data poisoning: a uniform random permutation of the existing labels.

    Features are untouched and the label multiset (class priors) is preserved.
    """
    if len(ds) == 0:
        raise ValidationError("Cannot shuffle the labels of an empty dataset")
    rng = np.random.default_rng(seed)
    return ds.with_labels(rng.permutation(ds.labels))


def randomize_labels(ds: Dataset, seed: int) -> Dataset:
    """Replaces every label with one drawn i.i.d. uniformly from [0, C)."""
    if len(ds) == 0:
        raise ValidationError("Cannot randomize the labels of an empty dataset")
    rng = np.random.default_rng(seed)
    return ds.with_labels(rng.integers(0, ds.num_classes, size=len(ds)))


def poison_labels(ds: Dataset, seed: int, mode: str = "permute") -> Dataset:
    if mode == "permute":
        return shuffle_labels(ds, seed)
    elif mode == "uniform":
        return randomize_labels(ds, seed)
    else:
        raise UnknownTypeError(f"Unknown label shuffle mode: {mode}. It should be one of {LABEL_SHUFFLE_MODES}")
