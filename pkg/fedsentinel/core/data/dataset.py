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

from typing import Sequence, Union

import numpy as np

from fedsentinel.exceptions import ShapeError, ValidationError


class Dataset:
    """Labelled feature matrix with features scaled to [0, 1].

    Writable input arrays are copied and every array is marked read-only, so a dataset can be shared between
    client training tasks without copying.
    """

    __slots__ = ("_features", "_labels", "_num_classes")

    def __init__(self, features: np.ndarray, labels: Union[Sequence[int], np.ndarray], num_classes: int):
        features = np.asarray(features)
        if features.dtype.kind != "f":
            features = features.astype(np.float64)
        elif features.flags.writeable:
            features = features.copy()
        if features.ndim != 2:
            raise ShapeError(f"Features must be a 2-D matrix, got shape {features.shape}")
        labels = np.array(labels, dtype=np.int64).reshape(-1)
        if features.shape[0] != labels.size:
            raise ShapeError(f"{features.shape[0]} feature rows but {labels.size} labels")
        if num_classes < 1:
            raise ValidationError(f"num_classes must be positive, got {num_classes}")
        if labels.size and (labels.min() < 0 or labels.max() >= num_classes):
            raise ValidationError(f"Labels must lie in [0, {num_classes}), got [{labels.min()}, {labels.max()}]")
        features.setflags(write=False)
        labels.setflags(write=False)
        self._features = features
        self._labels = labels
        self._num_classes = int(num_classes)

    @property
    def features(self) -> np.ndarray:
        return self._features

    @property
    def labels(self) -> np.ndarray:
        return self._labels

    @property
    def num_classes(self) -> int:
        return self._num_classes

    @property
    def num_features(self) -> int:
        return int(self._features.shape[1])

    def __len__(self) -> int:
        return int(self._labels.size)

    def subset(self, indices: Union[Sequence[int], np.ndarray]) -> "Dataset":
        indices = np.asarray(indices, dtype=np.int64)
        return Dataset(self._features[indices], self._labels[indices], self._num_classes)

    def with_labels(self, labels: Union[Sequence[int], np.ndarray]) -> "Dataset":
        """Returns a dataset sharing these features with replaced labels."""
        return Dataset(self._features, labels, self._num_classes)

    def class_histogram(self) -> np.ndarray:
        return np.bincount(self._labels, minlength=self._num_classes)

    def __repr__(self):
        return f"Dataset(samples={len(self)}, features={self.num_features}, classes={self._num_classes})"
