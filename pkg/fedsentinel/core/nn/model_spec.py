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

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from fedsentinel.exceptions import ConfigurationError, ShapeError, ValidationError

ACTIVATIONS = ["relu"]


@dataclass(frozen=True)
class ModelSpec:
    """Layer layout of a fully connected classifier.

    Hidden layers use ReLU and the output layer is a softmax over ``layer_sizes[-1]`` classes.
    Parameters are flattened layer by layer as ``W`` (fan_in x fan_out, row-major) followed by ``b``.
    """

    layer_sizes: Tuple[int, ...]
    activation: str = "relu"

    def __post_init__(self):
        sizes = tuple(int(s) for s in self.layer_sizes)
        object.__setattr__(self, "layer_sizes", sizes)
        if len(sizes) < 2:
            raise ConfigurationError(f"A model needs at least 2 layers, got {list(sizes)}")
        if any(s <= 0 for s in sizes):
            raise ConfigurationError(f"Layer sizes must be positive integers, got {list(sizes)}")
        if sizes[-1] < 2:
            raise ConfigurationError(f"The output layer must have at least 2 classes, got {sizes[-1]}")
        if self.activation not in ACTIVATIONS:
            raise ConfigurationError(f"Unknown activation '{self.activation}'. It should be one of {ACTIVATIONS}")

    @property
    def num_features(self) -> int:
        return self.layer_sizes[0]

    @property
    def num_classes(self) -> int:
        return self.layer_sizes[-1]

    @property
    def layer_shapes(self) -> List[Tuple[int, int]]:
        """(fan_in, fan_out) of every dense layer."""
        return list(zip(self.layer_sizes[:-1], self.layer_sizes[1:]))

    @property
    def num_params(self) -> int:
        return sum(fan_in * fan_out + fan_out for fan_in, fan_out in self.layer_shapes)

    def unflatten(self, values: np.ndarray) -> List[Tuple[np.ndarray, np.ndarray]]:
        """Splits a flat parameter array into (W, b) views, one pair per dense layer."""
        layers = []
        offset = 0
        for fan_in, fan_out in self.layer_shapes:
            weight = values[offset : offset + fan_in * fan_out].reshape(fan_in, fan_out)
            offset += fan_in * fan_out
            layers.append((weight, values[offset : offset + fan_out]))
            offset += fan_out
        return layers

    @classmethod
    def from_dims(cls, num_features: int, hidden_layers: Iterable[int], num_classes: int) -> "ModelSpec":
        return cls(tuple([num_features, *hidden_layers, num_classes]))


class ParamVector:
    """Flattened parameters of one model (a client's local model or the global model).

    The values are stored as a read-only float64 array. ``spec`` may be None for a free-standing vector
    that is not bound to a model layout (aggregation and attacks only need the flat values).
    """

    __slots__ = ("_values", "_spec")

    def __init__(self, values: Union[Sequence[float], np.ndarray], spec: Optional[ModelSpec] = None):
        array = np.array(values, dtype=np.float64).reshape(-1)
        if spec is not None and array.size != spec.num_params:
            raise ShapeError(
                f"Expected {spec.num_params} parameters for layers {list(spec.layer_sizes)}, got {array.size}"
            )
        if not np.all(np.isfinite(array)):
            raise ValidationError("Parameter vector contains non-finite values")
        array.setflags(write=False)
        self._values = array
        self._spec = spec

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def spec(self) -> Optional[ModelSpec]:
        return self._spec

    def __len__(self) -> int:
        return int(self._values.size)

    def replace(self, values: Union[Sequence[float], np.ndarray]) -> "ParamVector":
        """Returns a vector with new values bound to the same spec."""
        return ParamVector(values, self._spec)

    def layers(self) -> List[Tuple[np.ndarray, np.ndarray]]:
        """Returns read-only (W, b) views for every dense layer."""
        if self._spec is None:
            raise ShapeError("The parameter vector is not bound to a ModelSpec")
        return self._spec.unflatten(self._values)

    def __repr__(self):
        layout = list(self._spec.layer_sizes) if self._spec is not None else None
        return f"ParamVector(size={len(self)}, spec={layout})"


@dataclass(frozen=True)
class TrainConfig:
    """Local SGD hyperparameters. The learning rate is constant."""

    epochs: int = 20
    batch_size: int = 16
    learning_rate: float = 0.01
    weight_decay: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ConfigurationError(f"epochs must be positive, got {self.epochs}")
        if self.batch_size < 1:
            raise ConfigurationError(f"batch_size must be positive, got {self.batch_size}")
        if not self.learning_rate >= 0:
            raise ConfigurationError(f"learning_rate must be nonnegative, got {self.learning_rate}")
        if not self.weight_decay >= 0:
            raise ConfigurationError(f"weight_decay must be nonnegative, got {self.weight_decay}")
        if self.seed < 0:
            raise ConfigurationError(f"seed must be unsigned, got {self.seed}")
