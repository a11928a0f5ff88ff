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
"""Simulation configuration, named profiles and environment defaults."""

import math
import os
from dataclasses import dataclass, field, fields, is_dataclass, replace
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from fedsentinel.exceptions import ConfigurationError, FedSentinelError

from .aggregation import AggregatorFactory
from .aggregation.trimmed_mean import DEFAULT_TRIM_BETA, trim_count
from .attacks import AttackConfig, AttackKind, Knowledge
from .confidence import ConfidenceConfig
from .data import LABEL_SHUFFLE_MODES, PartitionConfig, parse_source
from .data.sources import parse_synthetic_args
from .detection import DEFAULT_GAP_THRESHOLD
from .executors import ExecutorFactory
from .nn import ModelSpec, TrainConfig

DEFAULT_DATA = "synthetic:4000,32,10"
MNIST_HIDDEN_LAYERS = (512,)
SYNTHETIC_HIDDEN_LAYERS = (32,)
# minimum confidence-unit distance between the two centroids before a client is flagged
RAW_GAP_THRESHOLD = 0.5


@dataclass(frozen=True)
class SimulationConfig:
    """Everything that determines a run. Two runs with equal configs produce identical output.

    ``partition.n_clients`` always follows ``n_clients``. ``model`` may be left None; the simulator then
    builds it from ``hidden_layers`` (or the per-source default) and the data dimensions.
    """

    n_clients: int = 10
    malicious_fraction: float = 0.0
    rounds: int = 30
    attack: AttackConfig = field(default_factory=AttackConfig)
    defense: str = AggregatorFactory.DEFAULT
    partition: PartitionConfig = field(default_factory=PartitionConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    model: Optional[ModelSpec] = None
    confidence: ConfidenceConfig = field(default_factory=ConfidenceConfig)
    eval_every: int = 1
    seed: int = 0
    data: str = DEFAULT_DATA
    hidden_layers: Optional[Tuple[int, ...]] = None
    test_fraction: float = 0.2
    gap_threshold: float = DEFAULT_GAP_THRESHOLD
    raw_gap_threshold: float = RAW_GAP_THRESHOLD
    trim_beta: float = DEFAULT_TRIM_BETA
    reweight: bool = True
    single_length_weighting: bool = False
    label_shuffle_mode: str = "permute"
    executor: str = ExecutorFactory.DEFAULT
    max_workers: Optional[int] = None
    dump_weights: bool = False

    def __post_init__(self):
        if self.partition.n_clients != self.n_clients:
            object.__setattr__(self, "partition", replace(self.partition, n_clients=self.n_clients))
        if self.hidden_layers is not None:
            object.__setattr__(self, "hidden_layers", tuple(int(size) for size in self.hidden_layers))

    @property
    def malicious_count(self) -> int:
        """n_clients * malicious_fraction rounded half up (25% of 50 clients is 13)."""
        return int(math.floor(self.n_clients * self.malicious_fraction + 0.5))

    @property
    def evaluation_rounds(self) -> Tuple[int, ...]:
        """1-based rounds with a test-set evaluation: every ``eval_every``-th round plus the last one."""
        return tuple(r for r in range(1, self.rounds + 1) if r % self.eval_every == 0 or r == self.rounds)

    def resolved_hidden_layers(self) -> Tuple[int, ...]:
        if self.hidden_layers is not None:
            return self.hidden_layers
        scheme, _ = parse_source(self.data)
        return MNIST_HIDDEN_LAYERS if scheme == "idx" else SYNTHETIC_HIDDEN_LAYERS

    def validate(self):
        """Checks cross-field consistency.

        Raises:
            ConfigurationError: the configuration cannot be run.
        """
        if self.rounds < 1:
            raise ConfigurationError(f"rounds must be at least 1, got {self.rounds}")
        if self.eval_every < 1:
            raise ConfigurationError(f"eval_every must be at least 1, got {self.eval_every}")
        if not 0.0 <= self.malicious_fraction <= 1.0:
            raise ConfigurationError(f"malicious_fraction must lie in [0, 1], got {self.malicious_fraction}")
        if self.seed < 0:
            raise ConfigurationError(f"seed must be unsigned, got {self.seed}")
        if self.defense not in AggregatorFactory.NAMES:
            raise ConfigurationError(f"Unknown defense: {self.defense}. It should be one of {AggregatorFactory.NAMES}")
        if self.executor not in ExecutorFactory.NAMES:
            raise ConfigurationError(f"Unknown executor: {self.executor}. It should be one of {ExecutorFactory.NAMES}")
        if self.label_shuffle_mode not in LABEL_SHUFFLE_MODES:
            raise ConfigurationError(
                f"Unknown label shuffle mode: {self.label_shuffle_mode}. It should be one of {LABEL_SHUFFLE_MODES}"
            )
        if not 0.0 < self.test_fraction < 1.0:
            raise ConfigurationError(f"test_fraction must lie in (0, 1), got {self.test_fraction}")
        if not self.gap_threshold >= 0.0:
            raise ConfigurationError(f"gap_threshold must be nonnegative, got {self.gap_threshold}")
        if not self.raw_gap_threshold >= 0.0:
            raise ConfigurationError(f"raw_gap_threshold must be nonnegative, got {self.raw_gap_threshold}")
        if self.max_workers is not None and self.max_workers < 1:
            raise ConfigurationError(f"max_workers must be positive, got {self.max_workers}")
        if self.hidden_layers is not None and any(size < 1 for size in self.hidden_layers):
            raise ConfigurationError(f"Hidden layer sizes must be positive, got {self.hidden_layers}")
        if self.defense == "trimmean":
            trim_count(self.trim_beta, self.n_clients)
        try:
            scheme, argument = parse_source(self.data)
            if scheme == "synthetic":
                parse_synthetic_args(argument)
        except ConfigurationError:
            raise
        except FedSentinelError as err:
            raise ConfigurationError(str(err)) from err

    def to_dict(self) -> Dict[str, Any]:
        """JSON-compatible form; ``from_dict(to_dict())`` gives back an equal config."""
        return {f.name: _encode(getattr(self, f.name)) for f in fields(self)}

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> "SimulationConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ConfigurationError(f"Unknown configuration keys: {sorted(unknown)}")
        values = dict(values)
        if "attack" in values:
            attack = dict(values["attack"])
            attack["kind"] = AttackKind(attack.get("kind", AttackKind.NONE.value))
            attack["knowledge"] = Knowledge(attack.get("knowledge", Knowledge.FULL.value))
            values["attack"] = AttackConfig(**attack)
        if "partition" in values:
            values["partition"] = PartitionConfig(**values["partition"])
        if "train" in values:
            values["train"] = TrainConfig(**values["train"])
        if "confidence" in values:
            values["confidence"] = ConfidenceConfig(**values["confidence"])
        if values.get("model") is not None:
            model = dict(values["model"])
            values["model"] = ModelSpec(tuple(model["layer_sizes"]), model.get("activation", "relu"))
        if values.get("hidden_layers") is not None:
            values["hidden_layers"] = tuple(values["hidden_layers"])
        try:
            return cls(**values)
        except TypeError as err:
            raise ConfigurationError(f"Malformed configuration: {err}") from err

    @classmethod
    def from_profile(cls, name: str, **overrides: Any) -> "SimulationConfig":
        """Builds a config from a named profile; keyword arguments override profile values."""
        if name not in PROFILES:
            raise ConfigurationError(f"Unknown profile: {name}. It should be one of {list(PROFILES)}")
        return cls(**{**PROFILES[name](), **overrides})


def _encode(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if is_dataclass(value):
        return {f.name: _encode(getattr(value, f.name)) for f in fields(value)}
    if isinstance(value, tuple):
        return [_encode(item) for item in value]
    return value


def _desk_profile() -> Dict[str, Any]:
    return {
        "n_clients": 10,
        "rounds": 30,
        "partition": PartitionConfig(n_clients=10, alpha=0.5),
        "train": TrainConfig(epochs=20, batch_size=16, learning_rate=0.01, weight_decay=1e-3),
    }


def _paper_profile() -> Dict[str, Any]:
    return {
        "n_clients": 50,
        "rounds": 200,
        "partition": PartitionConfig(n_clients=50, alpha=0.5),
        "train": TrainConfig(epochs=20, batch_size=16, learning_rate=0.01, weight_decay=1e-3),
    }


PROFILES = {"desk": _desk_profile, "paper": _paper_profile}
DEFAULT_PROFILE = "desk"


class RuntimeEnv:
    """Environment-provided defaults for values not given on the command line.

    The expected environment variables are the keys in the defaults dictionary,
    and they can be set to override the defaults.
    """

    ENV_DEFAULT: Dict[str, Tuple[str, ...]] = {
        "data": ("FEDSENTINEL_DATA", DEFAULT_DATA),
        "out": ("FEDSENTINEL_OUT", "runs/latest"),
        "executor": ("FEDSENTINEL_EXECUTOR", ExecutorFactory.DEFAULT),
    }

    data: str = ""
    out: str = ""
    executor: str = ""

    def __init__(self, defaults: Optional[Dict[str, Tuple[str, ...]]] = None):
        if defaults is None:
            defaults = self.ENV_DEFAULT
        for key, (env, default) in defaults.items():
            self.__dict__[key] = os.environ.get(env, default)
