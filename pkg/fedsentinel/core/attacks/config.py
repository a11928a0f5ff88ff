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

from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, List

import numpy as np

from fedsentinel.core.nn import ParamVector
from fedsentinel.exceptions import ConfigurationError, UnknownTypeError, ValidationError

DEFAULT_Z = 1.5
DEFAULT_GAMMA_TOL = 1e-5


class AttackKind(Enum):
    NONE = "none"
    LABEL_SHUFFLE = "label_shuffle"
    LIE = "lie"
    MIN_MAX = "min_max"
    MIN_SUM = "min_sum"

    @classmethod
    def parse(cls, name: str) -> "AttackKind":
        """Accepts the enum value or its command-line abbreviation (none, ls, lie, mm, ms)."""
        name = ATTACK_ALIASES.get(name, name)
        try:
            return cls(name)
        except ValueError:
            raise UnknownTypeError(f"Unknown attack: {name}. It should be one of {ATTACK_NAMES}") from None

    @property
    def poisons_model(self) -> bool:
        return self in (AttackKind.LIE, AttackKind.MIN_MAX, AttackKind.MIN_SUM)


ATTACK_ALIASES = {"ls": "label_shuffle", "mm": "min_max", "ms": "min_sum"}
ATTACK_NAMES = ["none", "ls", "lie", "mm", "ms"]


class Knowledge(Enum):
    FULL = "full"
    PARTIAL = "partial"

    @classmethod
    def parse(cls, name: str) -> "Knowledge":
        try:
            return cls(name)
        except ValueError:
            raise UnknownTypeError(f"Unknown adversary knowledge: {name}. It should be 'full' or 'partial'") from None


@dataclass(frozen=True)
class AttackConfig:
    kind: AttackKind = AttackKind.NONE
    knowledge: Knowledge = Knowledge.FULL
    z: float = DEFAULT_Z
    gamma_tol: float = DEFAULT_GAMMA_TOL
    seed: int = 0

    def __post_init__(self):
        if not np.isfinite(self.z):
            raise ConfigurationError(f"z must be finite, got {self.z}")
        if not self.gamma_tol > 0:
            raise ConfigurationError(f"gamma_tol must be positive, got {self.gamma_tol}")


@dataclass(frozen=True)
class AttackContext:
    """Benign updates the adversary can see, plus the ids of the clients it controls."""

    honest_updates: List[ParamVector] = field(default_factory=list)
    malicious_ids: FrozenSet[int] = field(default_factory=frozenset)

    def __post_init__(self):
        if not self.honest_updates:
            raise ValidationError("The adversary needs at least one visible benign update")

    def stacked(self) -> np.ndarray:
        return np.stack([update.values for update in self.honest_updates])
