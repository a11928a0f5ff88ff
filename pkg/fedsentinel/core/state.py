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
from typing import List

from .data import Dataset
from .metrics import RoundMetrics
from .nn import ParamVector


@dataclass(frozen=True)
class Client:
    """A simulated client and the local training data it holds (already poisoned for label-shuffle clients)."""

    client_id: int
    dataset: Dataset

    @property
    def data_length(self) -> int:
        return len(self.dataset)


@dataclass
class SimulationState:
    """Mutable state carried from round to round."""

    global_params: ParamVector
    history: List[RoundMetrics] = field(default_factory=list)
