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

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence

import numpy as np

from fedsentinel.core.confidence import ScoreSet
from fedsentinel.core.detection import DetectionOutcome
from fedsentinel.core.nn import ParamVector
from fedsentinel.exceptions import ValidationError


@dataclass(frozen=True)
class ClientReport:
    """What a client submits to the server in one round. Carries no ground-truth flag."""

    client_id: int
    params: ParamVector
    sigma_raw: float
    data_length: int

    def __post_init__(self):
        if self.data_length < 1:
            raise ValidationError(f"Client {self.client_id} reported data_length {self.data_length}")


@dataclass
class AggregationWeights:
    """Per-client weights of the confidence aggregator over the honest set."""

    w_orig: Dict[int, float] = field(default_factory=dict)
    r_norm: Dict[int, float] = field(default_factory=dict)
    w_final: Dict[int, float] = field(default_factory=dict)


class AggregationResult(NamedTuple):
    params: ParamVector
    weights: Optional[AggregationWeights] = None
    fallback: bool = False


def sorted_reports(reports: Sequence[ClientReport]) -> List[ClientReport]:
    """Orders reports by client id and rejects empty or duplicated input."""
    if not reports:
        raise ValidationError("Cannot aggregate an empty list of client reports")
    ordered = sorted(reports, key=lambda report: report.client_id)
    ids = [report.client_id for report in ordered]
    if len(set(ids)) != len(ids):
        raise ValidationError(f"Duplicate client ids in reports: {ids}")
    sizes = {len(report.params) for report in ordered}
    if len(sizes) != 1:
        raise ValidationError(f"Client parameter vectors differ in length: {sorted(sizes)}")
    return ordered


def stack_params(reports: Sequence[ClientReport]) -> np.ndarray:
    return np.stack([report.params.values for report in reports])


class Aggregator(ABC):
    """Builds the next global model from one round of client reports."""

    #: Whether the aggregator consumes a DetectionOutcome (and so needs the detection stage).
    uses_detection = False

    @abstractmethod
    def aggregate(
        self,
        reports: Sequence[ClientReport],
        previous: ParamVector,
        outcome: Optional[DetectionOutcome] = None,
        scores: Optional[ScoreSet] = None,
    ) -> AggregationResult:
        pass
