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
from typing import List, Optional, Sequence

import numpy as np

from fedsentinel.exceptions import ValidationError

from .aggregation import AggregationWeights


@dataclass(frozen=True)
class ClientTrace:
    client_id: int
    sigma_raw: float
    sigma_norm: float
    flagged: bool


@dataclass
class RoundMetrics:
    """What one round produced.

    ``accuracy`` is None in rounds without a test-set evaluation; ``tpr`` and ``fpr`` are None for defenses
    that do not run detection.
    """

    round: int
    accuracy: Optional[float]
    tpr: Optional[float]
    fpr: Optional[float]
    honest_count: int
    clients: List[ClientTrace] = field(default_factory=list)
    weights: Optional[AggregationWeights] = None
    fallback: bool = False

    def __post_init__(self):
        for name in ("accuracy", "tpr", "fpr"):
            value = getattr(self, name)
            if value is not None and not 0.0 <= value <= 1.0:
                raise ValidationError(f"Round {self.round}: {name}={value} is outside [0, 1]")


def final_accuracy(history: Sequence[RoundMetrics]) -> Optional[float]:
    """Accuracy of the last evaluated round."""
    for metrics in reversed(history):
        if metrics.accuracy is not None:
            return metrics.accuracy
    return None


def mean_detection(history: Sequence[RoundMetrics], last: int = 10):
    """Mean (TPR, FPR) over the last ``last`` rounds that ran detection; (None, None) if there are none."""
    detected = [metrics for metrics in history if metrics.tpr is not None][-last:]
    if not detected:
        return None, None
    return (
        float(np.mean([metrics.tpr for metrics in detected])),
        float(np.mean([metrics.fpr for metrics in detected])),
    )
