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

import math
from typing import Optional, Sequence

import numpy as np

from fedsentinel.core.confidence import ScoreSet
from fedsentinel.core.detection import DetectionOutcome
from fedsentinel.core.nn import ParamVector
from fedsentinel.exceptions import ConfigurationError

from .aggregator import AggregationResult, Aggregator, ClientReport, sorted_reports, stack_params

DEFAULT_TRIM_BETA = 0.25


def trim_count(beta: float, n: int) -> int:
    """floor(beta * n), checked so that at least one value per coordinate survives."""
    if not beta >= 0.0:
        raise ConfigurationError(f"Trim fraction must be nonnegative, got {beta}")
    k = math.floor(beta * n)
    if 2 * k >= n:
        raise ConfigurationError(f"Trimming {k} values per side leaves nothing of {n} clients")
    return k


def trimmed_mean(reports: Sequence[ClientReport], beta: float = DEFAULT_TRIM_BETA) -> ParamVector:
    """Coordinate-wise mean after dropping the floor(beta * n) largest and smallest values.

    The mean is unweighted; data lengths are ignored.
    """
    ordered = sorted_reports(reports)
    k = trim_count(beta, len(ordered))
    values = np.sort(stack_params(ordered), axis=0)
    return ordered[0].params.replace(values[k : len(ordered) - k].mean(axis=0))


class TrimmedMeanAggregator(Aggregator):
    def __init__(self, beta: float = DEFAULT_TRIM_BETA):
        if not 0.0 <= beta < 1.0:
            raise ConfigurationError(f"Trim fraction must lie in [0, 1), got {beta}")
        self._beta = beta

    @property
    def beta(self) -> float:
        return self._beta

    def aggregate(
        self,
        reports: Sequence[ClientReport],
        previous: ParamVector,
        outcome: Optional[DetectionOutcome] = None,
        scores: Optional[ScoreSet] = None,
    ) -> AggregationResult:
        return AggregationResult(trimmed_mean(reports, self._beta))
