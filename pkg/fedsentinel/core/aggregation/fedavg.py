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

from typing import Optional, Sequence

import numpy as np

from fedsentinel.core.confidence import ScoreSet
from fedsentinel.core.detection import DetectionOutcome
from fedsentinel.core.nn import ParamVector

from .aggregator import AggregationResult, Aggregator, ClientReport, sorted_reports, stack_params


def fedavg(reports: Sequence[ClientReport]) -> ParamVector:
    """Data-length weighted average of all client parameters."""
    ordered = sorted_reports(reports)
    lengths = np.array([report.data_length for report in ordered], dtype=np.float64)
    averaged = np.tensordot(lengths / lengths.sum(), stack_params(ordered), axes=1)
    return ordered[0].params.replace(averaged)


class FedAvgAggregator(Aggregator):
    def aggregate(
        self,
        reports: Sequence[ClientReport],
        previous: ParamVector,
        outcome: Optional[DetectionOutcome] = None,
        scores: Optional[ScoreSet] = None,
    ) -> AggregationResult:
        return AggregationResult(fedavg(reports))
