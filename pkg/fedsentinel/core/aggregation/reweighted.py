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
"""Confidence re-weighted aggregation over the honest set.

For honest clients H with data lengths l_i and normalized confidence scores s_i:

    w_orig_i  = l_i / sum_H l_j
    r_norm_i  = s_i / sum_H s_j
    w_final_i = r_norm_i * w_orig_i
    theta     = sum_H w_final_i * l_i * theta_i / sum_H w_final_i * l_i

The data length enters twice (once through w_orig, once in the final average). ``single_length_weighting``
drops the second factor; ``reweight=False`` replaces r_norm with the uniform 1/|H|.
"""

import logging
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from fedsentinel.core.confidence import ScoreSet
from fedsentinel.core.detection import DetectionOutcome
from fedsentinel.core.nn import ParamVector
from fedsentinel.exceptions import ValidationError

from .aggregator import AggregationResult, AggregationWeights, Aggregator, ClientReport, sorted_reports, stack_params
from .fedavg import fedavg

logger = logging.getLogger(__name__)

SCALE_CHECK_FACTOR = 7.3
SCALE_CHECK_ATOL = 1e-10


def _honest_reports(reports: Sequence[ClientReport], outcome: DetectionOutcome) -> Sequence[ClientReport]:
    honest = [report for report in sorted_reports(reports) if report.client_id in outcome.honest]
    if not honest:
        raise ValidationError("The honest set is empty; nothing to aggregate")
    return honest


def _ratio(values: np.ndarray) -> np.ndarray:
    total = values.sum()
    if total <= 0.0:
        return np.full(values.shape, 1.0 / values.size)
    return values / total


def reweighted_aggregate(
    reports: Sequence[ClientReport],
    outcome: DetectionOutcome,
    scores: ScoreSet,
    reweight: bool = True,
    single_length_weighting: bool = False,
) -> Tuple[ParamVector, AggregationWeights]:
    """Aggregates the honest clients' parameters with confidence-scaled data-length weights.

    Reports of clients outside ``outcome.honest`` are ignored entirely. Honest clients are combined in
    ascending id order, so the output does not depend on report order.

    Raises:
        ValidationError: the honest set has no report, or an honest client has no normalized score.
    """
    honest = _honest_reports(reports, outcome)
    ids = [report.client_id for report in honest]
    missing = [client_id for client_id in ids if client_id not in scores.normalized]
    if missing:
        raise ValidationError(f"No normalized confidence score for honest clients {missing}")

    lengths = np.array([report.data_length for report in honest], dtype=np.float64)
    w_orig = lengths / lengths.sum()
    if reweight:
        r_norm = _ratio(np.array([scores.normalized[client_id] for client_id in ids], dtype=np.float64))
    else:
        r_norm = np.full(len(ids), 1.0 / len(ids))
    w_final = r_norm * w_orig

    effective = w_final if single_length_weighting else w_final * lengths
    coefficients = _ratio(effective)
    params = honest[0].params.replace(np.tensordot(coefficients, stack_params(honest), axes=1))

    weights = AggregationWeights(
        w_orig=_as_map(ids, w_orig), r_norm=_as_map(ids, r_norm), w_final=_as_map(ids, w_final)
    )
    return params, weights


def _as_map(ids, values: np.ndarray) -> Dict[int, float]:
    return {client_id: float(value) for client_id, value in zip(ids, values)}


def scale_invariance_check(
    reports: Sequence[ClientReport],
    outcome: DetectionOutcome,
    scores: ScoreSet,
    scale: float = SCALE_CHECK_FACTOR,
    atol: float = SCALE_CHECK_ATOL,
) -> bool:
    """Whether multiplying every honest normalized score by ``scale`` leaves the aggregate unchanged."""
    if not scale > 0:
        raise ValidationError(f"Scale must be positive, got {scale}")
    scaled = ScoreSet(
        raw=dict(scores.raw),
        normalized={
            client_id: value * scale if client_id in outcome.honest else value
            for client_id, value in scores.normalized.items()
        },
        degenerate=scores.degenerate,
    )
    reference, _ = reweighted_aggregate(reports, outcome, scores)
    rescaled, _ = reweighted_aggregate(reports, outcome, scaled)
    return bool(np.allclose(reference.values, rescaled.values, rtol=0.0, atol=atol))


class ConfidenceAggregator(Aggregator):
    """Aggregator of the confidence defense; consumes the detection outcome of the round.

    A degenerate outcome (no separation between the clients) aggregates every report with plain FedAvg. With
    ``fallback`` set, an empty honest set keeps the previous global model instead of raising.
    """

    uses_detection = True

    def __init__(self, reweight: bool = True, single_length_weighting: bool = False, fallback: bool = True):
        self._reweight = reweight
        self._single_length_weighting = single_length_weighting
        self._fallback = fallback

    @property
    def reweight(self) -> bool:
        return self._reweight

    @property
    def single_length_weighting(self) -> bool:
        return self._single_length_weighting

    def aggregate(
        self,
        reports: Sequence[ClientReport],
        previous: ParamVector,
        outcome: Optional[DetectionOutcome] = None,
        scores: Optional[ScoreSet] = None,
    ) -> AggregationResult:
        if outcome is None or scores is None:
            raise ValidationError("The confidence aggregator needs a detection outcome and scores")
        if outcome.degenerate:
            return AggregationResult(fedavg(reports))
        if self._fallback and not any(report.client_id in outcome.honest for report in reports):
            logger.warning("Empty honest set; keeping the previous global model")
            return AggregationResult(previous, AggregationWeights(), fallback=True)
        params, weights = reweighted_aggregate(
            reports, outcome, scores, self._reweight, self._single_length_weighting
        )
        return AggregationResult(params, weights)
