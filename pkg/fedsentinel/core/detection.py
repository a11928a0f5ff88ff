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
"""Two-way clustering of normalized confidence scores into honest and malicious clients."""

import logging
from dataclasses import dataclass, field
from typing import AbstractSet, FrozenSet, Mapping, NamedTuple, Sequence, Tuple

import numpy as np

from fedsentinel.exceptions import ValidationError

from .confidence import ScoreSet, normalize_scores

logger = logging.getLogger(__name__)

DEFAULT_GAP_THRESHOLD = 0.05
DEFAULT_RAW_GAP_THRESHOLD = 0.0
KMEANS_MAX_ITER = 100


class Centroids(NamedTuple):
    mu_lower: float
    mu_upper: float

    @property
    def gap(self) -> float:
        return self.mu_upper - self.mu_lower

    @property
    def degenerate(self) -> bool:
        return self.mu_upper == self.mu_lower


@dataclass
class DetectionOutcome:
    """Honest / malicious split of the reporting clients for one round."""

    honest: FrozenSet[int] = field(default_factory=frozenset)
    malicious: FrozenSet[int] = field(default_factory=frozenset)
    mu_lower: float = 0.0
    mu_upper: float = 0.0
    degenerate: bool = False

    @classmethod
    def all_honest(cls, client_ids, centroids: Centroids = Centroids(1.0, 1.0)) -> "DetectionOutcome":
        return cls(frozenset(client_ids), frozenset(), centroids.mu_lower, centroids.mu_upper, True)

    @property
    def clients(self) -> FrozenSet[int]:
        return self.honest | self.malicious

    def is_flagged(self, client_id: int) -> bool:
        return client_id in self.malicious


def _assign_upper(values: np.ndarray, centroids: Centroids) -> np.ndarray:
    # strictly nearer the upper centroid; equidistant values go to the lower cluster
    return np.abs(values - centroids.mu_upper) < np.abs(values - centroids.mu_lower)


def kmeans2_1d(scores: Sequence[float], seed: int = 0) -> Centroids:
    """Lloyd's algorithm with k=2 on scalar scores.

    Centroids start at the minimum and maximum score, so the result does not depend on ``seed`` (kept for
    signature compatibility with randomized initializations). Iteration stops once no score changes
    cluster, or after KMEANS_MAX_ITER rounds. A cluster that empties keeps its previous centroid.

    Raises:
        ValidationError: fewer than two scores, or a non-finite score.
    """
    values = np.asarray(scores, dtype=np.float64).reshape(-1)
    if values.size < 2:
        raise ValidationError(f"Two-way clustering needs at least 2 scores, got {values.size}")
    if not np.all(np.isfinite(values)):
        raise ValidationError("Scores must be finite")

    centroids = Centroids(float(values.min()), float(values.max()))
    if centroids.degenerate:
        return centroids

    upper = _assign_upper(values, centroids)
    for iteration in range(KMEANS_MAX_ITER):
        mu_lower = float(values[~upper].mean()) if np.any(~upper) else centroids.mu_lower
        mu_upper = float(values[upper].mean()) if np.any(upper) else centroids.mu_upper
        centroids = Centroids(min(mu_lower, mu_upper), max(mu_lower, mu_upper))
        reassigned = _assign_upper(values, centroids)
        if np.array_equal(reassigned, upper):
            break
        upper = reassigned
    else:
        logger.debug("Two-way clustering stopped after %d iterations without a fixpoint", KMEANS_MAX_ITER)
    return centroids


def raw_span(scores: ScoreSet) -> float:
    if not scores.raw:
        return 0.0
    return max(scores.raw.values()) - min(scores.raw.values())


def classify(
    scores: ScoreSet,
    centroids: Centroids,
    gap_threshold: float = DEFAULT_GAP_THRESHOLD,
    raw_gap_threshold: float = DEFAULT_RAW_GAP_THRESHOLD,
) -> DetectionOutcome:
    """Assigns every client to the honest set iff its normalized score is strictly nearer ``mu_upper``.

    Every client is honest when the scores or centroids are degenerate, when the centroid gap on the
    normalized scale is below ``gap_threshold``, or when the same gap converted back to confidence units
    (times the raw score span) is below ``raw_gap_threshold``.
    """
    client_ids = list(scores.normalized.keys())
    raw_gap = centroids.gap * raw_span(scores)
    if scores.degenerate or centroids.degenerate:
        logger.debug("Degenerate scores; all clients honest")
        return DetectionOutcome.all_honest(client_ids, centroids)
    if centroids.gap < gap_threshold or raw_gap < raw_gap_threshold:
        logger.debug(
            "No separation (gap %.4g, raw gap %.4g; thresholds %.4g, %.4g); all clients honest",
            centroids.gap,
            raw_gap,
            gap_threshold,
            raw_gap_threshold,
        )
        return DetectionOutcome.all_honest(client_ids, centroids)

    values = np.array([scores.normalized[client_id] for client_id in client_ids], dtype=np.float64)
    upper = _assign_upper(values, centroids)
    honest = frozenset(client_id for client_id, is_upper in zip(client_ids, upper) if is_upper)
    malicious = frozenset(client_ids) - honest
    return DetectionOutcome(honest, malicious, centroids.mu_lower, centroids.mu_upper, False)


def detect_scores(
    scores: ScoreSet,
    gap_threshold: float = DEFAULT_GAP_THRESHOLD,
    seed: int = 0,
    raw_gap_threshold: float = DEFAULT_RAW_GAP_THRESHOLD,
) -> DetectionOutcome:
    """kmeans2_1d -> classify on already normalized scores."""
    if len(scores.normalized) < 2:
        return DetectionOutcome.all_honest(scores.normalized.keys())
    centroids = kmeans2_1d(list(scores.normalized.values()), seed)
    outcome = classify(scores, centroids, gap_threshold, raw_gap_threshold)
    logger.debug(
        "Centroids (%.4f, %.4f): %d honest / %d flagged",
        centroids.mu_lower,
        centroids.mu_upper,
        len(outcome.honest),
        len(outcome.malicious),
    )
    return outcome


def detect(
    raw_scores: Mapping[int, float],
    gap_threshold: float = DEFAULT_GAP_THRESHOLD,
    seed: int = 0,
    raw_gap_threshold: float = DEFAULT_RAW_GAP_THRESHOLD,
) -> Tuple[ScoreSet, DetectionOutcome]:
    """normalize -> kmeans2_1d -> classify."""
    scores = normalize_scores(raw_scores)
    return scores, detect_scores(scores, gap_threshold, seed, raw_gap_threshold)


def detection_metrics(outcome: DetectionOutcome, ground_truth_malicious: AbstractSet[int]) -> Tuple[float, float]:
    """Returns (TPR, FPR) of the flagged set against the true malicious set.

    TPR is 1.0 when there is nothing to detect; FPR is 0.0 when every client is malicious.
    """
    truth = frozenset(ground_truth_malicious) & outcome.clients
    benign = outcome.clients - truth
    tpr = len(outcome.malicious & truth) / len(truth) if truth else 1.0
    fpr = len(outcome.malicious - truth) / len(benign) if benign else 0.0
    return tpr, fpr
