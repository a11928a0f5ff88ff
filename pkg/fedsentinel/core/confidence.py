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
"""Closed-form confidence scores.

A sample with task loss L gets the confidence

    sigma = exp(-W(0.5 * max(-2/e, (L - log C) / lambda)))

where W is the principal branch of the Lambert W function. sigma lies in (0, e]; it equals 1 when the
loss equals the loss of a uniform prediction (log C) and saturates at e for confidently correct samples.
A client's score is the mean sample confidence over its local training data.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Mapping, Union

import numpy as np

from fedsentinel.exceptions import ConfigurationError, DomainError, ValidationError

logger = logging.getLogger(__name__)

INV_E = math.exp(-1.0)
BRANCH_TOLERANCE = 1e-12
DEGENERATE_SPAN = 1e-12
_HALLEY_MAX_ITER = 64
_SERIES_REGION = -0.32


@dataclass(frozen=True)
class ConfidenceConfig:
    lam: float = 1.0
    num_classes: int = 10

    def __post_init__(self):
        if not self.lam > 0:
            raise ConfigurationError(f"lambda must be positive, got {self.lam}")
        if self.num_classes < 2:
            raise ConfigurationError(f"num_classes must be at least 2, got {self.num_classes}")

    @property
    def log_classes(self) -> float:
        return math.log(self.num_classes)


@dataclass
class ScoreSet:
    """Raw and min-max normalized client confidence scores, keyed by client id.

    ``degenerate`` is set when all raw scores are equal; every normalized score is then 1.0.
    """

    raw: Dict[int, float] = field(default_factory=dict)
    normalized: Dict[int, float] = field(default_factory=dict)
    degenerate: bool = False

    @property
    def client_ids(self):
        return list(self.raw.keys())


def _initial_guess(x: np.ndarray) -> np.ndarray:
    guess = np.log1p(x)
    near_branch = x < _SERIES_REGION
    if np.any(near_branch):
        # branch-point series in p = sqrt(2(ex + 1))
        p = np.sqrt(np.maximum(2.0 * (math.e * x[near_branch] + 1.0), 0.0))
        guess[near_branch] = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p**3
    large = x > math.e
    if np.any(large):
        log_x = np.log(x[large])
        guess[large] = log_x - np.log(log_x)
    return guess


def lambert_w0(x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Principal branch W0 of the Lambert W function for real x >= -1/e.

    Halley iteration from a log1p / asymptotic / branch-point-series initial guess, run until the step is
    below machine precision. Arguments down to 1e-12 below -1/e are treated as the branch point.

    Raises:
        DomainError: an argument is NaN or below -1/e - 1e-12.
    """
    values = np.asarray(x, dtype=np.float64)
    is_scalar = values.ndim == 0
    values = np.atleast_1d(values).copy()

    if np.any(np.isnan(values)) or np.any(values < -INV_E - BRANCH_TOLERANCE):
        raise DomainError("Lambert W0 is defined for x >= -1/e and not for NaN")

    result = np.empty_like(values)
    at_branch = values <= -INV_E
    result[at_branch] = -1.0
    at_infinity = np.isposinf(values)
    result[at_infinity] = np.inf

    active = ~(at_branch | at_infinity)
    if np.any(active):
        target = values[active]
        w = _initial_guess(target)
        for _ in range(_HALLEY_MAX_ITER):
            ew = np.exp(w)
            residual = w * ew - target
            w_plus_one = w + 1.0
            step = residual / (ew * w_plus_one - (w + 2.0) * residual / (2.0 * w_plus_one))
            w = w - step
            if np.all(np.abs(step) <= 4.0 * np.finfo(np.float64).eps * (1.0 + np.abs(w))):
                break
        result[active] = np.maximum(w, -1.0)

    if is_scalar:
        return float(result[0])
    return result


def sample_confidence(loss: Union[float, np.ndarray], cfg: ConfidenceConfig) -> Union[float, np.ndarray]:
    """Closed-form confidence of one sample (or of every element of an array of losses)."""
    scaled = (np.asarray(loss, dtype=np.float64) - cfg.log_classes) / cfg.lam
    argument = 0.5 * np.maximum(-2.0 * INV_E, scaled)
    sigma = np.exp(-np.asarray(lambert_w0(argument)))
    if sigma.ndim == 0:
        return float(sigma)
    return sigma


def client_confidence(losses: np.ndarray, cfg: ConfidenceConfig) -> float:
    """Mean sample confidence over a client's per-sample losses."""
    losses = np.asarray(losses, dtype=np.float64).reshape(-1)
    if losses.size == 0:
        raise ValidationError("Cannot compute a client confidence from an empty loss vector")
    return float(np.mean(sample_confidence(losses, cfg)))


def normalize_scores(raw: Mapping[int, float]) -> ScoreSet:
    """Min-max scales client scores into [0, 1], keeping the key order of ``raw``.

    When the scores span less than DEGENERATE_SPAN every client gets 1.0 and the set is flagged
    degenerate, which tells detection to keep all clients.
    """
    if not raw:
        raise ValidationError("Cannot normalize an empty score map")
    raw = {client_id: float(score) for client_id, score in raw.items()}
    low = min(raw.values())
    high = max(raw.values())
    span = high - low
    if span <= DEGENERATE_SPAN:
        logger.debug("Degenerate confidence scores (span %.3g); all clients normalized to 1.0", span)
        return ScoreSet(raw=raw, normalized={client_id: 1.0 for client_id in raw}, degenerate=True)
    normalized = {client_id: (score - low) / span for client_id, score in raw.items()}
    return ScoreSet(raw=raw, normalized=normalized, degenerate=False)
