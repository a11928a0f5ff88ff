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
"""Model-poisoning attacks built from statistics of the benign updates visible to the adversary.

Min-Max and Min-Sum move the benign mean along a fixed direction p by the largest step gamma that keeps the
malicious vector inside a distance bound of the benign set. gamma is found by doubling an upper bound until
the constraint fails, then bisecting until the bracket is narrower than ``gamma_tol``.
"""

import logging
from typing import Callable, NamedTuple, Optional

import numpy as np

from fedsentinel.core.nn import ParamVector

from .config import AttackConfig, AttackContext

logger = logging.getLogger(__name__)

BISECTION_MAX_ITER = 60
_DOUBLING_MAX_ITER = 1024


class GammaSearch(NamedTuple):
    gamma: float
    statistic: float
    bound: float


def lie_attack(ctx: AttackContext, cfg: AttackConfig) -> ParamVector:
    """mu + z * std, coordinate-wise over the visible updates (sample std; zero for a single update)."""
    updates = ctx.stacked()
    mean = updates.mean(axis=0)
    if updates.shape[0] < 2:
        return ctx.honest_updates[0].replace(mean)
    return ctx.honest_updates[0].replace(mean + cfg.z * updates.std(axis=0, ddof=1))


def perturbation_direction(mean: np.ndarray) -> np.ndarray:
    """Unit vector opposite to the mean; -1/sqrt(d) in every coordinate when the mean is zero."""
    norm = np.linalg.norm(mean)
    if norm == 0.0:
        return np.full(mean.shape, -1.0 / np.sqrt(mean.size))
    return -mean / norm


def _row_distances(updates: np.ndarray, point: np.ndarray) -> np.ndarray:
    return np.linalg.norm(updates - point, axis=1)


def max_distance_statistic(updates: np.ndarray, candidate: np.ndarray) -> float:
    return float(_row_distances(updates, candidate).max())


def max_distance_bound(updates: np.ndarray) -> float:
    """Largest pairwise distance between visible updates."""
    return max(float(_row_distances(updates, row).max()) for row in updates)


def sum_squared_statistic(updates: np.ndarray, candidate: np.ndarray) -> float:
    return float(np.sum(_row_distances(updates, candidate) ** 2))


def sum_squared_bound(updates: np.ndarray) -> float:
    """Largest sum of squared distances from one visible update to all the others."""
    return max(float(np.sum(_row_distances(updates, row) ** 2)) for row in updates)


def search_gamma(feasible: Callable[[float], bool], gamma_tol: float) -> float:
    """Largest gamma >= 0 with ``feasible(gamma)``, assuming the feasible set is an interval containing 0."""
    low, high = 0.0, 1.0
    for _ in range(_DOUBLING_MAX_ITER):
        if not feasible(high):
            break
        low, high = high, 2.0 * high
    for _ in range(BISECTION_MAX_ITER):
        if high - low <= gamma_tol:
            break
        middle = 0.5 * (low + high)
        if feasible(middle):
            low = middle
        else:
            high = middle
    return low


def _constrained_attack(
    ctx: AttackContext,
    cfg: AttackConfig,
    statistic: Callable[[np.ndarray, np.ndarray], float],
    bound_of: Callable[[np.ndarray], float],
    direction: Optional[np.ndarray],
) -> ParamVector:
    updates = ctx.stacked()
    mean = updates.mean(axis=0)
    bound = bound_of(updates)
    if bound == 0.0:
        return ctx.honest_updates[0].replace(mean)

    p = perturbation_direction(mean) if direction is None else np.asarray(direction, dtype=np.float64).reshape(-1)
    gamma = search_gamma(lambda g: statistic(updates, mean + g * p) <= bound, cfg.gamma_tol)
    malicious = mean + gamma * p

    if logger.isEnabledFor(logging.DEBUG):
        search = GammaSearch(gamma, statistic(updates, malicious), bound)
        logger.debug(
            "gamma=%.6g statistic=%.6g bound=%.6g slack=%.3g",
            search.gamma,
            search.statistic,
            search.bound,
            search.bound - search.statistic,
        )
    return ctx.honest_updates[0].replace(malicious)


def min_max_attack(ctx: AttackContext, cfg: AttackConfig, direction: Optional[np.ndarray] = None) -> ParamVector:
    """mu + gamma * p with the largest gamma keeping every distance to a visible update within the
    largest pairwise distance between visible updates."""
    return _constrained_attack(ctx, cfg, max_distance_statistic, max_distance_bound, direction)


def min_sum_attack(ctx: AttackContext, cfg: AttackConfig, direction: Optional[np.ndarray] = None) -> ParamVector:
    """mu + gamma * p with the largest gamma keeping the summed squared distance to the visible updates within
    the largest such sum of any visible update."""
    return _constrained_attack(ctx, cfg, sum_squared_statistic, sum_squared_bound, direction)
