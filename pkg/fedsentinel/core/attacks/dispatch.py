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

import logging
from typing import AbstractSet, Dict, Mapping

from fedsentinel.core.nn import ParamVector
from fedsentinel.exceptions import ValidationError

from .config import AttackConfig, AttackContext, AttackKind, Knowledge
from .model_poisoning import lie_attack, min_max_attack, min_sum_attack

logger = logging.getLogger(__name__)

_ATTACKS = {AttackKind.LIE: lie_attack, AttackKind.MIN_MAX: min_max_attack, AttackKind.MIN_SUM: min_sum_attack}


def build_context(
    round_updates: Mapping[int, ParamVector], truth: AbstractSet[int], knowledge: Knowledge
) -> AttackContext:
    """Selects the benign updates the adversary sees.

    Full knowledge sees the honest clients' updates (or its own cohort's benign updates when no honest
    client exists); partial knowledge sees only its own cohort's benign updates.
    """
    malicious_ids = frozenset(truth)
    honest_ids = sorted(set(round_updates) - malicious_ids)
    cohort_ids = sorted(malicious_ids)
    visible_ids = honest_ids if knowledge is Knowledge.FULL and honest_ids else cohort_ids
    return AttackContext([round_updates[client_id] for client_id in visible_ids], malicious_ids)


def apply_attack(
    round_updates: Mapping[int, ParamVector], truth: AbstractSet[int], cfg: AttackConfig
) -> Dict[int, ParamVector]:
    """Replaces every malicious client's update with the same poisoned vector.

    Honest updates are returned untouched. Label shuffling acts on the data, not here.
    """
    updates = dict(round_updates)
    unknown = set(truth) - set(updates)
    if unknown:
        raise ValidationError(f"Malicious ids {sorted(unknown)} have no update this round")
    if not cfg.kind.poisons_model or not truth:
        return updates

    ctx = build_context(updates, truth, cfg.knowledge)
    poisoned = _ATTACKS[cfg.kind](ctx, cfg)
    for client_id in truth:
        updates[client_id] = poisoned
    logger.debug(
        "%s (%s knowledge) from %d visible updates replaced %d clients",
        cfg.kind.value,
        cfg.knowledge.value,
        len(ctx.honest_updates),
        len(truth),
    )
    return updates
