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
"""
.. autosummary::
    :toctree: _autosummary

    AttackConfig
    AttackContext
    apply_attack
    lie_attack
    min_max_attack
    min_sum_attack
"""

from .config import ATTACK_NAMES, DEFAULT_GAMMA_TOL, DEFAULT_Z, AttackConfig, AttackContext, AttackKind, Knowledge
from .dispatch import apply_attack, build_context
from .model_poisoning import (
    lie_attack,
    max_distance_bound,
    max_distance_statistic,
    min_max_attack,
    min_sum_attack,
    perturbation_direction,
    search_gamma,
    sum_squared_bound,
    sum_squared_statistic,
)
