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

import numpy as np
import pytest


def _context(rows, malicious_ids=()):
    from fedsentinel.core.attacks import AttackContext
    from fedsentinel.core.nn import ParamVector

    return AttackContext([ParamVector(row) for row in rows], frozenset(malicious_ids))


def _config(kind="none", knowledge="full", **kwargs):
    from fedsentinel.core.attacks import AttackConfig, AttackKind, Knowledge

    return AttackConfig(AttackKind.parse(kind), Knowledge.parse(knowledge), **kwargs)


def test_lie_attack_example():
    from fedsentinel.core.attacks import lie_attack

    # mean [1, 0], sample std [0.2, 0.4]
    a, b = 0.1 * math.sqrt(2.0), 0.2 * math.sqrt(2.0)
    ctx = _context([[1.0 + a, b], [1.0 - a, -b]])
    np.testing.assert_allclose(lie_attack(ctx, _config("lie", z=1.5)).values, [1.3, 0.6], atol=1e-12)
    np.testing.assert_allclose(lie_attack(ctx, _config("lie", z=0.0)).values, [1.0, 0.0], atol=1e-12)


def test_lie_attack_single_update():
    from fedsentinel.core.attacks import lie_attack

    assert list(lie_attack(_context([[0.5, -2.0]]), _config("lie")).values) == [0.5, -2.0]


@pytest.mark.parametrize("attack", ["min_max_attack", "min_sum_attack"])
def test_constrained_attacks_identical_updates(attack):
    from fedsentinel.core import attacks

    ctx = _context([[1.0, 2.0, 3.0]] * 4)
    result = getattr(attacks, attack)(ctx, _config("mm"))
    assert list(result.values) == [1.0, 2.0, 3.0]


@pytest.mark.parametrize("attack", ["min_max_attack", "min_sum_attack"])
def test_constrained_attacks_one_dimensional(attack):
    from fedsentinel.core import attacks

    ctx = _context([[0.0], [2.0]])
    # mean 1, bound 2 (Min-Max: diameter; Min-Sum: 2 + 2 gamma^2 <= 4), so gamma = 1
    explicit = getattr(attacks, attack)(ctx, _config("mm"), direction=np.array([-1.0]))
    assert explicit.values[0] == pytest.approx(0.0, abs=1e-6)
    default = getattr(attacks, attack)(ctx, _config("mm"))
    assert default.values[0] == pytest.approx(0.0, abs=1e-6)


@pytest.mark.parametrize(
    "attack, statistic, bound",
    [
        ("min_max_attack", "max_distance_statistic", "max_distance_bound"),
        ("min_sum_attack", "sum_squared_statistic", "sum_squared_bound"),
    ],
)
def test_constrained_attacks_satisfy_their_bound(attack, statistic, bound):
    from fedsentinel.core import attacks

    gamma_tol = 1e-5
    cfg = _config("mm", gamma_tol=gamma_tol)
    rng = np.random.default_rng(11)
    for _ in range(100):
        updates = rng.normal(loc=rng.normal(size=6), scale=rng.uniform(0.1, 2.0), size=(int(rng.integers(2, 8)), 6))
        ctx = _context(updates)
        result = getattr(attacks, attack)(ctx, cfg).values

        mean = updates.mean(axis=0)
        direction = attacks.perturbation_direction(mean)
        gamma = float(np.dot(result - mean, direction))
        limit = getattr(attacks, bound)(updates)

        assert gamma >= 0.0
        assert getattr(attacks, statistic)(updates, result) <= limit * (1 + 1e-12)
        assert getattr(attacks, statistic)(updates, mean + (gamma + 2 * gamma_tol) * direction) > limit


def test_perturbation_direction():
    from fedsentinel.core.attacks import perturbation_direction

    np.testing.assert_allclose(perturbation_direction(np.array([3.0, 4.0])), [-0.6, -0.8])
    np.testing.assert_allclose(perturbation_direction(np.zeros(4)), [-0.5] * 4)


def test_search_gamma():
    from fedsentinel.core.attacks import search_gamma

    assert search_gamma(lambda g: g <= 5.3, 1e-6) == pytest.approx(5.3, abs=1e-6)
    assert search_gamma(lambda g: g <= 0.0, 1e-6) == 0.0


def test_attack_kind_parsing():
    from fedsentinel.core.attacks import AttackKind, Knowledge
    from fedsentinel.exceptions import UnknownTypeError

    assert AttackKind.parse("ls") is AttackKind.LABEL_SHUFFLE
    assert AttackKind.parse("mm") is AttackKind.MIN_MAX
    assert AttackKind.parse("min_sum") is AttackKind.MIN_SUM
    assert AttackKind.LIE.poisons_model is True
    assert AttackKind.LABEL_SHUFFLE.poisons_model is False
    assert Knowledge.parse("partial") is Knowledge.PARTIAL

    with pytest.raises(UnknownTypeError):
        AttackKind.parse("backdoor")
    with pytest.raises(UnknownTypeError):
        Knowledge.parse("none")


def test_attack_config_validation():
    from fedsentinel.core.attacks import AttackConfig, AttackContext
    from fedsentinel.exceptions import ConfigurationError, ValidationError

    with pytest.raises(ConfigurationError):
        AttackConfig(gamma_tol=0.0)
    with pytest.raises(ConfigurationError):
        AttackConfig(z=float("inf"))
    with pytest.raises(ValidationError):
        AttackContext([], frozenset({1}))


@pytest.fixture(scope="function")
def round_updates():
    from fedsentinel.core.nn import ParamVector

    rng = np.random.default_rng(21)
    # clients 0-2 trained on one distribution, 3-5 on another
    updates = {i: ParamVector(rng.normal(0.0, 1.0, size=8)) for i in range(3)}
    updates.update({i: ParamVector(rng.normal(3.0, 0.1, size=8)) for i in range(3, 6)})
    yield updates


@pytest.mark.parametrize("kind", ["none", "ls"])
def test_apply_attack_identity(kind, round_updates):
    from fedsentinel.core.attacks import apply_attack

    attacked = apply_attack(round_updates, {3, 4}, _config(kind))
    assert attacked == round_updates


def test_apply_attack_all_but_one(round_updates):
    from fedsentinel.core.attacks import apply_attack

    truth = {1, 2, 3, 4, 5}
    attacked = apply_attack(round_updates, truth, _config("lie"))

    assert attacked[0] is round_updates[0]
    poisoned = [attacked[client_id].values for client_id in sorted(truth)]
    assert all(np.array_equal(values, poisoned[0]) for values in poisoned)
    # one visible honest update: LIE degenerates to that update
    assert np.array_equal(poisoned[0], round_updates[0].values)


@pytest.mark.parametrize("kind", ["lie", "mm", "ms"])
def test_apply_attack_knowledge_modes(kind, round_updates):
    from fedsentinel.core.attacks import apply_attack

    truth = {3, 4, 5}
    full = apply_attack(round_updates, truth, _config(kind, "full"))
    partial = apply_attack(round_updates, truth, _config(kind, "partial"))

    for client_id in (0, 1, 2):
        assert full[client_id] is round_updates[client_id]
        assert partial[client_id] is round_updates[client_id]
    assert not np.allclose(full[3].values, partial[3].values)
    assert np.array_equal(full[3].values, apply_attack(round_updates, truth, _config(kind, "full"))[3].values)


def test_build_context(round_updates):
    from fedsentinel.core.attacks import Knowledge, build_context

    full = build_context(round_updates, {3, 4, 5}, Knowledge.FULL)
    assert [u is round_updates[i] for i, u in zip((0, 1, 2), full.honest_updates)] == [True] * 3
    partial = build_context(round_updates, {3, 4, 5}, Knowledge.PARTIAL)
    assert [u is round_updates[i] for i, u in zip((3, 4, 5), partial.honest_updates)] == [True] * 3
    everyone = build_context(round_updates, set(range(6)), Knowledge.FULL)
    assert len(everyone.honest_updates) == 6


def test_apply_attack_unknown_client(round_updates):
    from fedsentinel.core.attacks import apply_attack
    from fedsentinel.exceptions import ValidationError

    with pytest.raises(ValidationError):
        apply_attack(round_updates, {9}, _config("lie"))
