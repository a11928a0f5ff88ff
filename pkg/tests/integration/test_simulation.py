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

from dataclasses import replace

import numpy as np
import pytest

REPORT_FILES = ("metrics.csv", "clients.csv", "run.json")


def test_smoke_two_clients_one_round():
    from fedsentinel.core.config import SimulationConfig
    from fedsentinel.core.data import PartitionConfig
    from fedsentinel.core.simulator import run

    config = SimulationConfig(
        n_clients=2,
        rounds=1,
        data="synthetic:200,8,4",
        hidden_layers=(8,),
        partition=PartitionConfig(min_samples_per_client=16),
    )
    history = run(config)

    assert len(history) == 1
    metrics = history[0]
    assert metrics.round == 1
    assert 0.0 <= metrics.accuracy <= 1.0
    assert [trace.client_id for trace in metrics.clients] == [0, 1]
    assert all(np.isfinite(trace.sigma_raw) for trace in metrics.clients)


def test_runs_are_byte_identical(tmp_path, small_config):
    from fedsentinel.core.attacks import AttackConfig, AttackKind
    from fedsentinel.core.report import write_report
    from fedsentinel.core.simulator import run

    config = replace(small_config, malicious_fraction=0.25, attack=AttackConfig(AttackKind.LIE), dump_weights=True)
    first = write_report(run(config), tmp_path / "first", config)
    second = write_report(run(config), tmp_path / "second", config)

    for name in (*REPORT_FILES, "weights.csv"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


@pytest.mark.parametrize("attack", ["none", "ls", "mm"])
def test_threaded_execution_matches_serial(tmp_path, small_config, attack):
    from fedsentinel.core.attacks import AttackConfig, AttackKind
    from fedsentinel.core.report import write_report
    from fedsentinel.core.simulator import run

    serial = replace(small_config, malicious_fraction=0.5, attack=AttackConfig(AttackKind.parse(attack)))
    threaded = replace(serial, executor="multi_threaded_executor", max_workers=3)

    serial_dir = write_report(run(serial), tmp_path / "serial")
    threaded_dir = write_report(run(threaded), tmp_path / "threaded")
    for name in ("metrics.csv", "clients.csv"):
        assert (serial_dir / name).read_bytes() == (threaded_dir / name).read_bytes()


def test_eval_every_skips_rounds(small_config):
    from fedsentinel.core.simulator import run

    history = run(replace(small_config, rounds=3, eval_every=2, defense="trimmean", trim_beta=0.25))
    assert [m.accuracy is not None for m in history] == [False, True, True]


def test_composed_graph_depends_on_defense(small_config):
    from fedsentinel.core.simulator import Simulation

    confidence = {stage.name for stage in Simulation(small_config).graph.get_stages()}
    fedavg = {stage.name for stage in Simulation(replace(small_config, defense="fedavg")).graph.get_stages()}

    assert "DetectionStage" in confidence
    assert confidence - fedavg == {"DetectionStage"}
    assert len(fedavg) == 6


def test_label_shuffle_poisons_malicious_clients_only(small_config):
    from fedsentinel.core.attacks import AttackConfig, AttackKind
    from fedsentinel.core.simulator import Simulation

    clean = Simulation(small_config)
    poisoned = Simulation(replace(small_config, malicious_fraction=0.5, attack=AttackConfig(AttackKind.LABEL_SHUFFLE)))

    assert len(poisoned.malicious_ids) == 2
    for before, after in zip(clean.clients, poisoned.clients):
        assert np.array_equal(before.dataset.features, after.dataset.features)
        same_labels = np.array_equal(before.dataset.labels, after.dataset.labels)
        assert same_labels is (after.client_id not in poisoned.malicious_ids)


def test_simulation_rejects_mismatched_model(small_config):
    from fedsentinel.core.nn import ModelSpec
    from fedsentinel.core.simulator import Simulation
    from fedsentinel.exceptions import ConfigurationError

    with pytest.raises(ConfigurationError):
        Simulation(replace(small_config, model=ModelSpec((5, 4, 3))))


def test_simulation_with_given_data(small_config, toy_dataset):
    from fedsentinel.core.data import train_test_split
    from fedsentinel.core.simulator import Simulation

    train, test = train_test_split(toy_dataset, 0.25, seed=0)
    simulation = Simulation(replace(small_config, rounds=1), train, test)
    assert simulation.model.layer_sizes == (8, 8, 4)
    assert sum(client.data_length for client in simulation.clients) == len(train)
    assert len(simulation.run()) == 1


def test_run_report_round_trip(tmp_path, small_config):
    from fedsentinel.core.attacks import AttackConfig, AttackKind, Knowledge
    from fedsentinel.core.report import read_report, write_report
    from fedsentinel.core.simulator import run

    config = replace(
        small_config, malicious_fraction=0.5, attack=AttackConfig(AttackKind.MIN_SUM, Knowledge.PARTIAL)
    )
    history = run(config)
    write_report(history, tmp_path, config)

    loaded_config, rounds = read_report(tmp_path)
    assert loaded_config == config
    assert rounds == history
