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

import json

import pytest


@pytest.fixture(scope="function")
def round_history():
    from fedsentinel.core.aggregation import AggregationWeights
    from fedsentinel.core.metrics import ClientTrace, RoundMetrics

    traces = [ClientTrace(0, 1.25, 1.0, False), ClientTrace(1, 0.5, 0.0, True)]
    weights = AggregationWeights(w_orig={0: 1.0}, r_norm={0: 1.0}, w_final={0: 1.0})
    yield [
        RoundMetrics(1, None, 1.0, 0.0, 1, traces, weights),
        RoundMetrics(2, 0.5, 1.0, 0.0, 1, traces, weights),
        RoundMetrics(3, 0.75, 0.0, 0.0, 2, traces, None, fallback=True),
    ]


def test_write_report_files(tmp_path, round_history, small_config):
    from fedsentinel.core.report import write_report

    out_dir = write_report(round_history, tmp_path / "run", small_config)

    metrics_lines = (out_dir / "metrics.csv").read_text().splitlines()
    assert metrics_lines == [
        "round,accuracy,tpr,fpr,honest_count",
        "1,,1.0,0.0,1",
        "2,0.5,1.0,0.0,1",
        "3,0.75,0.0,0.0,2",
    ]
    clients_lines = (out_dir / "clients.csv").read_text().splitlines()
    assert clients_lines[0] == "round,client_id,sigma_raw,sigma_norm,flagged"
    assert clients_lines[1:3] == ["1,0,1.25,1.0,0", "1,1,0.5,0.0,1"]
    assert len(clients_lines) == 1 + 3 * 2
    assert not (out_dir / "weights.csv").exists()

    sidecar = json.loads((out_dir / "run.json").read_text())
    assert sidecar["config"]["n_clients"] == 4
    assert len(sidecar["rounds"]) == 3


def test_write_report_weights(tmp_path, round_history, small_config):
    from dataclasses import replace

    from fedsentinel.core.report import write_report

    out_dir = write_report(round_history, tmp_path, replace(small_config, dump_weights=True))
    assert (out_dir / "weights.csv").read_text().splitlines() == [
        "round,client_id,w_orig,r_norm,w_final",
        "1,0,1.0,1.0,1.0",
        "2,0,1.0,1.0,1.0",
    ]


def test_read_report(tmp_path, round_history, small_config):
    from fedsentinel.core.report import read_metrics_csv, read_report, write_report

    write_report(round_history, tmp_path, small_config)
    config, rounds = read_report(tmp_path)

    assert config == small_config
    assert rounds == round_history
    assert [row["accuracy"] for row in read_metrics_csv(tmp_path)] == [None, 0.5, 0.75]


def test_read_report_without_config(tmp_path, round_history):
    from fedsentinel.core.report import read_report, write_report

    write_report(round_history, tmp_path)
    config, rounds = read_report(tmp_path)
    assert config is None
    assert len(rounds) == 3


def test_read_report_invalid(tmp_path):
    from fedsentinel.core.report import read_report
    from fedsentinel.exceptions import DataFormatError

    (tmp_path / "run.json").write_text("{not json")
    with pytest.raises(DataFormatError, match="run.json"):
        read_report(tmp_path)

    (tmp_path / "run.json").write_text(json.dumps({"config": None}))
    with pytest.raises(DataFormatError):
        read_report(tmp_path)


def test_round_metrics_validation():
    from fedsentinel.core.metrics import RoundMetrics, final_accuracy, mean_detection
    from fedsentinel.exceptions import ValidationError

    with pytest.raises(ValidationError):
        RoundMetrics(1, 1.5, None, None, 3)

    history = [RoundMetrics(r, 0.1 * r if r % 2 else None, 0.5, 0.25, 3) for r in range(1, 5)]
    assert final_accuracy(history) == pytest.approx(0.3)
    assert mean_detection(history, last=2) == pytest.approx((0.5, 0.25))
    assert mean_detection([RoundMetrics(1, 0.9, None, None, 3)]) == (None, None)
