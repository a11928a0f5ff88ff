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
"""Run output files.

A run directory holds:

    metrics.csv   round,accuracy,tpr,fpr,honest_count (empty cells for values not measured)
    clients.csv   round,client_id,sigma_raw,sigma_norm,flagged
    weights.csv   round,client_id,w_orig,r_norm,w_final (only with ``dump_weights``)
    run.json      the resolved configuration and every round's metrics, readable with :func:`read_report`

Floats are written with ``repr`` so that identical runs produce byte-identical files.
"""

import csv
import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from fedsentinel._version import __version__
from fedsentinel.exceptions import DataFormatError

from .aggregation import AggregationWeights
from .config import SimulationConfig
from .metrics import ClientTrace, RoundMetrics

logger = logging.getLogger(__name__)

METRICS_FILENAME = "metrics.csv"
CLIENTS_FILENAME = "clients.csv"
WEIGHTS_FILENAME = "weights.csv"
SIDECAR_FILENAME = "run.json"

METRICS_HEADER = ["round", "accuracy", "tpr", "fpr", "honest_count"]
CLIENTS_HEADER = ["round", "client_id", "sigma_raw", "sigma_norm", "flagged"]
WEIGHTS_HEADER = ["round", "client_id", "w_orig", "r_norm", "w_final"]


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(float(value))
    return str(value)


def _write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]):
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(value) for value in row])


def _round_to_dict(metrics: RoundMetrics) -> Dict[str, Any]:
    weights = None
    if metrics.weights is not None:
        weights = {
            name: {str(client_id): value for client_id, value in getattr(metrics.weights, name).items()}
            for name in ("w_orig", "r_norm", "w_final")
        }
    return {
        "round": metrics.round,
        "accuracy": metrics.accuracy,
        "tpr": metrics.tpr,
        "fpr": metrics.fpr,
        "honest_count": metrics.honest_count,
        "fallback": metrics.fallback,
        "clients": [[c.client_id, c.sigma_raw, c.sigma_norm, c.flagged] for c in metrics.clients],
        "weights": weights,
    }


def _round_from_dict(values: Dict[str, Any]) -> RoundMetrics:
    weights = None
    if values.get("weights") is not None:
        weights = AggregationWeights(
            **{
                name: {int(client_id): value for client_id, value in values["weights"][name].items()}
                for name in ("w_orig", "r_norm", "w_final")
            }
        )
    return RoundMetrics(
        round=values["round"],
        accuracy=values["accuracy"],
        tpr=values["tpr"],
        fpr=values["fpr"],
        honest_count=values["honest_count"],
        clients=[ClientTrace(int(c[0]), c[1], c[2], bool(c[3])) for c in values["clients"]],
        weights=weights,
        fallback=values.get("fallback", False),
    )


def write_report(
    metrics: Sequence[RoundMetrics], path: Union[str, Path], config: Optional[SimulationConfig] = None
) -> Path:
    """Writes the run files into the directory ``path`` (created if missing) and returns it.

    The weights file is written when ``config.dump_weights`` is set.
    """
    out_dir = Path(path)
    out_dir.mkdir(parents=True, exist_ok=True)

    _write_csv(
        out_dir / METRICS_FILENAME,
        METRICS_HEADER,
        ([m.round, m.accuracy, m.tpr, m.fpr, m.honest_count] for m in metrics),
    )
    _write_csv(
        out_dir / CLIENTS_FILENAME,
        CLIENTS_HEADER,
        ([m.round, c.client_id, c.sigma_raw, c.sigma_norm, c.flagged] for m in metrics for c in m.clients),
    )
    if config is not None and config.dump_weights:
        _write_csv(
            out_dir / WEIGHTS_FILENAME,
            WEIGHTS_HEADER,
            (
                [m.round, client_id, m.weights.w_orig[client_id], m.weights.r_norm[client_id], w_final]
                for m in metrics
                if m.weights is not None
                for client_id, w_final in sorted(m.weights.w_final.items())
            ),
        )

    sidecar = {
        "version": __version__,
        "config": config.to_dict() if config is not None else None,
        "rounds": [_round_to_dict(m) for m in metrics],
    }
    (out_dir / SIDECAR_FILENAME).write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info("Wrote %d rounds to %s", len(metrics), out_dir)
    return out_dir


def read_report(path: Union[str, Path]) -> Tuple[Optional[SimulationConfig], List[RoundMetrics]]:
    """Loads the configuration and round metrics written by :func:`write_report`."""
    sidecar_path = Path(path) / SIDECAR_FILENAME
    try:
        sidecar = json.loads(sidecar_path.read_text(encoding="utf-8"))
        config = SimulationConfig.from_dict(sidecar["config"]) if sidecar.get("config") is not None else None
        rounds = [_round_from_dict(values) for values in sidecar["rounds"]]
    except (json.JSONDecodeError, KeyError, TypeError, IndexError) as err:
        raise DataFormatError(f"'{sidecar_path}' is not a valid run file: {err}") from err
    return config, rounds


def read_metrics_csv(path: Union[str, Path]) -> List[Dict[str, Optional[float]]]:
    """Reads ``metrics.csv`` back into dicts; empty cells become None."""
    with open(Path(path) / METRICS_FILENAME, newline="", encoding="utf-8") as f:
        return [
            {key: (float(value) if value != "" else None) for key, value in row.items()} for row in csv.DictReader(f)
        ]
