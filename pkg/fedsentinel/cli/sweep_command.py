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

import csv
import itertools
import logging
from argparse import ArgumentParser, HelpFormatter, Namespace, _SubParsersAction
from pathlib import Path
from typing import Any, Dict, List, Optional

from colorama import Fore, Style

from fedsentinel.core.aggregation import AggregatorFactory
from fedsentinel.core.attacks import AttackKind, Knowledge
from fedsentinel.core.data import load_source
from fedsentinel.core.metrics import final_accuracy, mean_detection
from fedsentinel.core.report import write_report
from fedsentinel.core.simulator import Simulation
from fedsentinel.utils import argparse_types
from fedsentinel.utils.seeding import DATA_STREAM, derive_seed

from .run_command import add_simulation_arguments, config_from_args

logger = logging.getLogger(__name__)
table_logger = logging.getLogger("fedsentinel_sweep")

SUMMARY_FILENAME = "summary.csv"
SUMMARY_HEADER = ["cell", "attack", "defense", "knowledge", "fraction", "alpha", "final_accuracy", "tpr", "fpr"]
DETECTION_WINDOW = 10


def create_sweep_parser(subparser: _SubParsersAction, command: str, parents: List[ArgumentParser]) -> ArgumentParser:
    parser: ArgumentParser = subparser.add_parser(
        command,
        formatter_class=HelpFormatter,
        parents=parents,
        add_help=False,
        help="Run every combination of fractions, attacks, defenses, knowledge modes and alphas",
    )
    parser.add_argument(
        "--fractions", type=argparse_types.comma_separated(argparse_types.valid_fraction), default=[0.25, 0.5, 0.75]
    )
    parser.add_argument("--attacks", type=argparse_types.comma_separated(str), default=["ls", "lie", "mm", "ms"])
    parser.add_argument("--defenses", type=argparse_types.comma_separated(str), default=list(AggregatorFactory.NAMES))
    parser.add_argument("--knowledge", type=argparse_types.comma_separated(str), default=[Knowledge.FULL.value])
    parser.add_argument(
        "--alphas",
        type=argparse_types.comma_separated(argparse_types.positive_float),
        default=None,
        help="Dirichlet concentrations (default: the profile's)",
    )
    add_simulation_arguments(parser)
    return parser


def sweep_cells(args: Namespace) -> List[Dict[str, Any]]:
    """The sweep grid. Knowledge only varies for model-poisoning attacks."""
    for name in args.attacks:
        AttackKind.parse(name)
    for name in args.knowledge:
        Knowledge.parse(name)
    cells = []
    alphas: List[Optional[float]] = args.alphas or [None]
    for alpha, fraction, attack, defense in itertools.product(alphas, args.fractions, args.attacks, args.defenses):
        knowledge_modes = args.knowledge if AttackKind.parse(attack).poisons_model else args.knowledge[:1]
        for knowledge in knowledge_modes:
            cells.append(
                {"defense": defense, "attack": attack, "knowledge": knowledge, "fraction": fraction, "alpha": alpha}
            )
    return cells


def cell_name(cell: Dict[str, Any]) -> str:
    name = f"{cell['attack']}-{cell['defense']}-f{cell['fraction']:g}-{cell['knowledge']}"
    if cell["alpha"] is not None:
        name += f"-a{cell['alpha']:g}"
    return name


def _colored(value: Optional[float], good: float, fair: float, higher_is_better: bool = True) -> str:
    if value is None:
        return f"{'-':>8}"
    score = value if higher_is_better else -value
    good, fair = (good, fair) if higher_is_better else (-good, -fair)
    color = Fore.GREEN if score >= good else Fore.YELLOW if score >= fair else Fore.RED
    return color + f"{value:8.4f}" + Style.RESET_ALL


def print_summary(rows: List[Dict[str, Any]]):
    width = max([len(row["cell"]) for row in rows] + [4])
    table_logger.info(Style.BRIGHT + f"{'cell':<{width}}  {'accuracy':>8}  {'tpr':>8}  {'fpr':>8}" + Style.RESET_ALL)
    for row in rows:
        table_logger.info(
            f"{row['cell']:<{width}}  {_colored(row['final_accuracy'], 0.9, 0.7)}  "
            f"{_colored(row['tpr'], 0.9, 0.5)}  {_colored(row['fpr'], 0.1, 0.3, higher_is_better=False)}"
        )


def execute_sweep_command(args: Namespace):
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    cells = sweep_cells(args)
    logger.info("Sweeping %d cells into %s", len(cells), out_dir)

    # every cell shares the seed, hence the data; load it once
    probe = config_from_args(args, **cells[0]) if cells else None
    train = test = None
    if probe is not None:
        probe.validate()
        train, test = load_source(probe.data, derive_seed(probe.seed, DATA_STREAM), probe.test_fraction)

    rows = []
    for index, cell in enumerate(cells, 1):
        name = cell_name(cell)
        logger.info("[%d/%d] %s", index, len(cells), name)
        config = config_from_args(args, **cell)
        history = Simulation(config, train, test).run()
        write_report(history, out_dir / name, config)
        tpr, fpr = mean_detection(history, DETECTION_WINDOW)
        rows.append(
            {
                "cell": name,
                **cell,
                "alpha": config.partition.alpha,
                "final_accuracy": final_accuracy(history),
                "tpr": tpr,
                "fpr": fpr,
            }
        )

    with open(out_dir / SUMMARY_FILENAME, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=SUMMARY_HEADER, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({key: "" if row[key] is None else row[key] for key in SUMMARY_HEADER})
    if rows:
        print_summary(rows)
