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
from argparse import ArgumentParser, HelpFormatter, Namespace, _SubParsersAction
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, List

from fedsentinel.core.aggregation import AggregatorFactory
from fedsentinel.core.attacks import ATTACK_NAMES, AttackConfig, AttackKind, Knowledge
from fedsentinel.core.config import DEFAULT_PROFILE, PROFILES, RuntimeEnv, SimulationConfig
from fedsentinel.core.data import LABEL_SHUFFLE_MODES
from fedsentinel.core.executors import ExecutorFactory
from fedsentinel.core.metrics import final_accuracy, mean_detection
from fedsentinel.core.report import write_report
from fedsentinel.core.simulator import Simulation
from fedsentinel.utils import argparse_types

logger = logging.getLogger(__name__)

TRAIN_OPTIONS = (
    ("epochs", "epochs"),
    ("batch_size", "batch_size"),
    ("lr", "learning_rate"),
    ("weight_decay", "weight_decay"),
)


def add_simulation_arguments(parser: ArgumentParser):
    """Options shared by `run` and `sweep`. Unset options keep the profile's value."""
    env = RuntimeEnv()

    parser.add_argument("--profile", choices=sorted(PROFILES), default=DEFAULT_PROFILE, help="Base profile")
    parser.add_argument("--clients", type=argparse_types.positive_int, help="Number of clients")
    parser.add_argument("--rounds", type=argparse_types.positive_int, help="Number of federated rounds")
    parser.add_argument("--epochs", type=argparse_types.positive_int, help="Local epochs per round")
    parser.add_argument("--batch-size", dest="batch_size", type=argparse_types.positive_int, help="SGD batch size")
    parser.add_argument("--lr", type=argparse_types.positive_float, help="Local learning rate")
    parser.add_argument("--weight-decay", dest="weight_decay", type=float, help="L2 weight decay")
    parser.add_argument("--hidden", type=argparse_types.comma_separated(int), help="Hidden layer sizes, e.g. 512")
    parser.add_argument("--lambda", dest="lam", type=argparse_types.positive_float, help="Confidence lambda")
    parser.add_argument("--z", type=float, help="LIE coefficient (default: 1.5)")
    parser.add_argument(
        "--gamma-tol", dest="gamma_tol", type=argparse_types.positive_float, help="Min-Max/Min-Sum search tolerance"
    )
    parser.add_argument(
        "--gap-threshold", dest="gap_threshold", type=float, help="Minimum centroid gap on normalized scores"
    )
    parser.add_argument(
        "--raw-gap-threshold",
        dest="raw_gap_threshold",
        type=float,
        help="Minimum centroid gap in confidence units (0 disables)",
    )
    parser.add_argument("--trim-beta", dest="trim_beta", type=float, help="TrimMean fraction per side")
    parser.add_argument(
        "--no-reweight", dest="reweight", action="store_false", default=True, help="Uniform weights over honest clients"
    )
    parser.add_argument(
        "--single-length-weighting",
        dest="single_length_weighting",
        action="store_true",
        default=False,
        help="Count data length once in the confidence aggregate",
    )
    parser.add_argument(
        "--label-shuffle-mode", dest="label_shuffle_mode", choices=LABEL_SHUFFLE_MODES, help="Label poisoning variant"
    )
    parser.add_argument("--eval-every", dest="eval_every", type=argparse_types.positive_int, help="Evaluation period")
    parser.add_argument("--seed", type=int, default=0, help="Run seed")
    parser.add_argument("--data", default=env.data, help="Data source: idx:<dir> or synthetic:<n>,<d>,<C>")
    parser.add_argument("--out", default=env.out, help="Output directory")
    parser.add_argument("--executor", choices=ExecutorFactory.NAMES, default=env.executor, help="Round executor")
    parser.add_argument("--workers", dest="max_workers", type=argparse_types.positive_int, help="Threads")
    parser.add_argument(
        "--dump-weights", dest="dump_weights", action="store_true", default=False, help="Write weights.csv"
    )


def create_run_parser(subparser: _SubParsersAction, command: str, parents: List[ArgumentParser]) -> ArgumentParser:
    parser: ArgumentParser = subparser.add_parser(
        command, formatter_class=HelpFormatter, parents=parents, add_help=False, help="Run one simulation"
    )
    parser.add_argument("--defense", choices=AggregatorFactory.NAMES, default=AggregatorFactory.DEFAULT)
    parser.add_argument("--attack", choices=ATTACK_NAMES, default="none")
    parser.add_argument("--knowledge", choices=[k.value for k in Knowledge], default=Knowledge.FULL.value)
    parser.add_argument("--fraction", type=argparse_types.valid_fraction, default=0.0, help="Malicious fraction")
    parser.add_argument("--alpha", type=argparse_types.positive_float, help="Dirichlet concentration")
    add_simulation_arguments(parser)
    return parser


def config_from_args(args: Namespace, **cell: Any) -> SimulationConfig:
    """Builds a SimulationConfig from a profile and the parsed options.

    ``cell`` supplies (or overrides) defense, attack, knowledge, fraction and alpha, as the sweep does per cell.
    """
    values: Dict[str, Any] = {
        key: getattr(args, key, None) for key in ("defense", "attack", "knowledge", "fraction", "alpha")
    }
    values.update(cell)

    base = SimulationConfig.from_profile(args.profile)
    train = base.train
    for option, name in TRAIN_OPTIONS:
        if getattr(args, option, None) is not None:
            train = replace(train, **{name: getattr(args, option)})
    partition = base.partition
    if values["alpha"] is not None:
        partition = replace(partition, alpha=values["alpha"])
    confidence = base.confidence if args.lam is None else replace(base.confidence, lam=args.lam)

    attack = AttackConfig(
        kind=AttackKind.parse(values["attack"]),
        knowledge=Knowledge.parse(values["knowledge"]),
        z=base.attack.z if args.z is None else args.z,
        gamma_tol=base.attack.gamma_tol if args.gamma_tol is None else args.gamma_tol,
        seed=args.seed,
    )

    overrides: Dict[str, Any] = {
        "defense": values["defense"],
        "malicious_fraction": values["fraction"],
        "attack": attack,
        "train": train,
        "partition": partition,
        "confidence": confidence,
        "seed": args.seed,
        "data": args.data,
        "executor": args.executor,
        "max_workers": args.max_workers,
        "dump_weights": args.dump_weights,
        "reweight": args.reweight,
        "single_length_weighting": args.single_length_weighting,
    }
    if args.clients is not None:
        overrides["n_clients"] = args.clients
    for option in ("rounds", "eval_every", "gap_threshold", "raw_gap_threshold", "trim_beta", "label_shuffle_mode"):
        if getattr(args, option, None) is not None:
            overrides[option] = getattr(args, option)
    if args.hidden is not None:
        overrides["hidden_layers"] = tuple(args.hidden)
    return replace(base, **overrides)


def execute_run_command(args: Namespace):
    config = config_from_args(args)
    history = Simulation(config).run()
    out_dir = write_report(history, Path(args.out), config)

    tpr, fpr = mean_detection(history)
    accuracy = final_accuracy(history)
    logger.info(
        "Final accuracy %s%s; results in %s",
        "-" if accuracy is None else f"{accuracy:.4f}",
        "" if tpr is None else f", TPR {tpr:.3f} / FPR {fpr:.3f} over the last rounds",
        out_dir,
    )
