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
"""Round-loop orchestration.

A :class:`Simulation` resolves data, model and clients from a :class:`SimulationConfig`, composes the
round's stages into a graph and runs the graph once per round through an executor.
"""

import logging
import math
from dataclasses import replace
from typing import FrozenSet, List, Optional, Sequence

import numpy as np

from fedsentinel.exceptions import ConfigurationError
from fedsentinel.utils.seeding import (
    DATA_STREAM,
    INIT_STREAM,
    PARTITION_STREAM,
    POISON_STREAM,
    SELECTION_STREAM,
    derive_seed,
)

from .aggregation import AggregatorFactory
from .attacks import AttackKind
from .config import SimulationConfig
from .data import Dataset, heterogeneity, load_source, partition_dirichlet, poison_labels
from .executors import ExecutorFactory
from .graphs import Graph, GraphFactory
from .metrics import RoundMetrics
from .nn import ModelSpec, init_params
from .stages import (
    AggregationStage,
    AttackStage,
    BroadcastStage,
    DetectionStage,
    EvaluationStage,
    LocalTrainingStage,
    ScoringStage,
)
from .state import Client, SimulationState

logger = logging.getLogger(__name__)


def select_malicious(n: int, fraction: float, seed: int) -> FrozenSet[int]:
    """Draws round-half-up(n * fraction) distinct client ids uniformly at random."""
    if not 0.0 <= fraction <= 1.0:
        raise ConfigurationError(f"Malicious fraction must lie in [0, 1], got {fraction}")
    count = int(math.floor(n * fraction + 0.5))
    if count == 0:
        return frozenset()
    chosen = np.random.default_rng(seed).choice(n, size=count, replace=False)
    return frozenset(int(client_id) for client_id in chosen)


def resolve_model(config: SimulationConfig, train: Dataset) -> ModelSpec:
    if config.model is None:
        return ModelSpec.from_dims(train.num_features, config.resolved_hidden_layers(), train.num_classes)
    if config.model.num_features != train.num_features or config.model.num_classes != train.num_classes:
        raise ConfigurationError(
            f"Model {list(config.model.layer_sizes)} does not fit data with {train.num_features} features and "
            f"{train.num_classes} classes"
        )
    return config.model


def _aggregator_params(config: SimulationConfig):
    if config.defense == "trimmean":
        return {"beta": config.trim_beta}
    if config.defense == "confidence":
        return {"reweight": config.reweight, "single_length_weighting": config.single_length_weighting}
    return {}


class Simulation:
    """One federated run: data, clients, malicious cohort and the per-round stage graph."""

    def __init__(
        self, config: SimulationConfig, train: Optional[Dataset] = None, test: Optional[Dataset] = None
    ):
        config.validate()
        self._config = config
        if train is None or test is None:
            train, test = load_source(config.data, derive_seed(config.seed, DATA_STREAM), config.test_fraction)
        self._train = train
        self._test = test
        self._model = resolve_model(config, train)
        self._confidence = replace(config.confidence, num_classes=train.num_classes)
        self._truth = select_malicious(
            config.n_clients, config.malicious_fraction, derive_seed(config.seed, SELECTION_STREAM)
        )
        self._clients = self._build_clients()
        self._aggregator = AggregatorFactory.create(config.defense, _aggregator_params(config))
        self._graph = self.compose()

    @property
    def config(self) -> SimulationConfig:
        return self._config

    @property
    def model(self) -> ModelSpec:
        return self._model

    @property
    def clients(self) -> Sequence[Client]:
        return self._clients

    @property
    def malicious_ids(self) -> FrozenSet[int]:
        return self._truth

    @property
    def graph(self) -> Graph:
        return self._graph

    def _build_clients(self) -> List[Client]:
        config = self._config
        partition_seed = derive_seed(config.seed, PARTITION_STREAM, config.partition.seed)
        partitions = partition_dirichlet(self._train, replace(config.partition, seed=partition_seed))
        logger.info(
            "%d clients, %d malicious %s, heterogeneity %.3f",
            config.n_clients,
            len(self._truth),
            sorted(self._truth),
            heterogeneity(self._train, partitions),
        )
        clients = []
        for client_id, indices in enumerate(partitions):
            dataset = self._train.subset(indices)
            if config.attack.kind is AttackKind.LABEL_SHUFFLE and client_id in self._truth:
                dataset = poison_labels(
                    dataset, derive_seed(config.seed, POISON_STREAM, client_id), config.label_shuffle_mode
                )
            clients.append(Client(client_id, dataset))
        return clients

    def compose(self) -> Graph:
        """Wires the round's stages together. Detection is only part of the graph for defenses that use it."""
        config = self._config
        graph = GraphFactory.create(GraphFactory.DEFAULT)

        broadcast = BroadcastStage()
        training = LocalTrainingStage(self._clients, config.train, config.seed)
        attack = AttackStage(self._truth, config.attack)
        scoring = ScoringStage(self._clients, self._confidence)
        aggregation = AggregationStage(self._aggregator)
        evaluation = EvaluationStage(self._test, self._truth, set(config.evaluation_rounds))

        graph.add_flow(broadcast, training, {"global_params": {"global_params"}})
        graph.add_flow(training, attack, {"benign_updates": {"benign_updates"}})
        graph.add_flow(attack, scoring, {"submitted_updates": {"submitted_updates"}})
        graph.add_flow(scoring, aggregation, {"reports": {"reports"}, "scores": {"scores"}})
        graph.add_flow(scoring, evaluation, {"scores": {"scores"}})
        if self._aggregator.uses_detection:
            detection = DetectionStage(config.gap_threshold, config.raw_gap_threshold)
            graph.add_flow(scoring, detection, {"scores": {"scores"}})
            graph.add_flow(detection, aggregation, {"outcome": {"outcome"}})
            graph.add_flow(detection, evaluation, {"outcome": {"outcome"}})
        graph.add_flow(aggregation, evaluation, {"result": {"result"}})
        return graph

    def run(self) -> List[RoundMetrics]:
        config = self._config
        state = SimulationState(init_params(self._model, derive_seed(config.seed, INIT_STREAM)))
        executor_params = {"max_workers": config.max_workers} if config.executor == "multi_threaded_executor" else {}
        with ExecutorFactory.create(config.executor, self._graph, executor_params) as executor:
            for round_index in range(1, config.rounds + 1):
                executor.run_round(round_index, state)
        return state.history


def run(config: SimulationConfig) -> List[RoundMetrics]:
    """Runs a full simulation and returns one RoundMetrics per round."""
    return Simulation(config).run()
