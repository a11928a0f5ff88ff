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
"""The stages of one federated round.

    Broadcast -> LocalTraining -> Attack -> Scoring -> [Detection] -> Aggregation -> Evaluation

Only the attack and evaluation stages know which clients are malicious; everything between them sees
client reports alone.
"""

from dataclasses import replace
from typing import AbstractSet, Dict, List, Optional, Sequence

from fedsentinel.utils.seeding import TRAIN_STREAM, derive_seed

from .aggregation import AggregationResult, Aggregator, ClientReport
from .attacks import AttackConfig, apply_attack
from .confidence import ConfidenceConfig, ScoreSet, client_confidence, normalize_scores
from .data import Dataset
from .detection import DEFAULT_RAW_GAP_THRESHOLD, DetectionOutcome, detect_scores, detection_metrics
from .io_context import InputContext, OutputContext, RoundContext
from .metrics import ClientTrace, RoundMetrics
from .nn import ParamVector, TrainConfig, dataset_losses, evaluate, train_local
from .stage import Stage, input, output
from .state import Client


@output("global_params", ParamVector)
class BroadcastStage(Stage):
    def compute(self, op_input: InputContext, op_output: OutputContext, context: RoundContext):
        op_output.set(context.state.global_params, "global_params")


@input("global_params", ParamVector)
@output("benign_updates", Dict[int, ParamVector])
class LocalTrainingStage(Stage):
    """Every client runs local SGD from the broadcast model with its own per-round seed."""

    def __init__(self, clients: Sequence[Client], train: TrainConfig, seed: int):
        self._clients = sorted(clients, key=lambda client: client.client_id)
        self._train = train
        self._seed = seed
        super().__init__()

    def compute(self, op_input: InputContext, op_output: OutputContext, context: RoundContext):
        global_params = op_input.get("global_params")

        def train_client(client: Client) -> ParamVector:
            seed = derive_seed(self._seed, TRAIN_STREAM, context.round_index, client.client_id)
            return train_local(global_params, client.dataset, replace(self._train, seed=seed))

        updates = context.map(train_client, self._clients)
        op_output.set({client.client_id: update for client, update in zip(self._clients, updates)})


@input("benign_updates", Dict[int, ParamVector])
@output("submitted_updates", Dict[int, ParamVector])
class AttackStage(Stage):
    def __init__(self, truth: AbstractSet[int], attack: AttackConfig):
        self._truth = frozenset(truth)
        self._attack = attack
        super().__init__()

    def compute(self, op_input: InputContext, op_output: OutputContext, context: RoundContext):
        op_output.set(apply_attack(op_input.get(), self._truth, self._attack))


@input("submitted_updates", Dict[int, ParamVector])
@output("reports", List[ClientReport])
@output("scores", ScoreSet)
class ScoringStage(Stage):
    """Measures each client's confidence by running its submitted model on its own training data."""

    def __init__(self, clients: Sequence[Client], confidence: ConfidenceConfig):
        self._clients = sorted(clients, key=lambda client: client.client_id)
        self._confidence = confidence
        super().__init__()

    def compute(self, op_input: InputContext, op_output: OutputContext, context: RoundContext):
        submitted = op_input.get()

        def score_client(client: Client) -> ClientReport:
            params = submitted[client.client_id]
            sigma = client_confidence(dataset_losses(params, client.dataset), self._confidence)
            return ClientReport(client.client_id, params, sigma, client.data_length)

        reports = context.map(score_client, self._clients)
        op_output.set(reports, "reports")
        op_output.set(normalize_scores({report.client_id: report.sigma_raw for report in reports}), "scores")


@input("scores", ScoreSet)
@output("outcome", DetectionOutcome)
class DetectionStage(Stage):
    def __init__(self, gap_threshold: float, raw_gap_threshold: float = DEFAULT_RAW_GAP_THRESHOLD):
        self._gap_threshold = gap_threshold
        self._raw_gap_threshold = raw_gap_threshold
        super().__init__()

    def compute(self, op_input: InputContext, op_output: OutputContext, context: RoundContext):
        outcome = detect_scores(op_input.get(), self._gap_threshold, raw_gap_threshold=self._raw_gap_threshold)
        op_output.set(outcome)


@input("reports", List[ClientReport])
@input("scores", ScoreSet)
@input("outcome", DetectionOutcome, optional=True)
@output("result", AggregationResult)
class AggregationStage(Stage):
    def __init__(self, aggregator: Aggregator):
        self._aggregator = aggregator
        super().__init__()

    @property
    def aggregator(self) -> Aggregator:
        return self._aggregator

    def compute(self, op_input: InputContext, op_output: OutputContext, context: RoundContext):
        result = self._aggregator.aggregate(
            op_input.get("reports"), context.state.global_params, op_input.get("outcome"), op_input.get("scores")
        )
        op_output.set(result)


@input("result", AggregationResult)
@input("scores", ScoreSet)
@input("outcome", DetectionOutcome, optional=True)
class EvaluationStage(Stage):
    """Installs the new global model and records the round's metrics."""

    def __init__(self, test_set: Dataset, truth: AbstractSet[int], evaluation_rounds: AbstractSet[int]):
        self._test_set = test_set
        self._truth = frozenset(truth)
        self._evaluation_rounds = frozenset(evaluation_rounds)
        super().__init__()

    def compute(self, op_input: InputContext, op_output: OutputContext, context: RoundContext):
        result: AggregationResult = op_input.get("result")
        scores: ScoreSet = op_input.get("scores")
        outcome: Optional[DetectionOutcome] = op_input.get("outcome")

        context.state.global_params = result.params
        accuracy = None
        if context.round_index in self._evaluation_rounds:
            accuracy = evaluate(result.params, self._test_set)

        if outcome is not None:
            tpr, fpr = detection_metrics(outcome, self._truth)
            honest_count = len(outcome.honest)
        else:
            tpr = fpr = None
            honest_count = len(scores.raw)
        traces = [
            ClientTrace(
                client_id,
                scores.raw[client_id],
                scores.normalized[client_id],
                outcome is not None and outcome.is_flagged(client_id),
            )
            for client_id in sorted(scores.raw)
        ]
        metrics = RoundMetrics(
            context.round_index, accuracy, tpr, fpr, honest_count, traces, result.weights, result.fallback
        )
        context.state.history.append(metrics)
        self._logger.info(
            "round %d: accuracy=%s tpr=%s fpr=%s honest=%d",
            metrics.round,
            _fmt(accuracy),
            _fmt(tpr),
            _fmt(fpr),
            honest_count,
        )


def _fmt(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.4f}"
