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
"""Deterministic MLP engine: forward pass, per-sample cross-entropy, backprop and local SGD.

All functions are pure. Randomness only enters through explicit seeds (``init_params`` and the
per-epoch shuffle in ``train_local``).
"""

from typing import List, Tuple

import numpy as np

from fedsentinel.core.data.dataset import Dataset
from fedsentinel.exceptions import ShapeError, ValidationError

from .model_spec import ModelSpec, ParamVector, TrainConfig

PROB_EPSILON = 1e-7
EVAL_CHUNK_SIZE = 4096


def init_params(spec: ModelSpec, seed: int) -> ParamVector:
    """Draws weights and biases uniformly from [-1/sqrt(fan_in), 1/sqrt(fan_in)] per layer."""
    rng = np.random.default_rng(seed)
    chunks = []
    for fan_in, fan_out in spec.layer_shapes:
        bound = 1.0 / np.sqrt(fan_in)
        chunks.append(rng.uniform(-bound, bound, size=fan_in * fan_out))
        chunks.append(rng.uniform(-bound, bound, size=fan_out))
    return ParamVector(np.concatenate(chunks), spec)


def _check_inputs(spec: ModelSpec, inputs: np.ndarray) -> np.ndarray:
    inputs = np.asarray(inputs, dtype=np.float64)
    if inputs.ndim == 1:
        inputs = inputs.reshape(1, -1)
    if inputs.ndim != 2 or inputs.shape[1] != spec.num_features:
        raise ShapeError(f"Expected inputs with {spec.num_features} features, got shape {inputs.shape}")
    return inputs


def _check_labels(spec: ModelSpec, labels: np.ndarray, num_rows: int) -> np.ndarray:
    labels = np.asarray(labels).reshape(-1)
    if labels.size != num_rows:
        raise ShapeError(f"{num_rows} input rows but {labels.size} labels")
    if labels.size and (labels.min() < 0 or labels.max() >= spec.num_classes):
        raise ValidationError(f"Labels must lie in [0, {spec.num_classes})")
    return labels.astype(np.int64)


def _require_spec(params: ParamVector) -> ModelSpec:
    if params.spec is None:
        raise ShapeError("The parameter vector is not bound to a ModelSpec")
    return params.spec


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def _forward_trace(
    layers: List[Tuple[np.ndarray, np.ndarray]], inputs: np.ndarray
) -> Tuple[List[np.ndarray], List[np.ndarray], np.ndarray]:
    """Runs the network and keeps what backprop needs.

    Returns the layer inputs (activations), the hidden pre-activations and the output probabilities.
    """
    activations = [inputs]
    pre_activations = []
    out = inputs
    for index, (weight, bias) in enumerate(layers):
        z = out @ weight + bias
        if index < len(layers) - 1:
            pre_activations.append(z)
            out = np.maximum(z, 0.0)
            activations.append(out)
        else:
            out = z
    return activations, pre_activations, _softmax(out)


def forward(params: ParamVector, inputs: np.ndarray) -> np.ndarray:
    """Returns one row of class probabilities per input row."""
    spec = _require_spec(params)
    inputs = _check_inputs(spec, inputs)
    _, _, probs = _forward_trace(params.layers(), inputs)
    return probs


def predict(params: ParamVector, inputs: np.ndarray) -> np.ndarray:
    """Returns the argmax class of every row (ties go to the lowest class index)."""
    return np.argmax(forward(params, inputs), axis=1)


def per_sample_loss(params: ParamVector, inputs: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Cross-entropy -log p[label] of every sample, not averaged.

    Probabilities are clamped to [1e-7, 1 - 1e-7] before the log so every loss is finite.
    """
    spec = _require_spec(params)
    inputs = _check_inputs(spec, inputs)
    labels = _check_labels(spec, labels, inputs.shape[0])
    probs = forward(params, inputs)
    picked = np.clip(probs[np.arange(labels.size), labels], PROB_EPSILON, 1.0 - PROB_EPSILON)
    return -np.log(picked)


def dataset_losses(params: ParamVector, dataset: Dataset) -> np.ndarray:
    """per_sample_loss over a whole dataset, evaluated in chunks."""
    if len(dataset) == 0:
        raise ValidationError("Cannot compute losses on an empty dataset")
    chunks = []
    for start in range(0, len(dataset), EVAL_CHUNK_SIZE):
        stop = start + EVAL_CHUNK_SIZE
        chunks.append(per_sample_loss(params, dataset.features[start:stop], dataset.labels[start:stop]))
    return np.concatenate(chunks)


def _flat_gradient(layers: List[Tuple[np.ndarray, np.ndarray]], inputs: np.ndarray, labels: np.ndarray) -> np.ndarray:
    activations, pre_activations, probs = _forward_trace(layers, inputs)
    delta = probs
    delta[np.arange(labels.size), labels] -= 1.0
    delta /= labels.size

    grads: List[np.ndarray] = [np.empty(0)] * (2 * len(layers))
    for index in range(len(layers) - 1, -1, -1):
        weight, _ = layers[index]
        grads[2 * index] = (activations[index].T @ delta).reshape(-1)
        grads[2 * index + 1] = delta.sum(axis=0)
        if index > 0:
            delta = (delta @ weight.T) * (pre_activations[index - 1] > 0)
    return np.concatenate(grads)


def gradient(params: ParamVector, inputs: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Gradient of the batch-mean softmax cross-entropy with respect to the flat parameters."""
    spec = _require_spec(params)
    inputs = _check_inputs(spec, inputs)
    labels = _check_labels(spec, labels, inputs.shape[0])
    return _flat_gradient(params.layers(), inputs, labels)


def train_local(params: ParamVector, dataset: Dataset, cfg: TrainConfig) -> ParamVector:
    """Runs ``cfg.epochs`` epochs of minibatch SGD starting from ``params``.

    The sample order is reshuffled every epoch with a generator seeded by ``cfg.seed``; the last batch
    of an epoch may be partial. Weight decay is added to the gradient as ``weight_decay * w`` so the loss
    itself stays pure cross-entropy.
    """
    spec = _require_spec(params)
    if len(dataset) == 0:
        raise ValidationError("Cannot train on an empty dataset")
    if dataset.num_features != spec.num_features:
        raise ShapeError(f"Dataset has {dataset.num_features} features, model expects {spec.num_features}")
    _check_labels(spec, dataset.labels, len(dataset))

    rng = np.random.default_rng(cfg.seed)
    values = np.array(params.values, dtype=np.float64)
    # views into `values`, updated in place by the SGD step
    layers = spec.unflatten(values)
    features = dataset.features
    labels = dataset.labels
    num_samples = len(dataset)

    for _ in range(cfg.epochs):
        order = rng.permutation(num_samples)
        for start in range(0, num_samples, cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            grad = _flat_gradient(layers, np.asarray(features[batch], dtype=np.float64), labels[batch])
            if cfg.weight_decay:
                grad += cfg.weight_decay * values
            values -= cfg.learning_rate * grad

    return ParamVector(values, spec)


def evaluate(params: ParamVector, test_set: Dataset) -> float:
    """Fraction of argmax-correct predictions on ``test_set``."""
    if len(test_set) == 0:
        raise ValidationError("Cannot evaluate on an empty test set")
    correct = 0
    for start in range(0, len(test_set), EVAL_CHUNK_SIZE):
        stop = start + EVAL_CHUNK_SIZE
        correct += int(np.sum(predict(params, test_set.features[start:stop]) == test_set.labels[start:stop]))
    return correct / len(test_set)
