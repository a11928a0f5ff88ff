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

import numpy as np
import pytest


def test_dataset_validation():
    from fedsentinel.core.data import Dataset
    from fedsentinel.exceptions import ShapeError, ValidationError

    ds = Dataset(np.zeros((3, 2)), [0, 1, 1], 2)
    assert len(ds) == 3
    assert ds.num_features == 2
    assert ds.features.flags.writeable is False
    assert list(ds.class_histogram()) == [1, 2]

    with pytest.raises(ShapeError):
        Dataset(np.zeros(3), [0, 1, 1], 2)
    with pytest.raises(ShapeError):
        Dataset(np.zeros((3, 2)), [0, 1], 2)
    with pytest.raises(ValidationError):
        Dataset(np.zeros((3, 2)), [0, 1, 2], 2)


def test_dataset_subset_and_relabel(toy_dataset):
    subset = toy_dataset.subset([0, 2, 4])
    assert len(subset) == 3
    assert np.array_equal(subset.features[1], toy_dataset.features[2])

    relabelled = subset.with_labels([0, 0, 0])
    assert np.array_equal(relabelled.features, subset.features)
    assert list(relabelled.labels) == [0, 0, 0]


def test_make_synthetic():
    from fedsentinel.core.data import make_synthetic

    ds = make_synthetic(1000, 20, 4, 7)
    assert len(ds) == 1000
    assert ds.num_features == 20
    assert set(ds.labels.tolist()) == {0, 1, 2, 3}
    assert np.allclose(ds.features.mean(axis=0), 0.0)
    assert np.allclose(ds.features.std(axis=0), 1.0)

    again = make_synthetic(1000, 20, 4, 7)
    assert np.array_equal(ds.features, again.features)
    assert np.array_equal(ds.labels, again.labels)


def test_make_synthetic_is_learnable():
    from fedsentinel.core.data import make_synthetic, train_test_split
    from fedsentinel.core.nn import ModelSpec, TrainConfig, evaluate, init_params, train_local

    train, test = train_test_split(make_synthetic(1000, 20, 4, 7), 0.2, seed=0)
    spec = ModelSpec((20, 16, 4))
    trained = train_local(init_params(spec, 0), train, TrainConfig(epochs=30, learning_rate=0.05, weight_decay=0.0))
    assert evaluate(trained, test) > 0.5


def test_train_test_split(toy_dataset):
    from fedsentinel.core.data import train_test_split
    from fedsentinel.exceptions import ValidationError

    train, test = train_test_split(toy_dataset, 0.25, seed=1)
    assert (len(train), len(test)) == (300, 100)

    with pytest.raises(ValidationError):
        train_test_split(toy_dataset, 1.0, seed=1)


def _assert_disjoint_cover(partitions, size):
    merged = sorted(i for indices in partitions for i in indices)
    assert merged == list(range(size))


def test_partition_large_alpha_is_near_uniform(balanced_dataset):
    from fedsentinel.core.data import PartitionConfig, partition_dirichlet

    partitions = partition_dirichlet(balanced_dataset, PartitionConfig(n_clients=10, alpha=1e6, seed=3))
    _assert_disjoint_cover(partitions, len(balanced_dataset))
    for indices in partitions:
        assert indices == sorted(indices)
        hist = np.bincount(balanced_dataset.labels[indices], minlength=10)
        np.testing.assert_allclose(hist / hist.sum(), 0.1, rtol=0.05)


def test_partition_small_alpha_is_skewed(balanced_dataset):
    from fedsentinel.core.data import PartitionConfig, partition_dirichlet

    for seed in range(3):
        partitions = partition_dirichlet(balanced_dataset, PartitionConfig(n_clients=10, alpha=0.1, seed=seed))
        _assert_disjoint_cover(partitions, len(balanced_dataset))
        assert all(len(indices) >= 32 for indices in partitions)
        top_shares = [
            np.bincount(balanced_dataset.labels[indices], minlength=10).max() / len(indices) for indices in partitions
        ]
        assert max(top_shares) > 0.5


def test_heterogeneity_decreases_with_alpha(balanced_dataset):
    from fedsentinel.core.data import PartitionConfig, heterogeneity, partition_dirichlet

    values = [
        heterogeneity(balanced_dataset, partition_dirichlet(balanced_dataset, PartitionConfig(alpha=alpha, seed=0)))
        for alpha in (0.1, 1.0, 100.0)
    ]
    assert values[0] > values[1] > values[2]


def test_partition_impossible_minimum(toy_dataset):
    from fedsentinel.core.data import PartitionConfig, partition_dirichlet
    from fedsentinel.exceptions import ConfigurationError

    with pytest.raises(ConfigurationError):
        partition_dirichlet(toy_dataset, PartitionConfig(n_clients=20, min_samples_per_client=32))
    with pytest.raises(ConfigurationError):
        PartitionConfig(alpha=0.0)


def test_shuffle_labels_single_sample():
    from fedsentinel.core.data import Dataset, shuffle_labels

    ds = Dataset(np.ones((1, 3)), [2], 4)
    assert list(shuffle_labels(ds, seed=0).labels) == [2]


def test_shuffle_labels_fixed_points():
    from fedsentinel.core.data import Dataset, shuffle_labels

    rng = np.random.default_rng(0)
    ds = Dataset(rng.uniform(size=(1000, 2)), np.arange(1000) % 10, 10)
    shuffled = shuffle_labels(ds, seed=42)

    assert np.array_equal(shuffled.features, ds.features)
    assert np.array_equal(np.sort(shuffled.labels), np.sort(ds.labels))
    assert np.mean(shuffled.labels == ds.labels) == pytest.approx(0.1, abs=0.03)
    assert np.array_equal(shuffled.labels, shuffle_labels(ds, seed=42).labels)


def test_poison_labels_modes(toy_dataset):
    from fedsentinel.core.data import poison_labels, randomize_labels, shuffle_labels
    from fedsentinel.exceptions import UnknownTypeError

    assert np.array_equal(poison_labels(toy_dataset, 5).labels, shuffle_labels(toy_dataset, 5).labels)
    uniform = poison_labels(toy_dataset, 5, "uniform")
    assert np.array_equal(uniform.labels, randomize_labels(toy_dataset, 5).labels)
    assert uniform.labels.max() < toy_dataset.num_classes

    with pytest.raises(UnknownTypeError):
        poison_labels(toy_dataset, 5, "flip")


@pytest.mark.parametrize(
    "source, error",
    [
        ("synthetic", "ConfigurationError"),
        ("csv:/tmp/data", "UnknownTypeError"),
        ("synthetic:10,2", "ConfigurationError"),
        ("synthetic:10,0,2", "ConfigurationError"),
    ],
)
def test_load_source_invalid(source, error):
    from fedsentinel import exceptions
    from fedsentinel.core.data import load_source

    with pytest.raises(getattr(exceptions, error)):
        load_source(source, seed=0)


def test_load_source_synthetic():
    from fedsentinel.core.data import load_source

    train, test = load_source("synthetic:500,6,3", seed=1, test_fraction=0.2)
    assert (len(train), len(test)) == (400, 100)
    assert train.num_features == 6 and train.num_classes == 3


def test_load_source_idx_dir(tmp_path, toy_dataset):
    from fedsentinel.core.data import load_source, write_idx
    from fedsentinel.exceptions import DataFormatError

    write_idx(toy_dataset, tmp_path / "train-images-idx3-ubyte", tmp_path / "train-labels-idx1-ubyte", (2, 4))
    test = toy_dataset.subset(range(40))
    write_idx(test, tmp_path / "t10k-images-idx3-ubyte", tmp_path / "t10k-labels-idx1-ubyte", (2, 4))

    train, loaded_test = load_source(f"idx:{tmp_path}", seed=0)
    assert len(train) == len(toy_dataset)
    assert len(loaded_test) == 40
    assert train.num_features == 8
    assert np.array_equal(train.labels, toy_dataset.labels)

    (tmp_path / "t10k-labels-idx1-ubyte").unlink()
    with pytest.raises(DataFormatError, match="t10k-labels-idx1-ubyte"):
        load_source(f"idx:{tmp_path}", seed=0)
