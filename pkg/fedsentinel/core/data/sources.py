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
"""Resolves a data source string into a (train, test) pair.

Supported sources:
    idx:<dir>                 MNIST file names inside <dir>, plain or gzip-compressed
    synthetic:<n>,<d>,<C>     make_synthetic(n, d, C, seed) with a held-out test split
"""

import logging
from pathlib import Path
from typing import Optional, Tuple

from fedsentinel.exceptions import ConfigurationError, DataFormatError, UnknownTypeError

from .dataset import Dataset
from .idx import load_idx
from .synthetic import make_synthetic, train_test_split

logger = logging.getLogger(__name__)

SCHEMES = ["idx", "synthetic"]

MNIST_TRAIN_FILES = ("train-images-idx3-ubyte", "train-labels-idx1-ubyte")
MNIST_TEST_FILES = ("t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte")


def parse_source(source: str) -> Tuple[str, str]:
    """Splits '<scheme>:<argument>' and checks the scheme."""
    scheme, sep, argument = source.partition(":")
    if not sep or not argument:
        raise ConfigurationError(f"Data source '{source}' must look like 'idx:<dir>' or 'synthetic:<n>,<d>,<C>'")
    if scheme not in SCHEMES:
        raise UnknownTypeError(f"Unknown data source scheme: {scheme}. It should be one of {SCHEMES}")
    return scheme, argument


def parse_synthetic_args(argument: str) -> Tuple[int, int, int]:
    try:
        n_samples, n_features, num_classes = (int(part) for part in argument.split(","))
    except ValueError as err:
        raise ConfigurationError(f"Expected 'synthetic:<n>,<d>,<C>', got 'synthetic:{argument}'") from err
    if min(n_samples, n_features, num_classes) <= 0:
        raise ConfigurationError(f"Synthetic dimensions must be positive, got {argument}")
    return n_samples, n_features, num_classes


def _find_file(directory: Path, name: str) -> Optional[Path]:
    for candidate in (directory / name, directory / f"{name}.gz"):
        if candidate.exists():
            return candidate
    # some mirrors ship 'train-images.idx3-ubyte'
    dotted = directory / name.replace("-idx", ".idx")
    if dotted.exists():
        return dotted
    return None


def _load_idx_dir(directory: Path) -> Tuple[Dataset, Dataset]:
    if not directory.is_dir():
        raise DataFormatError(f"IDX data directory '{directory}' does not exist")
    paths = []
    for name in (*MNIST_TRAIN_FILES, *MNIST_TEST_FILES):
        path = _find_file(directory, name)
        if path is None:
            raise DataFormatError(f"'{directory / name}' (or '.gz') not found")
        paths.append(path)
    train = load_idx(paths[0], paths[1])
    test = load_idx(paths[2], paths[3], num_classes=train.num_classes)
    return train, test


def load_source(source: str, seed: int, test_fraction: float = 0.2) -> Tuple[Dataset, Dataset]:
    """Loads the train and test sets named by ``source``.

    The IDX scheme uses the standard MNIST test split; the synthetic scheme holds out ``test_fraction`` of
    the generated samples.
    """
    scheme, argument = parse_source(source)
    if scheme == "idx":
        train, test = _load_idx_dir(Path(argument).expanduser())
    else:
        n_samples, n_features, num_classes = parse_synthetic_args(argument)
        train, test = train_test_split(make_synthetic(n_samples, n_features, num_classes, seed), test_fraction, seed)
    logger.info("Data source '%s': %d train / %d test samples", source, len(train), len(test))
    return train, test
