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

from typing import Sequence

import numpy as np

# Independent random streams of a run, mixed into the run seed.
DATA_STREAM = 1
PARTITION_STREAM = 2
SELECTION_STREAM = 3
POISON_STREAM = 4
INIT_STREAM = 5
TRAIN_STREAM = 6


def derive_seed(seed: int, *keys: int) -> int:
    """Deterministic 32-bit seed for the stream identified by ``keys`` under ``seed``.

    >>> derive_seed(42, TRAIN_STREAM, 3, 7) == derive_seed(42, TRAIN_STREAM, 3, 7)
    True
    """
    entropy: Sequence[int] = [int(seed), *(int(key) for key in keys)]
    return int(np.random.SeedSequence(entropy).generate_state(1)[0])
