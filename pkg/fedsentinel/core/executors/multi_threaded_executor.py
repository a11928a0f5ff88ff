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

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, Iterable, List, Optional, TypeVar

from fedsentinel.core.datastore import Datastore
from fedsentinel.core.graphs import Graph

from .executor import Executor

T = TypeVar("T")
R = TypeVar("R")


class MultiThreadedExecutor(Executor):
    """Fans the client tasks of a round out to a thread pool.

    Stages still run one at a time; only ``map`` is concurrent. Results are gathered in input order, and every
    client task draws from its own seeded generator, so the output equals the single-process one.
    """

    def __init__(
        self, graph: Graph, datastore: Optional[Datastore] = None, max_workers: Optional[int] = None, **kwargs: Dict
    ):
        super().__init__(graph, datastore, **kwargs)
        self._max_workers = max_workers
        self._pool: Optional[ThreadPoolExecutor] = None

    def map(self, fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
        if self._pool is None:
            self._pool = ThreadPoolExecutor(max_workers=self._max_workers, thread_name_prefix="fedsentinel")
        return list(self._pool.map(fn, items))

    def shutdown(self):
        if self._pool is not None:
            self._pool.shutdown(wait=True)
            self._pool = None
