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
from abc import ABC, abstractmethod
from typing import TYPE_CHECKING, Callable, Dict, Iterable, List, Optional, TypeVar

from colorama import Fore

from fedsentinel.core.datastore import Datastore, MemoryDatastore
from fedsentinel.core.graphs import Graph
from fedsentinel.core.io_context import InputContext, OutputContext, RoundContext, round_prefix
from fedsentinel.exceptions import IOMappingError

if TYPE_CHECKING:
    from fedsentinel.core.state import SimulationState

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class Executor(ABC):
    """Runs the stage graph of a round and provides the per-client map used inside stages."""

    def __init__(self, graph: Graph, datastore: Optional[Datastore] = None, **kwargs: Dict):
        self._graph = graph
        self._datastore = datastore if datastore is not None else MemoryDatastore()

    @property
    def graph(self) -> Graph:
        return self._graph

    @property
    def datastore(self) -> Datastore:
        return self._datastore

    @abstractmethod
    def map(self, fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
        """Applies ``fn`` to every item; results keep the order of ``items``."""
        pass

    def shutdown(self):
        pass

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        self.shutdown()

    def run_round(self, round_index: int, state: "SimulationState"):
        """Executes every stage once, in topological order, then drops the round's intermediate values."""
        context = RoundContext(round_index, self._datastore, state, self.map)
        verbose = logger.isEnabledFor(logging.DEBUG)
        try:
            for stage in self._graph.gen_worklist():
                if verbose:
                    print(Fore.GREEN + f"Round {round_index}: " + Fore.YELLOW + stage.name + Fore.RESET)
                op_input = InputContext(context, stage)
                op_output = OutputContext(context, stage)
                stage.compute(op_input, op_output, context)

                for next_stage in self._graph.gen_next_stages(stage):
                    io_map = self._graph.get_io_map(stage, next_stage)
                    if not io_map:
                        raise IOMappingError(f"No IO mappings found for {stage.name} -> {next_stage.name}")
                    next_input = InputContext(context, next_stage)
                    for out_label, in_labels in io_map.items():
                        value = op_output.get(out_label)
                        for in_label in in_labels:
                            next_input.set(value, in_label)
        finally:
            self._datastore.clear_prefix(round_prefix(round_index))
