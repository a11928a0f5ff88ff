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

from abc import ABC, abstractmethod
from typing import Dict, Generator, Set

from fedsentinel.core.stage import Stage


class Graph(ABC):
    """Abstract class for the stage graph of a round."""

    @abstractmethod
    def add_flow(self, stage_u: Stage, stage_v: Stage, io_map: Dict[str, Set[str]]):
        """Add an edge to the graph.

        Args:
            stage_u (Stage): A source stage.
            stage_v (Stage): A destination stage.
            io_map (Dict[str, Set[str]]): A mapping from the source stage's output label to the destination
                                          stage's input label(s).
        """
        pass

    @abstractmethod
    def get_io_map(self, stage_u: Stage, stage_v: Stage) -> Dict[str, Set[str]]:
        pass

    @abstractmethod
    def is_root(self, stage: Stage) -> bool:
        pass

    @abstractmethod
    def is_leaf(self, stage: Stage) -> bool:
        pass

    @abstractmethod
    def get_stages(self) -> Generator[Stage, None, None]:
        pass

    @abstractmethod
    def gen_worklist(self) -> Generator[Stage, None, None]:
        """Stages in an order where every stage comes after all of its upstream stages."""
        pass

    @abstractmethod
    def gen_next_stages(self, stage: Stage) -> Generator[Stage, None, None]:
        pass
