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

from typing import Dict, Generator, Set

import networkx as nx
from networkx.algorithms.dag import topological_sort

from fedsentinel.core.stage import Stage
from fedsentinel.exceptions import IOMappingError

from .graph import Graph


class NetworkXGraph(Graph):
    """NetworkX graph implementation."""

    def __init__(self, **kwargs: Dict):
        self._graph = nx.DiGraph()

    def add_flow(self, stage_u: Stage, stage_v: Stage, io_map: Dict[str, Set[str]]):
        outputs = stage_u.stage_info.get_labels("output")
        inputs = stage_v.stage_info.get_labels("input")
        for out_label, in_labels in io_map.items():
            if out_label not in outputs:
                raise IOMappingError(f"{stage_u.name} has no output '{out_label}'")
            missing = set(in_labels) - inputs
            if missing:
                raise IOMappingError(f"{stage_v.name} has no input(s) {sorted(missing)}")
        self._graph.add_edge(stage_u, stage_v, io_map=io_map)
        if not nx.is_directed_acyclic_graph(self._graph):
            self._graph.remove_edge(stage_u, stage_v)
            raise IOMappingError(f"Flow {stage_u.name} -> {stage_v.name} would create a cycle")

    def get_io_map(self, stage_u: Stage, stage_v: Stage) -> Dict[str, Set[str]]:
        io_map: Dict[str, Set[str]] = self._graph.get_edge_data(stage_u, stage_v).get("io_map")
        return io_map

    def is_root(self, stage: Stage) -> bool:
        return bool(self._graph.in_degree(stage) == 0)

    def is_leaf(self, stage: Stage) -> bool:
        return bool(self._graph.out_degree(stage) == 0)

    def get_stages(self) -> Generator[Stage, None, None]:
        return (stage for stage in self._graph.nodes())

    def gen_worklist(self) -> Generator[Stage, None, None]:
        worklist: Generator[Stage, None, None] = topological_sort(self._graph)
        return worklist

    def gen_next_stages(self, stage: Stage) -> Generator[Stage, None, None]:
        for _, v in self._graph.out_edges(stage):
            yield v
