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

import threading
from types import SimpleNamespace
from typing import List

import pytest

from fedsentinel.core.stage import Stage, input, output


@output("numbers", List[int])
class SourceStage(Stage):
    def compute(self, op_input, op_output, context):
        op_output.set(list(range(context.round_index + 2)))


@input("numbers", List[int])
@output("squares", List[int])
class SquareStage(Stage):
    def compute(self, op_input, op_output, context):
        op_output.set(context.map(lambda x: x * x, op_input.get()))


@input("squares", List[int])
@input("offset", int, optional=True)
class SinkStage(Stage):
    def compute(self, op_input, op_output, context):
        offset = op_input.get("offset") or 0
        context.state.totals.append(sum(op_input.get("squares")) + offset)


@output("numbers", List[int])
class WrongTypeStage(Stage):
    def compute(self, op_input, op_output, context):
        op_output.set("not a list")


@output("offset", int)
class OffsetStage(Stage):
    def compute(self, op_input, op_output, context):
        op_output.set(100)


def _linear_graph():
    from fedsentinel.core.graphs import GraphFactory

    graph = GraphFactory.create("nx_digraph")
    source, square, sink = SourceStage(), SquareStage(), SinkStage()
    graph.add_flow(source, square, {"numbers": {"numbers"}})
    graph.add_flow(square, sink, {"squares": {"squares"}})
    return graph, (source, square, sink)


def test_stage_decorators():
    from fedsentinel.core.stage import IO

    stage = SinkStage()
    assert stage.stage_info.get_labels(IO.INPUT) == {"squares", "offset"}
    assert stage.stage_info.get_labels("output") == set()
    assert stage.stage_info.is_optional("offset") is True
    assert stage.stage_info.is_optional("squares") is False
    assert stage.stage_info.get_data_type("input", "squares") == List[int]
    assert stage.name == "SinkStage"
    assert SinkStage() != stage


def test_decorator_requires_stage_subclass():
    from fedsentinel.exceptions import UnknownTypeError

    with pytest.raises(UnknownTypeError):
        output("x", int)(object)


def test_graph_flow_validation():
    from fedsentinel.exceptions import IOMappingError

    graph, (source, square, sink) = _linear_graph()
    assert graph.is_root(source) and graph.is_leaf(sink)
    assert list(graph.gen_worklist()) == [source, square, sink]
    assert list(graph.gen_next_stages(source)) == [square]
    assert graph.get_io_map(square, sink) == {"squares": {"squares"}}

    with pytest.raises(IOMappingError):
        graph.add_flow(source, sink, {"numbers": {"numbers"}})
    with pytest.raises(IOMappingError):
        graph.add_flow(source, square, {"squares": {"numbers"}})
    with pytest.raises(IOMappingError):
        graph.add_flow(sink, source, {})
    assert len(list(graph.get_stages())) == 3


@pytest.mark.parametrize("executor_type", ["single_process_executor", "multi_threaded_executor"])
def test_executor_runs_rounds(executor_type):
    from fedsentinel.core.executors import ExecutorFactory

    graph, _ = _linear_graph()
    state = SimpleNamespace(totals=[])
    with ExecutorFactory.create(executor_type, graph, {}) as executor:
        for round_index in (1, 2, 3):
            executor.run_round(round_index, state)
        assert list(executor.datastore.keys()) == []

    # sum of squares of 0..r+1
    assert state.totals == [5, 14, 30]


def test_executor_optional_input():
    from fedsentinel.core.executors import ExecutorFactory

    graph, (_, _, sink) = _linear_graph()
    graph.add_flow(OffsetStage(), sink, {"offset": {"offset"}})
    state = SimpleNamespace(totals=[])
    with ExecutorFactory.create("single_process_executor", graph) as executor:
        executor.run_round(1, state)
    assert state.totals == [105]


def test_executor_type_checks_outputs():
    from fedsentinel.core.executors import ExecutorFactory
    from fedsentinel.core.graphs import GraphFactory
    from fedsentinel.exceptions import IOMappingError

    graph = GraphFactory.create("nx_digraph")
    graph.add_flow(WrongTypeStage(), SquareStage(), {"numbers": {"numbers"}})
    executor = ExecutorFactory.create("single_process_executor", graph)
    with pytest.raises(IOMappingError):
        executor.run_round(1, SimpleNamespace())
    assert list(executor.datastore.keys()) == []


def test_multi_threaded_map_keeps_order():
    from fedsentinel.core.executors import MultiThreadedExecutor
    from fedsentinel.core.graphs import GraphFactory

    executor = MultiThreadedExecutor(GraphFactory.create("nx_digraph"), max_workers=4)
    threads = set()

    def work(x):
        threads.add(threading.current_thread().name)
        return x * 10

    with executor:
        assert executor.map(work, range(50)) == [x * 10 for x in range(50)]
    assert all(name.startswith("fedsentinel") for name in threads)


def test_factories_reject_unknown_types():
    from fedsentinel.core.executors import ExecutorFactory
    from fedsentinel.core.graphs import GraphFactory
    from fedsentinel.exceptions import UnknownTypeError

    with pytest.raises(UnknownTypeError):
        GraphFactory.create("dask")
    with pytest.raises(UnknownTypeError):
        ExecutorFactory.create("gpu_executor", GraphFactory.create("nx_digraph"))


def test_io_context():
    from fedsentinel.core.datastore import MemoryDatastore
    from fedsentinel.core.io_context import InputContext, OutputContext, RoundContext
    from fedsentinel.exceptions import IOMappingError, ItemAlreadyExistsError, ItemNotExistsError

    storage = MemoryDatastore()
    context = RoundContext(4, storage, SimpleNamespace())
    stage = SquareStage()

    op_input = InputContext(context, stage)
    op_input.set([1, 2], "numbers")
    assert op_input.get() == [1, 2]
    assert list(storage.keys()) == [f"/rounds/4/{stage.uid}/input/numbers"]
    with pytest.raises(ItemAlreadyExistsError):
        op_input.set([3], "numbers")

    op_output = OutputContext(context, stage)
    with pytest.raises(ItemNotExistsError):
        op_output.get("squares")
    with pytest.raises(IOMappingError):
        op_output.set([1], "cubes")
    with pytest.raises(IOMappingError):
        op_output.set([1.5], "squares")

    assert context.map(str, [1, 2]) == ["1", "2"]
    assert storage.clear_prefix("/rounds/4/") == 1
    assert storage.size() == 0
