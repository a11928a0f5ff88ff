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

from typing import TYPE_CHECKING, Any, Callable, Iterable, List, Optional, Set, TypeVar

from typeguard import check_type

from fedsentinel.exceptions import IOMappingError, ItemAlreadyExistsError, ItemNotExistsError

from .datastore import Datastore
from .stage import IO, Stage

if TYPE_CHECKING:
    from .state import SimulationState

T = TypeVar("T")
R = TypeVar("R")


def round_prefix(round_index: int) -> str:
    return f"/rounds/{round_index}/"


class RoundContext:
    """What every stage of one round can see: the round index, shared simulation state and the executor's
    per-client map."""

    def __init__(
        self,
        round_index: int,
        storage: Datastore,
        state: "SimulationState",
        map_fn: Optional[Callable[[Callable[[T], R], Iterable[T]], List[R]]] = None,
    ):
        self._round_index = round_index
        self._storage = storage
        self._state = state
        self._map_fn = map_fn

    @property
    def round_index(self) -> int:
        return self._round_index

    @property
    def storage(self) -> Datastore:
        return self._storage

    @property
    def state(self) -> "SimulationState":
        return self._state

    def map(self, fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
        """Applies ``fn`` to every item, possibly concurrently; results keep the order of ``items``."""
        if self._map_fn is None:
            return [fn(item) for item in items]
        return list(self._map_fn(fn, list(items)))


class IOContext:
    """Base class for the input and output views of one stage in one round."""

    _io_kind = IO.INPUT

    def __init__(self, context: RoundContext, stage: Stage):
        self._context = context
        self._stage = stage
        self._labels: Set[str] = stage.stage_info.get_labels(self._io_kind)
        self._storage = context.storage

    def get_default_label(self, label: str = "") -> str:
        if label not in self._labels:
            if label == "" and len(self._labels) == 1:
                label = next(iter(self._labels))
            else:
                raise IOMappingError(
                    f"'{label}' is not a valid {self._io_kind} of the stage({self._stage.name}). "
                    f"It should be one of ({', '.join(sorted(self._labels))})."
                )
        return label

    def get_group_path(self, postfix: str = "") -> str:
        """Returns "/rounds/{round}/{stage uid}/{postfix}"."""
        return f"{round_prefix(self._context.round_index)}{self._stage.uid}/{postfix}"

    def get(self, label: str = "") -> Any:
        label = self.get_default_label(label)
        key = self.get_group_path(f"{self._io_kind}/{label}")
        if not self._storage.exists(key):
            if self._io_kind is IO.INPUT and self._stage.stage_info.is_optional(label):
                return None
            raise ItemNotExistsError(f"'{key}' does not exist.")
        return self._storage.get(key)

    def set(self, value: Any, label: str = ""):
        label = self.get_default_label(label)
        key = self.get_group_path(f"{self._io_kind}/{label}")
        if self._storage.exists(key):
            raise ItemAlreadyExistsError(f"{key} already exists.")
        data_type = self._stage.stage_info.get_data_type(self._io_kind, label)
        try:
            check_type("value", value, data_type)
        except TypeError as err:
            raise IOMappingError(
                f"The data type of '{label}' in the {self._io_kind} of '{self._stage.name}' is {data_type}, but the"
                f" value to set is the data type of {type(value)}."
            ) from err
        self._storage.put(key, value)


class InputContext(IOContext):
    _io_kind = IO.INPUT


class OutputContext(IOContext):
    _io_kind = IO.OUTPUT
