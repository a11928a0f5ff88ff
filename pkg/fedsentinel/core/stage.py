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
"""Pipeline stages: units of work of one federated round.

A stage declares typed inputs and outputs with the ``@input`` / ``@output`` decorators. The executor runs
the stages of a round graph in topological order and moves each output to the inputs it is wired to.
"""

import logging
import uuid
from abc import ABC, abstractmethod
from enum import Enum
from typing import TYPE_CHECKING, Dict, Set, Type, Union

from fedsentinel.exceptions import UnknownTypeError

if TYPE_CHECKING:
    from .io_context import InputContext, OutputContext, RoundContext


class IO(Enum):
    INPUT = "input"
    OUTPUT = "output"

    def __str__(self):
        return self.value


class StageInfo:
    """Labels and data types of a stage's inputs and outputs."""

    def __init__(self):
        self.data_type: Dict[IO, Dict[str, Type]] = {IO.INPUT: {}, IO.OUTPUT: {}}
        self.optional: Set[str] = set()

    def add_label(self, io_kind: Union[IO, str], label: str, data_type: Type):
        self.data_type[IO(io_kind)][label] = data_type

    def get_labels(self, io_kind: Union[IO, str]) -> Set[str]:
        return set(self.data_type[IO(io_kind)])

    def get_data_type(self, io_kind: Union[IO, str], label: str) -> Type:
        return self.data_type[IO(io_kind)][label]

    def is_optional(self, label: str) -> bool:
        return label in self.optional


class Stage(ABC):
    """Base class of a pipeline stage."""

    def __init__(self):
        self._uid: uuid.UUID = uuid.uuid4()
        self._stage_info = StageInfo()
        self._logger = logging.getLogger("{}.{}".format(__name__, type(self).__name__))
        self._builder()

    def _builder(self):
        return self

    def __hash__(self):
        return hash(self._uid)

    def __eq__(self, other):
        return isinstance(other, Stage) and self._uid == other._uid

    def add_input(self, label: str, data_type: Type, optional: bool = False):
        self._stage_info.add_label(IO.INPUT, label, data_type)
        if optional:
            self._stage_info.optional.add(label)

    def add_output(self, label: str, data_type: Type):
        self._stage_info.add_label(IO.OUTPUT, label, data_type)

    @property
    def name(self) -> str:
        return self.__class__.__name__

    @property
    def uid(self) -> uuid.UUID:
        return self._uid

    @property
    def stage_info(self) -> StageInfo:
        return self._stage_info

    @abstractmethod
    def compute(self, op_input: "InputContext", op_output: "OutputContext", context: "RoundContext"):
        """Does the stage's work for the round in ``context``.

        Inputs are read with ``op_input.get(label)`` and results published with ``op_output.set(value, label)``.
        """
        pass

    def __repr__(self):
        return f"{self.name}({str(self._uid)[:8]})"


def _chain_builder(cls, add):
    if not issubclass(cls, Stage):
        raise UnknownTypeError("Use @input/@output decorators only for a subclass of Stage!")
    builder = getattr(cls, "_builder", None)

    def new_builder(self: Stage):
        add(self)
        if builder:
            builder(self)
        return self

    cls._builder = new_builder
    return cls


def input(label: str, data_type: Type = object, optional: bool = False):
    """A decorator that declares an input of the stage.

    An optional input that no upstream stage provides reads as None.
    """

    def decorator(cls):
        return _chain_builder(cls, lambda stage: stage.add_input(label, data_type, optional))

    return decorator


def output(label: str, data_type: Type = object):
    """A decorator that declares an output of the stage."""

    def decorator(cls):
        return _chain_builder(cls, lambda stage: stage.add_output(label, data_type))

    return decorator
