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
"""
.. autosummary::
    :toctree: _autosummary

    Simulation
    SimulationConfig
    Stage
    input
    output
    InputContext
    OutputContext
    RoundContext
    run
    select_malicious
    write_report
    read_report
"""

from .aggregation import AggregatorFactory, ClientReport
from .attacks import AttackConfig, AttackKind, Knowledge
from .confidence import ConfidenceConfig, ScoreSet
from .config import PROFILES, RuntimeEnv, SimulationConfig
from .data import Dataset, PartitionConfig
from .datastore import Datastore, MemoryDatastore
from .detection import DetectionOutcome
from .executors import ExecutorFactory
from .graphs import GraphFactory
from .io_context import InputContext, OutputContext, RoundContext
from .metrics import ClientTrace, RoundMetrics
from .nn import ModelSpec, ParamVector, TrainConfig
from .report import read_report, write_report
from .simulator import Simulation, run, select_malicious
from .stage import Stage, input, output
from .state import Client, SimulationState
