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

from typing import Dict, Optional

from fedsentinel.exceptions import UnknownTypeError

from .aggregator import Aggregator
from .fedavg import FedAvgAggregator
from .reweighted import ConfidenceAggregator
from .trimmed_mean import TrimmedMeanAggregator


class AggregatorFactory:
    """AggregatorFactory creates the aggregator of a defense by name."""

    NAMES = ["fedavg", "trimmean", "confidence"]
    DEFAULT = "confidence"

    @staticmethod
    def create(aggregator_type: str, aggregator_params: Optional[Dict] = None) -> Aggregator:
        """Creates an aggregator object.

        Args:
            aggregator_type (str): A defense name, one of NAMES.
            aggregator_params (Dict): Keyword arguments of the aggregator's constructor.

        Returns:
            Aggregator: An aggregator object.
        """

        aggregator_params = aggregator_params or {}

        if aggregator_type == "fedavg":
            return FedAvgAggregator(**aggregator_params)
        elif aggregator_type == "trimmean":
            return TrimmedMeanAggregator(**aggregator_params)
        elif aggregator_type == "confidence":
            return ConfidenceAggregator(**aggregator_params)
        else:
            raise UnknownTypeError(
                f"Unknown aggregator type: {aggregator_type}. It should be one of {AggregatorFactory.NAMES}"
            )
