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


class FedSentinelError(Exception):
    """Base class for exceptions in this module."""

    pass


class ShapeError(FedSentinelError):
    """Raises when array or parameter vector dimensions do not agree."""

    pass


class ValidationError(FedSentinelError):
    """Raises when an argument violates the precondition of an operation."""

    pass


class ConfigurationError(FedSentinelError):
    """Raises when a configuration is inconsistent or cannot be satisfied."""

    pass


class DataFormatError(FedSentinelError):
    """Raises when a data file cannot be parsed."""

    pass


class DomainError(FedSentinelError):
    """Raises when a value is outside the domain of a function."""

    pass


class UnknownTypeError(FedSentinelError):
    """Raises when unknown/wrong type/name is specified."""

    pass


class ItemAlreadyExistsError(FedSentinelError):
    """Raises when an item already exists in the container."""

    pass


class ItemNotExistsError(FedSentinelError):
    """Raises when an item does not exist in the container."""

    pass


class IOMappingError(FedSentinelError):
    """Raises when a stage input is not produced upstream or a stage output has the wrong type."""

    pass
