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
from typing import Any, Dict, Hashable, KeysView, Optional

from fedsentinel.exceptions import ItemNotExistsError


class Datastore(ABC):
    """Base class for the key-value store holding the values passed between stages."""

    @abstractmethod
    def get(self, key: Hashable, def_val: Optional[Any] = None) -> Any:
        """Returns the value stored under ``key``, or ``def_val`` when absent."""
        pass

    @abstractmethod
    def put(self, key: Hashable, value: Any):
        pass

    @abstractmethod
    def delete(self, key: Hashable):
        pass

    @abstractmethod
    def exists(self, key: Hashable) -> bool:
        pass

    @abstractmethod
    def keys(self) -> KeysView:
        pass

    def clear_prefix(self, prefix: str) -> int:
        """Deletes every string key starting with ``prefix``; returns how many were removed."""
        stale = [key for key in self.keys() if isinstance(key, str) and key.startswith(prefix)]
        for key in stale:
            self.delete(key)
        return len(stale)


class MemoryDatastore(Datastore):
    def __init__(self, **kwargs: Dict):
        self._storage: Dict = {}

    def get(self, key: Hashable, def_val: Optional[Any] = None) -> Any:
        return self._storage.get(key, def_val)

    def put(self, key: Hashable, value: Any):
        self._storage[key] = value

    def delete(self, key: Hashable):
        if key not in self._storage:
            raise ItemNotExistsError(f"'{key}' does not exist.")
        del self._storage[key]

    def exists(self, key: Hashable) -> bool:
        return key in self._storage

    def size(self) -> int:
        return len(self._storage)

    def keys(self) -> KeysView:
        return self._storage.keys()
