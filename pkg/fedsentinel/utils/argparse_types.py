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

import argparse


def valid_fraction(value: str) -> float:
    """A float in [0, 1], e.g. a malicious fraction."""
    try:
        fraction = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected a number in [0, 1], got '{value}'") from None
    if not 0.0 <= fraction <= 1.0:
        raise argparse.ArgumentTypeError(f"Expected a number in [0, 1], got {fraction}")
    return fraction


def positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected a positive integer, got '{value}'") from None
    if number < 1:
        raise argparse.ArgumentTypeError(f"Expected a positive integer, got {number}")
    return number


def positive_float(value: str) -> float:
    try:
        number = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected a positive number, got '{value}'") from None
    if not number > 0:
        raise argparse.ArgumentTypeError(f"Expected a positive number, got {number}")
    return number


def comma_separated(item_type):
    """Builds an argparse type reading 'a,b,c' into a list of ``item_type`` values."""

    def parse(value: str):
        items = [part.strip() for part in value.split(",") if part.strip()]
        if not items:
            raise argparse.ArgumentTypeError("Expected a comma-separated list, got an empty value")
        return [item_type(item) for item in items]

    parse.__name__ = f"comma_separated_{getattr(item_type, '__name__', 'value')}"
    return parse
