"""Import shims for running on Python versions older than the 3.11 target."""

from __future__ import annotations

import sys

if sys.version_info >= (3, 11):
    from enum import StrEnum
else:  # pragma: no cover - mirrors the Python 3.11 stdlib definition
    from enum import Enum

    class StrEnum(str, Enum):
        def __new__(cls, *values: object) -> StrEnum:
            value = str(*values)
            member = str.__new__(cls, value)
            member._value_ = value
            return member

        __str__ = str.__str__  # type: ignore[assignment]
        __format__ = str.__format__  # type: ignore[assignment]

        @staticmethod
        def _generate_next_value_(
            name: str, start: int, count: int, last_values: list[object]
        ) -> str:
            return name.lower()


__all__ = ["StrEnum"]
