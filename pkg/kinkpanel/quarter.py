from datetime import datetime, timedelta, timezone
from functools import total_ordering
from typing import Any
import re

_LABEL = re.compile(r"^(\d{4})q([1-4])$")

EPOCH_START = datetime(1970, 1, 1, tzinfo=timezone.utc)
EPOCH_END = datetime(2100, 1, 1, tzinfo=timezone.utc)


@total_ordering
class Quarter:
    """A calendar quarter, ordered lexicographically by (year, quarter_index)"""

    __slots__ = ("_year", "_index")

    def __init__(self, year: int, quarter_index: int):
        if quarter_index not in (1, 2, 3, 4):
            raise ValueError(f"quarter index must be in 1..4, got {quarter_index}")
        self._year = int(year)
        self._index = int(quarter_index)

    @property
    def year(self) -> int:
        return self._year

    @property
    def quarter_index(self) -> int:
        return self._index

    @classmethod
    def parse(cls, label: str) -> "Quarter":
        match = _LABEL.match(label.strip())
        if match is None:
            raise ValueError(f"invalid quarter label: {label!r} (expected YYYYqQ)")
        return cls(int(match.group(1)), int(match.group(2)))

    def shifted(self, quarters: int) -> "Quarter":
        total = 4 * self._year + self._index - 1 + quarters
        return Quarter(total // 4, total % 4 + 1)

    def start(self) -> datetime:
        return datetime(self._year, 3 * (self._index - 1) + 1, 1, tzinfo=timezone.utc)

    def midpoint(self) -> datetime:
        return self.start() + timedelta(days=45)

    def __str__(self) -> str:
        return f"{self._year}q{self._index}"

    def __repr__(self) -> str:
        return f"Quarter({self._year}, {self._index})"

    def __hash__(self) -> int:
        return hash((self._year, self._index))

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Quarter):
            return NotImplemented
        return (self._year, self._index) == (other._year, other._index)

    def __lt__(self, other: "Quarter") -> bool:
        return (self._year, self._index) < (other._year, other._index)


def assign_quarter(timestamp: datetime) -> Quarter:
    if timestamp.tzinfo is None:
        raise ValueError(f"timestamp must be timezone-aware: {timestamp}")
    if not EPOCH_START <= timestamp < EPOCH_END:
        raise ValueError(f"timestamp outside [1970-01-01, 2100-01-01): {timestamp}")
    utc = timestamp.astimezone(timezone.utc)
    return Quarter(utc.year, (utc.month - 1) // 3 + 1)
