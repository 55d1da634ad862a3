"""Year-month values used by objective/task payloads and case periods."""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date, datetime
from functools import total_ordering

_YM_RE = re.compile(r"^(\d{4})-(\d{2})$")


@total_ordering
@dataclass(frozen=True)
class YearMonth:
    year: int
    month: int

    def __post_init__(self) -> None:
        if not 1 <= self.month <= 12:
            raise ValueError(f"month out of range: {self.month}")

    @classmethod
    def parse(cls, text: str) -> "YearMonth":
        m = _YM_RE.match(text)
        if not m:
            raise ValueError(f"not a YYYY-MM value: {text!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    @classmethod
    def of(cls, value: "YearMonth | str | date | datetime") -> "YearMonth":
        if isinstance(value, YearMonth):
            return value
        if isinstance(value, str):
            return cls.parse(value)
        return cls(value.year, value.month)

    @property
    def index(self) -> int:
        """Months since year 0; subtraction gives whole elapsed months."""
        return self.year * 12 + self.month - 1

    @classmethod
    def from_index(cls, index: int) -> "YearMonth":
        return cls(index // 12, index % 12 + 1)

    def plus(self, months: int) -> "YearMonth":
        return YearMonth.from_index(self.index + months)

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"

    def __lt__(self, other: "YearMonth") -> bool:
        return self.index < other.index


def months_between(earlier: YearMonth, later: YearMonth) -> int:
    """Whole month boundaries crossed from `earlier` to `later` (may be negative)."""
    return later.index - earlier.index


def month_range(start: YearMonth, end: YearMonth) -> list[YearMonth]:
    """Inclusive run of months from start through end."""
    if end < start:
        return []
    return [YearMonth.from_index(i) for i in range(start.index, end.index + 1)]
