"""
Count Tables

Exact integer sequences n -> count (c_n, b_n, a_n, l_n, polygon counts).
"""

import logging
from typing import Dict, Iterable, Optional, Tuple

from pydantic import BaseModel, Field, field_validator

from .errors import ComputationError

logger = logging.getLogger(__name__)

INT64_MAX = 2 ** 63 - 1


def count_problem(n: int, count) -> Optional[str]:
    if isinstance(count, bool) or not isinstance(count, int):
        return f"count at n={n} is not an exact integer"
    if count < 0:
        return f"count at n={n} is negative"
    return None


class CountTable(BaseModel):
    name: str
    values: Dict[int, int] = Field(default_factory=dict)
    start: int = 1  # first index that must be present (0 for series such as b_n)

    @field_validator("values")
    @classmethod
    def _exact_nonnegative(cls, values: Dict[int, int]) -> Dict[int, int]:
        for n, count in values.items():
            problem = count_problem(n, count)
            if problem:
                raise ValueError(problem)
        return values

    @property
    def max_n(self) -> int:
        return max(self.values) if self.values else self.start - 1

    def is_contiguous(self) -> bool:
        return all(n in self.values for n in range(self.start, self.max_n + 1))

    def get(self, n: int) -> int:
        if n not in self.values:
            raise ComputationError(f"Table '{self.name}' has no entry for n={n} (max_n={self.max_n})")
        return self.values[n]

    def __getitem__(self, n: int) -> int:
        return self.get(n)

    def __contains__(self, n: int) -> bool:
        return n in self.values

    def set(self, n: int, count: int) -> None:
        problem = count_problem(n, count)
        if problem:
            raise ComputationError(f"Table '{self.name}': {problem}")
        if count > INT64_MAX:
            logger.warning(f"⚠ {self.name}[{n}] = {count} exceeds 64 bits; kept as an exact integer")
        self.values[n] = count

    def rows(self) -> Iterable[Tuple[int, int]]:
        return sorted(self.values.items())

    def truncated(self, max_n: int) -> "CountTable":
        return CountTable(
            name=self.name,
            values={n: c for n, c in self.values.items() if n <= max_n},
            start=self.start,
        )

    def mismatches(self, other: "CountTable") -> Dict[int, Tuple[int, int]]:
        """Indices present in both tables whose counts differ."""
        return {
            n: (self.values[n], other.values[n])
            for n in sorted(set(self.values) & set(other.values))
            if self.values[n] != other.values[n]
        }
