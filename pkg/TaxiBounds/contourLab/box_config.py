"""
Hard-Core Configurations on a Box

An independent set I of Z^2 that contains every even vertex outside
U_n = {-n..n}^2 is stored by its occupied vertices inside U_n; the even
exterior is implicit. Parity is that of x + y.
"""

from dataclasses import dataclass
from typing import FrozenSet, Iterable, Iterator, List, Tuple

from ..errors import ContourError
from ..lattice import Vertex

UNIT_STEPS = ((1, 0), (0, 1), (-1, 0), (0, -1))


def is_even(v: Vertex) -> bool:
    return (v[0] + v[1]) % 2 == 0


def neighbors(v: Vertex) -> Iterator[Vertex]:
    for dx, dy in UNIT_STEPS:
        yield Vertex(v[0] + dx, v[1] + dy)


def in_box(v: Vertex, n: int) -> bool:
    return abs(v[0]) <= n and abs(v[1]) <= n


def box(n: int) -> List[Vertex]:
    """The vertices of U_n, row by row from the bottom."""
    return [Vertex(x, y) for y in range(-n, n + 1) for x in range(-n, n + 1)]


def ring(n: int) -> List[Vertex]:
    """U_n minus U_(n-1)."""
    return [v for v in box(n) if max(abs(v.x), abs(v.y)) == n]


def m_odd_blocked(m: int) -> FrozenSet[Vertex]:
    """Even vertices that an m-odd set must leave empty: neighbours of the odd vertices of U_m."""
    return frozenset(w for v in box(m) if not is_even(v) for w in neighbors(v))


def m_even_blocked(m: int) -> FrozenSet[Vertex]:
    return frozenset(w for v in box(m) if is_even(v) for w in neighbors(v))


@dataclass(frozen=True)
class BoxConfig:
    n: int
    m: int
    occupied: FrozenSet[Vertex]

    @classmethod
    def of(cls, n: int, m: int, occupied: Iterable[Tuple[int, int]]) -> "BoxConfig":
        return cls(n, m, frozenset(Vertex(*v) for v in occupied))

    def contains(self, v: Vertex) -> bool:
        """Membership in the full independent set, exterior included."""
        if in_box(v, self.n):
            return v in self.occupied
        return is_even(v)

    def with_occupied(self, occupied: Iterable[Vertex]) -> "BoxConfig":
        return BoxConfig(self.n, self.m, frozenset(occupied))

    def violations(self) -> List[str]:
        problems = []
        if not 0 < self.m < self.n:
            problems.append(f"need 0 < m < n, got m={self.m}, n={self.n}")
        outside = [v for v in self.occupied if not in_box(v, self.n)]
        if outside:
            problems.append(f"{len(outside)} occupied vertices outside U_{self.n}")
        for v in self.occupied:
            if any(self.contains(w) for w in neighbors(v)):
                problems.append(f"{tuple(v)} has an occupied neighbour")
                break
        return problems

    def validate(self) -> "BoxConfig":
        problems = self.violations()
        if problems:
            raise ContourError(f"Not an independent set extending the even boundary: {'; '.join(problems)}")
        return self

    def is_independent(self) -> bool:
        return not self.violations()

    def is_m_odd(self) -> bool:
        return not (self.occupied & m_odd_blocked(self.m))

    def is_m_even(self) -> bool:
        return not (self.occupied & m_even_blocked(self.m))

    def is_m_homogeneous(self) -> bool:
        return self.is_m_odd() or self.is_m_even()

    def as_lists(self) -> List[List[int]]:
        return [[v.x, v.y] for v in sorted(self.occupied)]

    def key(self) -> bytes:
        """Canonical byte string of the occupied set."""
        return ";".join(f"{v.x},{v.y}" for v in sorted(self.occupied)).encode()
