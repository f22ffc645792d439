"""
U_n as the bits of one uint64 word, for boxes with (2n+1)^2 <= 64.

Vertex (x, y) is bit (y + n) * (2n + 1) + (x + n), the row-by-row order of
box(n). Every operation works on numpy uint64 arrays and on plain ints alike,
so a whole family of configurations is checked in one pass.
"""

from typing import Iterable, List

import numpy as np

from ..errors import ContourError
from ..lattice import Vertex
from .box_config import box, in_box, is_even, m_even_blocked, m_odd_blocked

MAX_BITS = 64


def submasks(mask: int) -> np.ndarray:
    """Every subset of the bits of mask, as a uint64 array starting with 0."""
    subsets = np.zeros(1, dtype=np.uint64)
    while mask:
        low = mask & -mask
        subsets = np.concatenate((subsets, subsets | np.uint64(low)))
        mask ^= low
    return subsets


def popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a).astype(np.int64)


class BoxBits:
    def __init__(self, n: int, m: int):
        side = 2 * n + 1
        if side * side > MAX_BITS:
            raise ContourError(f"U_{n} has {side * side} vertices; bit boards hold at most {MAX_BITS}")
        self.n = n
        self.m = m
        self.side = side
        self.full = (1 << side * side) - 1
        rim = [v for v in box(n) if max(abs(v.x), abs(v.y)) == n]
        self.rim_odd = self.mask(v for v in rim if not is_even(v))
        self.odd_free = self.mask(v for v in box(n) if not is_even(v)) & ~self.rim_odd
        self.m_odd_blocked = self.mask(m_odd_blocked(m))
        self.m_even_blocked = self.mask(m_even_blocked(m))
        self.even_free = self.mask(v for v in box(n) if is_even(v)) & ~self.m_odd_blocked
        self.inner_odd = self.mask(v for v in box(m) if not is_even(v))
        self._not_first_col = self.full & ~self.mask(v for v in box(n) if v.x == -n)
        self._not_last_col = self.full & ~self.mask(v for v in box(n) if v.x == n)

    def bit(self, v: Vertex) -> int:
        if not in_box(v, self.n):
            raise ContourError(f"{tuple(v)} is outside U_{self.n}")
        return 1 << (v[1] + self.n) * self.side + (v[0] + self.n)

    def mask(self, vertices: Iterable[Vertex]) -> int:
        bits = 0
        for v in vertices:
            bits |= self.bit(v)
        return bits

    def vertices_of(self, bits: int) -> List[Vertex]:
        bits = int(bits)
        return [v for i, v in enumerate(box(self.n)) if bits >> i & 1]

    def dilate(self, a):
        """Neighbours inside U_n of the vertices in a."""
        side = self.side
        return (
            ((a << 1) & self._not_first_col)
            | ((a >> 1) & self._not_last_col)
            | ((a << side) & self.full)
            | (a >> side)
        )

    def independent(self, a):
        """a together with the even exterior is independent."""
        return ((a & self.dilate(a)) == 0) & ((a & self.rim_odd) == 0)

    def homogeneous(self, a):
        return ((a & self.m_odd_blocked) == 0) | ((a & self.m_even_blocked) == 0)

    def leaving(self, s) -> int:
        """Vertices v of U_n with v + s outside U_n."""
        return self.mask(v for v in box(self.n) if not in_box(Vertex(v.x + s[0], v.y + s[1]), self.n))

    def move(self, a, s):
        """Translate by s; a must avoid leaving(s)."""
        offset = s[0] + s[1] * self.side
        return a << offset if offset >= 0 else a >> -offset
