"""
Oriented Manhattan Lattice

Legal steps on the oriented square lattice and the four orientation-preserving
maps f_(x,y) that carry any vertex to the origin.

Horizontal streets point east on even y and west on odd y; vertical avenues
point north on even x and south on odd x.
"""

from enum import Enum, IntEnum
from dataclasses import dataclass
from typing import FrozenSet, NamedTuple, Sequence, Tuple

from .errors import ComputationError


class Vertex(NamedTuple):
    x: int
    y: int


ORIGIN = Vertex(0, 0)


class Direction(IntEnum):
    """Unit steps with fixed integer tags (used for ordering and file formats)."""
    N = 0
    E = 1
    S = 2
    W = 3

    @property
    def dx(self) -> int:
        return _DX[self]

    @property
    def dy(self) -> int:
        return _DY[self]

    @property
    def is_vertical(self) -> bool:
        return self in (Direction.N, Direction.S)

    @property
    def is_horizontal(self) -> bool:
        return not self.is_vertical


_DX = (0, 1, 0, -1)
_DY = (1, 0, -1, 0)


def horizontal_step(y: int) -> Direction:
    """The legal horizontal direction on street y."""
    return Direction.E if y % 2 == 0 else Direction.W


def vertical_step(x: int) -> Direction:
    """The legal vertical direction on avenue x."""
    return Direction.N if x % 2 == 0 else Direction.S


def legal_steps(v: Vertex) -> FrozenSet[Direction]:
    """
    Directions a walk may leave vertex v in.

    Args:
        v: Lattice vertex

    Returns:
        Exactly two directions, one horizontal and one vertical
    """
    return frozenset((horizontal_step(v.y), vertical_step(v.x)))


def step(v: Vertex, d: Direction) -> Vertex:
    return Vertex(v.x + _DX[d], v.y + _DY[d])


def direction_between(u: Vertex, v: Vertex) -> Direction:
    """Direction of the unit step u -> v; raises if u, v are not neighbours."""
    delta = (v.x - u.x, v.y - u.y)
    for d in Direction:
        if (_DX[d], _DY[d]) == delta:
            return d
    raise ComputationError(f"{u} -> {v} is not a unit step")


def is_legal_edge(u: Vertex, v: Vertex) -> bool:
    try:
        return direction_between(u, v) in legal_steps(u)
    except ComputationError:
        return False


def is_legal_walk(vertices: Sequence[Vertex]) -> bool:
    return all(is_legal_edge(a, b) for a, b in zip(vertices, vertices[1:]))


class SymmetryKind(Enum):
    TRANSLATION = "translation"
    ROTATION = "translation+rotation(pi)"
    REFLECT_X_AXIS = "translation+reflection(x-axis)"
    REFLECT_Y_AXIS = "translation+reflection(y-axis)"


@dataclass(frozen=True)
class Symmetry:
    """
    The map f_(x,y): translate the anchor to the origin, then apply the
    parity-selected rotation or reflection so that street and avenue
    orientations line up again.
    """
    anchor: Vertex
    kind: SymmetryKind

    @classmethod
    def from_anchor(cls, anchor: Vertex) -> "Symmetry":
        x_odd, y_odd = anchor.x % 2 == 1, anchor.y % 2 == 1
        if not x_odd and not y_odd:
            kind = SymmetryKind.TRANSLATION
        elif x_odd and y_odd:
            kind = SymmetryKind.ROTATION
        elif x_odd:
            kind = SymmetryKind.REFLECT_X_AXIS
        else:
            kind = SymmetryKind.REFLECT_Y_AXIS
        return cls(Vertex(anchor.x, anchor.y), kind)

    def _linear(self, a: int, b: int) -> Tuple[int, int]:
        # each linear part is an involution
        if self.kind is SymmetryKind.TRANSLATION:
            return a, b
        if self.kind is SymmetryKind.ROTATION:
            return -a, -b
        if self.kind is SymmetryKind.REFLECT_X_AXIS:
            return a, -b
        return -a, b

    def apply(self, v: Vertex) -> Vertex:
        return Vertex(*self._linear(v.x - self.anchor.x, v.y - self.anchor.y))

    def invert(self, v: Vertex) -> Vertex:
        a, b = self._linear(v.x, v.y)
        return Vertex(a + self.anchor.x, b + self.anchor.y)

    def apply_direction(self, d: Direction) -> Direction:
        return direction_between(ORIGIN, Vertex(*self._linear(_DX[d], _DY[d])))


def canonical_map(anchor: Vertex, walk: Sequence[Vertex]) -> Tuple[Vertex, ...]:
    """
    Send a walk that starts at anchor to its image starting at the origin.

    Args:
        anchor: First vertex of the walk, defines f_(x,y)
        walk: Vertex sequence of a legal directed walk

    Returns:
        Image walk (legal, starts at the origin, same turn word)
    """
    anchor = Vertex(*anchor)
    if not walk or Vertex(*walk[0]) != anchor:
        raise ComputationError(f"Walk does not start at anchor {anchor}")
    symmetry = Symmetry.from_anchor(anchor)
    return tuple(symmetry.apply(Vertex(*v)) for v in walk)


def inverse_canonical_map(anchor: Vertex, walk: Sequence[Vertex]) -> Tuple[Vertex, ...]:
    """Undo canonical_map: carry a walk from the origin back to anchor."""
    symmetry = Symmetry.from_anchor(Vertex(*anchor))
    return tuple(symmetry.invert(Vertex(*v)) for v in walk)
