"""
Tests for the oriented Manhattan lattice: legal steps and the maps f_(x,y).
"""
import itertools

import pytest

from TaxiBounds.errors import ComputationError
from TaxiBounds.lattice import (
    ORIGIN,
    Direction,
    Symmetry,
    SymmetryKind,
    Vertex,
    canonical_map,
    inverse_canonical_map,
    is_legal_walk,
    legal_steps,
)
from TaxiBounds.walkcount import TaxiWalk, decode_word

# one anchor of each parity class, plus a few far away
ANCHORS = [(0, 0), (1, 0), (0, 1), (1, 1), (2, 2), (-3, 4), (5, -7), (-6, -1)]


def test_legal_steps_by_parity():
    """Each vertex has one horizontal and one vertical exit fixed by the parities of y and x."""
    assert legal_steps(Vertex(0, 0)) == {Direction.E, Direction.N}
    assert legal_steps(Vertex(1, 0)) == {Direction.E, Direction.S}
    assert legal_steps(Vertex(0, 1)) == {Direction.W, Direction.N}
    assert legal_steps(Vertex(1, 1)) == {Direction.W, Direction.S}
    assert legal_steps(Vertex(-2, -3)) == {Direction.W, Direction.N}


def test_every_vertex_has_two_exits():
    for x, y in itertools.product(range(-4, 5), repeat=2):
        steps = legal_steps(Vertex(x, y))
        assert len(steps) == 2
        assert sum(d.is_vertical for d in steps) == 1


def test_symmetry_kind_follows_anchor_parity():
    assert Symmetry.from_anchor(Vertex(2, -4)).kind is SymmetryKind.TRANSLATION
    assert Symmetry.from_anchor(Vertex(3, 5)).kind is SymmetryKind.ROTATION
    assert Symmetry.from_anchor(Vertex(1, 2)).kind is SymmetryKind.REFLECT_X_AXIS
    assert Symmetry.from_anchor(Vertex(2, 1)).kind is SymmetryKind.REFLECT_Y_AXIS


def test_symmetries_preserve_legal_steps():
    """f_(x,y) sends the exits of every vertex to the exits of its image."""
    for anchor in ANCHORS:
        symmetry = Symmetry.from_anchor(Vertex(*anchor))
        for x, y in itertools.product(range(-3, 4), repeat=2):
            v = Vertex(anchor[0] + x, anchor[1] + y)
            image = symmetry.apply(v)
            assert {symmetry.apply_direction(d) for d in legal_steps(v)} == legal_steps(image)


@pytest.mark.parametrize("anchor", ANCHORS)
def test_canonical_map_keeps_turn_word(anchor):
    """Walks from any anchor map to legal walks at the origin with the same turn word."""
    anchor = Vertex(*anchor)
    for first in legal_steps(anchor):
        for letters in itertools.product("st", repeat=5):
            word = "".join(letters)
            if "tt" in word:
                continue
            walk = decode_word(first, word, start=anchor)
            if len(set(walk)) != len(walk):
                continue
            image = canonical_map(anchor, walk)
            assert image[0] == ORIGIN
            assert is_legal_walk(image)
            assert TaxiWalk.from_vertices(image).turns == word
            assert inverse_canonical_map(anchor, image) == walk


def test_canonical_map_needs_walk_at_anchor():
    with pytest.raises(ComputationError):
        canonical_map(Vertex(1, 0), [Vertex(0, 0), Vertex(1, 0)])
