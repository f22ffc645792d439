"""
Tests for taxi-walk enumeration, the (a, sigma) encoding and the
subadditivity bounds.
"""
from decimal import Decimal

import pytest

from TaxiBounds.count_table import CountTable
from TaxiBounds.errors import ComputationError
from TaxiBounds.gjbound import TaxiPolygon
from TaxiBounds.lattice import Direction, Vertex
from TaxiBounds.published_values import PUBLISHED_BOUNDS, PUBLISHED_WALK_COUNTS
from TaxiBounds.walkcount import (
    WALK_FIRST_STEPS,
    TaxiWalk,
    check_submultiplicative,
    check_walk_bounds,
    count_taxi_walks,
    enumerate_taxi_walks,
    fibonacci_bound,
    subadditive_upper_bound,
    trivial_bounds,
    walk_count_table,
)

PUBLISHED = CountTable(name="published", values=dict(PUBLISHED_WALK_COUNTS))
DESK_MAX_N = 28


@pytest.fixture(scope="module")
def desk_table():
    return walk_count_table(DESK_MAX_N)


def test_small_counts():
    assert count_taxi_walks(0) == 1
    assert [count_taxi_walks(n) for n in range(1, 7)] == [2, 4, 6, 10, 16, 26]


def test_table_matches_published_counts(desk_table):
    assert desk_table.mismatches(PUBLISHED) == {}
    assert desk_table.max_n == DESK_MAX_N
    assert desk_table[12] == 460


def test_parallel_count_matches_serial():
    """Splitting the search tree over workers never changes a count."""
    serial = walk_count_table(16)
    parallel = walk_count_table(16, jobs=2, prefix_depth=6)
    assert parallel.values == serial.values


def test_negative_length_is_rejected():
    with pytest.raises(ComputationError):
        count_taxi_walks(-1)


def test_enumeration_is_complete_and_ordered():
    walks = []
    enumerate_taxi_walks(6, walks.append)
    assert len(walks) == 26
    assert len({w.vertices for w in walks}) == 26
    assert all(w.is_valid() for w in walks)
    keys = [w.key for w in walks]
    assert keys == sorted(keys)
    assert walks[0].encode() == (Direction.N, "sssss")


def test_encoding_round_trip():
    walk = TaxiWalk.from_encoding(Direction.E, "stsst")
    assert walk.vertices[:3] == (Vertex(0, 0), Vertex(1, 0), Vertex(2, 0))
    assert TaxiWalk.from_vertices(walk.vertices) == walk


def test_encoding_rejects_consecutive_turns():
    with pytest.raises(ComputationError):
        TaxiWalk.from_encoding(Direction.E, "stts")


def test_encoding_rejects_bad_letter():
    with pytest.raises(ComputationError):
        TaxiWalk.from_encoding(Direction.N, "sxs")


def test_encoding_rejects_illegal_first_step():
    with pytest.raises(ComputationError):
        TaxiWalk.from_encoding(Direction.W, "ss")


def test_encoding_rejects_self_intersection():
    """A polygon word followed by one more step returns to the origin."""
    polygon = TaxiPolygon("sstsstsstss")
    first = next(d for d in WALK_FIRST_STEPS if polygon.closes(d))
    with pytest.raises(ComputationError):
        TaxiWalk.from_encoding(first, polygon.word)


def test_fibonacci_bound_is_tight_up_to_eleven():
    """Every (a, sigma) without tt is a walk until the first polygon (length 12) fits."""
    for n in range(1, 12):
        assert PUBLISHED_WALK_COUNTS[n] == fibonacci_bound(n)
    assert PUBLISHED_WALK_COUNTS[12] < fibonacci_bound(12)


def test_published_table_is_consistent():
    assert check_submultiplicative(PUBLISHED) == []
    assert check_walk_bounds(PUBLISHED) == []


def test_submultiplicative_check_catches_bad_table():
    bad = CountTable(name="bad", values={1: 2, 2: 5})
    assert check_submultiplicative(bad) == [(1, 1)]


def test_subadditive_bound_small_n():
    assert subadditive_upper_bound(PUBLISHED, 1).value == Decimal("2.00000")
    report = subadditive_upper_bound(PUBLISHED, 12)
    assert Decimal("1.6668") < report.value <= Decimal("1.6669")
    assert report.rounding == "up"


def test_subadditive_bound_at_sixty():
    report = subadditive_upper_bound(PUBLISHED, 60)
    published = PUBLISHED_BOUNDS["subadditive"]
    assert report.value <= published["mu"]
    assert report.lambda_value <= published["lambda"]
    assert report.value > Decimal("1.6057")


def test_trivial_bounds():
    lower, upper = trivial_bounds()
    assert lower.value == Decimal("1.41421")
    assert lower.lambda_value == Decimal("3.00000")
    assert upper.value == Decimal("1.61804")
    assert upper.lambda_value == Decimal("5.85411")
    assert (lower.rounding, upper.rounding) == ("down", "up")


def test_precision_controls_digits():
    report = subadditive_upper_bound(PUBLISHED, 20, precision=8)
    assert report.value.as_tuple().exponent == -8


@pytest.mark.longrun
def test_enumerated_forty_matches_published():
    table = walk_count_table(40, jobs=8)
    assert table[40] == 219324398
    assert table.mismatches(PUBLISHED) == {}


@pytest.mark.longrun
def test_enumerated_sixty_matches_published():
    table = walk_count_table(60, jobs=8)
    assert table.mismatches(PUBLISHED) == {}
