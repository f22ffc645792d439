"""
Tests for the transfer matrices A(m, n) and their certified eigenvalue bound.
"""
import random
from decimal import Decimal

import numpy as np
import pytest

from TaxiBounds.almbound import (
    TransferMatrix,
    alm_upper_bound,
    build_transfer_matrix,
    dominant_eigenvalue_upper,
    walk_index,
)
from TaxiBounds.count_table import CountTable
from TaxiBounds.errors import ComputationError
from TaxiBounds.published_values import PUBLISHED_BOUNDS, PUBLISHED_WALK_COUNTS
from TaxiBounds.walkcount import subadditive_upper_bound

# (m, n) pairs whose entries must sum to c_n
TOTAL_CASES = [(1, 2), (2, 4), (4, 12), (8, 28)]


def _matrix(entries, dim):
    return TransferMatrix.from_counts(1, 2, dim, entries)


def test_identity_has_radius_one():
    estimate = dominant_eigenvalue_upper(_matrix({(0, 0): 1, (1, 1): 1}, 2))
    assert estimate.upper == 1


def test_diagonal_radius_is_largest_entry():
    estimate = dominant_eigenvalue_upper(_matrix({(0, 0): 2, (1, 1): 1}, 2))
    assert estimate.upper == 2


def test_upper_bound_is_never_below_true_radius():
    rng = random.Random(11)
    for _ in range(10):
        entries = {(i, j): rng.randint(1, 9) for i in range(4) for j in range(4) if rng.random() < 0.7}
        for i in range(4):
            entries.setdefault((i, i), 1)
            entries.setdefault((i, (i + 1) % 4), 1)
        matrix = _matrix(entries, 4)
        radius = max(abs(np.linalg.eigvals(matrix.to_dense().astype(float))))
        estimate = dominant_eigenvalue_upper(matrix)
        assert float(estimate.upper) >= radius - 1e-9
        assert float(estimate.upper) <= radius * (1 + 1e-6)
        assert estimate.lower <= estimate.upper


def test_zero_matrix_is_rejected():
    with pytest.raises(ComputationError):
        dominant_eigenvalue_upper(_matrix({}, 2))


def test_walk_index_covers_length_m_walks():
    assert len(walk_index(2)) == PUBLISHED_WALK_COUNTS[2]
    assert sorted(walk_index(4).values()) == list(range(PUBLISHED_WALK_COUNTS[4]))


@pytest.mark.parametrize("m,n", TOTAL_CASES)
def test_entries_sum_to_walk_count(m, n):
    matrix = build_transfer_matrix(m, n)
    assert matrix.dim == PUBLISHED_WALK_COUNTS[m]
    assert matrix.total() == PUBLISHED_WALK_COUNTS[n]


def test_parallel_build_matches_serial():
    serial = build_transfer_matrix(3, 12)
    parallel = build_transfer_matrix(3, 12, jobs=2, prefix_depth=5)
    assert list(serial.triples()) == list(parallel.triples())


def test_bad_shape_is_rejected():
    with pytest.raises(ComputationError):
        build_transfer_matrix(5, 5)


def test_m_zero_is_subadditive_bound():
    table = CountTable(name="c", values=dict(PUBLISHED_WALK_COUNTS))
    assert alm_upper_bound(0, 12).value == subadditive_upper_bound(table, 12).value


def test_desk_bound_window():
    report = alm_upper_bound(2, 12)
    assert Decimal("1.5557") < report.value <= Decimal("1.61804")
    assert report.direction == "upper"


def test_bound_is_invariant_under_relabelling():
    matrix = build_transfer_matrix(2, 6)
    perm = list(reversed(range(matrix.dim)))
    plain = alm_upper_bound(2, 6, precision=10, matrix=matrix)
    relabelled = alm_upper_bound(2, 6, precision=10, matrix=matrix.permuted(perm))
    assert plain.value == relabelled.value


def test_exact_matvec_matches_dense():
    matrix = build_transfer_matrix(2, 8)
    u = list(range(1, matrix.dim + 1))
    dense = matrix.to_dense().astype(object)
    assert matrix.exact_matvec(u) == [int(x) for x in dense.dot(np.array(u, dtype=object))]


@pytest.mark.longrun
def test_headline_transfer_bound():
    report = alm_upper_bound(20, 60, jobs=8)
    assert report.value <= PUBLISHED_BOUNDS["alm"]["mu"]
