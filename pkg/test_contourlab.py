"""
Tests for the contour lab: configurations on U_n, contour construction,
the shift maps, configuration sweeps and the Peierls tail.
"""
import json
import time
from decimal import Decimal
from fractions import Fraction
from itertools import combinations

import pytest
from pydantic import ValidationError

from TaxiBounds.contourLab.box_bits import BoxBits
from TaxiBounds.contourLab.box_config import BoxConfig, box, is_even, m_odd_blocked, ring
from TaxiBounds.contourLab.config_sweep import (
    ContourReport,
    class_contour,
    contour_checks,
    contour_classes,
    count_box_configs,
    enumerate_box_configs,
    run_contour_sweep,
    sample_box_configs,
)
from TaxiBounds.contourLab.contour_builder import (
    augment,
    build_contour,
    contour_to_taxi_walk,
    interior_from_gamma,
    turn_runs,
)
from TaxiBounds.contourLab.peierls_tail import (
    TailParams,
    min_ell,
    minimal_m,
    partial_tail_sum,
    peierls_tail,
    tail_sum,
)
from TaxiBounds.contourLab.shift_maps import best_shift, reconstruct, shift
from TaxiBounds.errors import ComputationError, ContourError
from TaxiBounds.lattice import Direction, Vertex

INNER_ODD = [(1, 0), (0, 1), (-1, 0), (0, -1)]
# the plus shape U_1 + (+-2, 0), (0, +-2): R for the empty configuration at n=2, m=1
PLUS = {Vertex(x, y) for x in range(-1, 2) for y in range(-1, 2)} | {Vertex(2, 0), Vertex(-2, 0), Vertex(0, 2), Vertex(0, -2)}


@pytest.fixture(scope="module")
def empty_contour():
    return build_contour(BoxConfig.of(2, 1, []))


def test_box_and_ring_sizes():
    assert len(box(1)) == 9
    assert len(box(3)) == 49
    assert len(ring(2)) == 16


def test_m_odd_blocked_vertices():
    assert m_odd_blocked(1) == {Vertex(0, 0), Vertex(2, 0), Vertex(-2, 0), Vertex(0, 2), Vertex(0, -2),
                                Vertex(1, 1), Vertex(1, -1), Vertex(-1, 1), Vertex(-1, -1)}


def test_independence_includes_even_exterior():
    assert BoxConfig.of(2, 1, INNER_ODD).is_independent()
    # (2, 1) is odd and touches the exterior even vertex (3, 1)
    assert not BoxConfig.of(2, 1, [(2, 1)]).is_independent()
    assert not BoxConfig.of(2, 1, [(1, 0), (1, 1)]).is_independent()


def test_augment_adds_free_odd_vertices():
    augmented = augment(BoxConfig.of(2, 1, []))
    assert augmented.occupied == {Vertex(*v) for v in INNER_ODD}


def test_augment_keeps_saturated_configuration():
    config = BoxConfig.of(2, 1, INNER_ODD)
    assert augment(config).occupied == config.occupied


def test_augment_rejects_non_m_odd():
    with pytest.raises(ContourError):
        augment(BoxConfig.of(2, 1, [(0, 0)]))


def test_augment_rejects_dependent_set():
    with pytest.raises(ContourError):
        augment(BoxConfig.of(2, 1, [(1, 0), (1, 1)]))


def test_minimal_contour(empty_contour):
    assert empty_contour.length == 20
    assert empty_contour.region == PLUS
    assert empty_contour.interior == PLUS
    assert interior_from_gamma(empty_contour.gamma, 2) == PLUS
    assert [length for length, _ in turn_runs(empty_contour.cycle)] == [5, 5, 5, 5]


def test_minimal_contour_as_taxi_walk(empty_contour):
    walk = contour_to_taxi_walk(empty_contour)
    assert walk.length == 19
    assert walk.first_step == Direction.E
    assert walk.is_valid()


def test_minimal_contour_passes_every_check():
    record = contour_checks(BoxConfig.of(2, 1, []))
    assert record.failed == []
    assert record.messages == []


def test_shift_sets(empty_contour):
    config = empty_contour.config
    result = shift(config, empty_contour, (1, 0))
    assert result.tilde == {Vertex(-2, 0), Vertex(-1, 1), Vertex(-1, -1), Vertex(0, 2), Vertex(0, -2)}
    assert result.shifted.occupied == frozenset()
    assert result.augmented.occupied == result.tilde
    assert result.augmented.is_independent()
    assert result.augmented.is_m_homogeneous()
    assert best_shift(config, empty_contour).s == (1, 0)


def test_shift_rejects_non_unit_step(empty_contour):
    with pytest.raises(ContourError):
        shift(empty_contour.config, empty_contour, (1, 1))


def test_reconstruct_round_trip(empty_contour):
    config = empty_contour.config
    result = shift(config, empty_contour, (1, 0))
    assert reconstruct(result.augmented, (1, 0), empty_contour.gamma) == config
    assert reconstruct(result.shifted, (1, 0), empty_contour.gamma) == config


def test_reconstruct_rejects_foreign_set(empty_contour):
    """(1, 0) unshifts to the origin, which no m-odd configuration occupies."""
    config = empty_contour.config
    result = shift(config, empty_contour, (1, 0))
    joined = result.shifted.with_occupied(result.shifted.occupied | {Vertex(1, 0)})
    with pytest.raises(ContourError):
        reconstruct(joined, (1, 0), empty_contour.gamma)


def test_bit_boards_match_vertex_sets():
    bits = BoxBits(3, 1)
    origin = bits.mask([Vertex(0, 0)])
    assert set(bits.vertices_of(bits.dilate(origin))) == {Vertex(1, 0), Vertex(-1, 0), Vertex(0, 1), Vertex(0, -1)}
    assert bits.move(origin, (1, 0)) == bits.mask([Vertex(1, 0)])
    for config in sample_box_configs(3, 1, 20, seed=1):
        board = bits.mask(config.occupied)
        assert set(bits.vertices_of(board)) == config.occupied
        assert bits.independent(board)
        assert bits.homogeneous(board)
    assert not bits.independent(bits.mask([Vertex(0, 0), Vertex(1, 0)]))
    assert not bits.independent(bits.mask([Vertex(3, 0)]))


def test_bit_boards_need_a_small_box():
    with pytest.raises(ContourError):
        BoxBits(4, 1)


def test_box_config_count():
    """At n=2, m=1 the free cells are the four corners and the four inner odd vertices."""
    assert count_box_configs(2, 1) == 256
    configs = list(enumerate_box_configs(2, 1))
    assert len(configs) == 256
    assert len({c.occupied for c in configs}) == 256
    assert all(c.is_independent() and c.is_m_odd() for c in configs)


def test_box_config_count_needs_inner_box():
    with pytest.raises(ContourError):
        count_box_configs(1, 1)


def test_samples_are_valid_and_seeded():
    first = sample_box_configs(4, 1, 30, seed=3)
    again = sample_box_configs(4, 1, 30, seed=3)
    assert first == again
    assert all(c.is_independent() and c.is_m_odd() for c in first)


def test_exhaustive_sweep_small_box():
    report = run_contour_sweep(2, 1, mode="exhaustive")
    assert report.population == 256
    assert report.configurations == 256
    assert report.collisions == 0
    assert report.passed
    assert report.checks["length"].passed == 256


def test_widest_shift_reconstructs_every_subset(empty_contour):
    """|I~_(1,0)| = 5 on the empty contour: all 32 joins are distinct and unshift to I."""
    config = empty_contour.config
    result = shift(config, empty_contour, (1, 0))
    tilde = sorted(result.tilde)
    joins = set()
    for k in range(len(tilde) + 1):
        for chosen in combinations(tilde, k):
            joined = result.shifted.with_occupied(result.shifted.occupied | set(chosen))
            assert reconstruct(joined, (1, 0), empty_contour.gamma) == config
            joins.add(joined.occupied)
    assert len(joins) == 2 ** len(tilde) == 32


def test_contour_checks_record_a_witness_per_subset():
    record = contour_checks(BoxConfig.of(2, 1, []))
    keys = [key for key, _ in record.witnesses]
    assert len(keys) >= 32
    assert len(set(keys)) == len(keys)
    assert len({owner for _, owner in record.witnesses}) == 1


def test_exhaustive_sweep_matches_config_by_config():
    report = run_contour_sweep(2, 1, mode="exhaustive")
    records = [contour_checks(config) for config in enumerate_box_configs(2, 1)]
    for check in ("augment", "edge_parity", "shift", "reconstruct"):
        assert report.checks[check].passed == sum(r.results[check] for r in records)
    assert report.configurations == len(records)


def test_contour_depends_only_on_free_odd_set():
    bits = BoxBits(2, 1)
    for config in enumerate_box_configs(2, 1):
        even = bits.mask(v for v in config.occupied if is_even(v))
        free = bits.odd_free & ~bits.dilate(even)
        assert build_contour(config).gamma == class_contour(2, 1, free).gamma


def test_contour_classes_cover_every_free_set():
    groups = contour_classes(3, 1)
    free_sets = [f for group in groups for f in group]
    assert len(free_sets) == len(set(free_sets))
    assert all((f & ~BoxBits(3, 1).odd_free) == 0 for f in free_sets)


def test_exhaustive_sweep_three_box():
    started = time.perf_counter()
    report = run_contour_sweep(3, 1, mode="exhaustive")
    elapsed = time.perf_counter() - started
    assert report.population == count_box_configs(3, 1) == 7311616
    assert report.configurations == report.population
    assert report.collisions == 0
    assert report.passed, report.counterexamples
    assert elapsed <= 60


def test_sampled_sweep_is_deterministic():
    first = run_contour_sweep(3, 1, samples=20, seed=7)
    second = run_contour_sweep(3, 1, samples=20, seed=7)
    assert first.as_json() == second.as_json()
    assert first.passed, first.counterexamples


def test_parallel_sweep_matches_serial():
    serial = run_contour_sweep(3, 2, samples=12, seed=1)
    parallel = run_contour_sweep(3, 2, samples=12, seed=1, jobs=2, chunk_size=4)
    assert parallel.as_json() == serial.as_json()


def test_sampled_sweep_larger_box():
    report = run_contour_sweep(4, 1, samples=15, seed=2)
    assert report.configurations == 15
    assert report.passed, report.counterexamples


def test_report_json_shape():
    data = run_contour_sweep(2, 1, samples=3, seed=0).as_json()
    assert data["schema"] == 1
    assert data["passed"] is True
    assert set(data["checks"]) >= {"augment", "taxi_walk", "reconstruct"}
    json.dumps(data)
    assert ContourReport.model_validate(data).n == 2


def test_unknown_sweep_mode():
    with pytest.raises(ContourError):
        run_contour_sweep(2, 1, mode="random")


def test_min_ell():
    assert [min_ell(m) for m in range(1, 8)] == [1, 2, 3, 3, 4, 5, 5]


def test_tail_sum_exact():
    assert tail_sum(Fraction(1, 2), 2) == Fraction(1, 2)
    assert tail_sum(Fraction(1, 2), 3) == Fraction(1, 4)
    assert tail_sum(0, 4) == 0


def test_tail_sum_diverges():
    with pytest.raises(ComputationError):
        tail_sum(1, 3)


def test_closed_form_matches_direct_sum():
    for r in (Fraction(1, 10), Fraction(1, 3), Fraction(1, 2), Fraction(4, 5), Fraction(9, 10)):
        for ell in (1, 2, 5, 17):
            closed = float(tail_sum(r, ell))
            assert abs(float(partial_tail_sum(r, ell)) - closed) <= 1e-12 * closed


def test_tail_report():
    """mu = 2 and lambda = 31 give r = 1/2."""
    failing = peierls_tail(TailParams(mu=Decimal(2), lam=Decimal(31), m=2))
    assert (failing.ell, failing.passes) == (2, False)
    passing = peierls_tail(TailParams(mu=Decimal(2), lam=Decimal(31), m=3))
    assert (passing.ell, passing.passes) == (3, True)
    assert Decimal(passing.tail) == Decimal("0.25")
    assert (passing.minimal_ell, passing.minimal_m) == (3, 3)


def test_minimal_m():
    assert minimal_m(Fraction(1, 2)) == (3, 3)
    ell, m = minimal_m(Fraction(9, 10))
    assert tail_sum(Fraction(9, 10), ell) < Fraction(1, 3) <= tail_sum(Fraction(9, 10), ell - 1)
    assert min_ell(m) >= ell > min_ell(m - 1)


def test_tail_needs_lambda_above_mu_to_the_fourth():
    with pytest.raises(ComputationError):
        peierls_tail(TailParams(mu=Decimal(2), lam=Decimal(15), m=3))


def test_tail_params_validation():
    with pytest.raises(ValidationError):
        TailParams(mu=Decimal("0.9"), lam=Decimal(5), m=3)
    with pytest.raises(ValidationError):
        TailParams(mu=Decimal(2), lam=Decimal(31), m=0)
    assert TailParams.model_validate({"mu": "2", "lambda": "31", "m": 3}).ratio == Fraction(1, 2)
