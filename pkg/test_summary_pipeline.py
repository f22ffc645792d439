"""
Tests for the bound summary pipeline: method selection, presets, caching
hooks and the consistency check across bounds.
"""
from decimal import Decimal

import pytest

from TaxiBounds.bound_report import BoundReport
from TaxiBounds.count_table import CountTable
from TaxiBounds.errors import ComputationError, InvariantViolation, LongRunRefused
from TaxiBounds.summary_pipeline import PRESETS, SummaryPipeline, check_consistency, run_summary

# small enough for every test run
QUICK = {
    "alm": {"m": 2, "n": 10},
    "gj": {"polygon_max": 12, "n": 40},
    "bridge": {"n": 12},
    "irreducible": {"N": 12},
}


def _report(method, value, direction):
    return BoundReport(
        method=method,
        value=Decimal(value),
        lambda_value=Decimal(value) ** 4 - 1,
        direction=direction,
        rounding="up" if direction == "upper" else "down",
    )


def test_quick_summary_window():
    summary = run_summary("desk", overrides=QUICK)
    assert [r.method for r in summary.reports] == ["trivial-lower", "fibonacci", "subadditive", "alm", "gj", "bridge", "irreducible"]
    assert summary.mu_lower <= summary.mu_upper
    assert summary.mu_upper <= Decimal("1.60574")
    assert summary.mu_lower >= Decimal("1.41421")
    data = summary.as_json()
    assert data["schema"] == 1
    assert data["mu_window"] == [str(summary.mu_lower), str(summary.mu_upper)]


def test_method_subset_and_order():
    summary = run_summary("desk", methods=["subadditive", "trivial"])
    assert [r.method for r in summary.reports] == ["subadditive", "trivial-lower", "fibonacci"]
    assert summary.mu_upper == Decimal("1.60574")


def test_only_upper_bounds_leave_lower_window_open():
    summary = run_summary("desk", methods=["subadditive"])
    assert summary.mu_lower is None
    assert summary.as_json()["mu_window"][0] is None


def test_empty_method_list_is_rejected():
    with pytest.raises(ComputationError):
        SummaryPipeline("desk", methods=[])


def test_unknown_method_is_rejected():
    with pytest.raises(ComputationError):
        SummaryPipeline("desk", methods=["subadditive", "guess"])


def test_unknown_preset_is_rejected():
    with pytest.raises(ComputationError):
        SummaryPipeline("huge")


def test_extended_preset_needs_long_run():
    with pytest.raises(LongRunRefused):
        SummaryPipeline("extended")
    assert SummaryPipeline("extended", methods=["trivial"], long_run=True).preset == "extended"


def test_tables_computed_along_the_way_are_exposed():
    pipeline = SummaryPipeline("desk", methods=["bridge", "gj"], overrides=QUICK)
    pipeline.run()
    assert pipeline.bridge_table.max_n == 12
    assert pipeline.polygon_max == 12
    assert "sstsstsstss" in {p.word for p in pipeline.polygons}
    assert all(p.length <= 12 for p in pipeline.polygons)


def test_gate_sees_every_costly_step():
    seen = []
    pipeline = SummaryPipeline(
        "desk",
        methods=["alm", "gj", "irreducible"],
        overrides=QUICK,
        gate=lambda what, size: seen.append((what, size)),
    )
    pipeline.run()
    assert seen == [("alm", 10), ("gj", 12), ("polygons", 12), ("irreducible", 12), ("bridges", 12)]


def test_gate_can_refuse_a_step():
    def refuse(what, size):
        raise LongRunRefused(f"{what} at {size}")

    with pytest.raises(LongRunRefused):
        SummaryPipeline("desk", methods=["alm"], overrides=QUICK, gate=refuse).run()


def test_cached_walk_table_must_match_published():
    bad = CountTable(name="c", values={n: 1 for n in range(1, 61)})
    pipeline = SummaryPipeline("desk", methods=["subadditive"], walk_table=bad)
    with pytest.raises(InvariantViolation):
        pipeline.run()


def test_consistency_check():
    check_consistency([_report("low", "1.5", "lower"), _report("high", "1.6", "upper")])
    with pytest.raises(InvariantViolation):
        check_consistency([_report("low", "1.7", "lower"), _report("high", "1.6", "upper")])


def test_presets_cover_every_method():
    for preset in PRESETS.values():
        assert set(preset) == {"trivial", "subadditive", "alm", "gj", "bridge", "irreducible"}
