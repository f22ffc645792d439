"""
Tests for the command line: output formats, caching and exit codes.
"""
import json

import pytest
from click.testing import CliRunner

from app import EXIT_COMPUTATION, EXIT_INVARIANT, EXIT_OK, EXIT_USAGE, cli
from settings.run_config import LONG_RUN_LIMITS


@pytest.fixture
def run(tmp_path, monkeypatch):
    for name in ("TAXI_JOBS", "TAXI_PRECISION", "TAXI_CACHE_DIR"):
        monkeypatch.delenv(name, raising=False)
    runner = CliRunner()

    def invoke(*args):
        return runner.invoke(cli, ["--cache-dir", str(tmp_path), *args])

    return invoke


def test_walk_table_csv(run):
    result = run("walks", "table", "--max-n", "1")
    assert result.exit_code == EXIT_OK, result.output
    assert result.stdout == "n,count\n1,2\n"


def test_walk_table_is_cached(run, tmp_path):
    result = run("walks", "table", "--max-n", "12")
    assert result.exit_code == EXIT_OK, result.output
    assert result.stdout.strip().splitlines()[-1] == "12,460"
    assert (tmp_path / "c.csv").read_text().splitlines()[-1] == "12,460"
    # a shorter run keeps the longer cached entries
    assert run("walks", "table", "--max-n", "5").exit_code == EXIT_OK
    assert (tmp_path / "c.csv").read_text().splitlines()[-1] == "12,460"


def test_walk_table_json(run):
    result = run("--output", "json", "walks", "table", "--max-n", "4")
    data = json.loads(result.stdout)
    assert data["schema"] == 1
    assert data["rows"][-1] == {"n": 4, "count": 10}


def test_corrupt_cache_is_a_computation_failure(run, tmp_path):
    (tmp_path / "c.csv").write_text("this is not a table\n")
    result = run("walks", "table", "--max-n", "3")
    assert result.exit_code == EXIT_COMPUTATION


def test_cache_disagreement_is_an_invariant_violation(run, tmp_path):
    (tmp_path / "c.csv").write_text("n,count\n1,2\n2,5\n")
    result = run("walks", "table", "--max-n", "3")
    assert result.exit_code == EXIT_INVARIANT


def test_long_walk_table_needs_flag(run):
    result = run("walks", "table", "--max-n", "50")
    assert result.exit_code == EXIT_USAGE
    assert "--long-run" in result.output


def test_walk_table_text_is_aligned(run):
    result = run("--output", "text", "walks", "table", "--max-n", "12")
    assert result.exit_code == EXIT_OK, result.output
    lines = result.stdout.splitlines()
    assert lines[0] == "n   count"
    assert lines[1] == "1   2"
    assert lines[-1] == "12  460"


@pytest.mark.parametrize("args", [
    ("walks", "bridges", "--max-n", "50"),
    ("walks", "polygons", "--max-len", "40"),
    ("bounds", "alm", "--m", "20", "--n", "60"),
    ("bounds", "gj", "--polygon-max", "44", "--n", "802"),
    ("bounds", "irreducible", "--max-n", "60"),
])
def test_every_long_command_needs_flag(run, args):
    result = run(*args)
    assert result.exit_code == EXIT_USAGE
    assert "--long-run" in result.output


def test_gj_is_gated_even_with_cached_polygons(run, monkeypatch):
    assert run("walks", "polygons", "--max-len", "12").exit_code == EXIT_OK
    monkeypatch.setitem(LONG_RUN_LIMITS, "gj", 8)
    assert run("bounds", "gj", "--polygon-max", "12", "--n", "30").exit_code == EXIT_USAGE


def test_long_run_logs_banner(run, monkeypatch):
    monkeypatch.setitem(LONG_RUN_LIMITS, "alm", 4)
    result = run("--long-run", "bounds", "alm", "--m", "2", "--n", "8")
    assert result.exit_code == EXIT_OK, result.output
    assert "LONG RUN alm at size 8" in result.output
    assert "=" * 80 in result.output


def test_summary_gates_each_method(run, monkeypatch):
    monkeypatch.setitem(LONG_RUN_LIMITS, "alm", 4)
    assert run("bounds", "summary", "--methods", "alm").exit_code == EXIT_USAGE


def test_bridges_table(run):
    result = run("walks", "bridges", "--max-n", "4")
    assert result.exit_code == EXIT_OK, result.output
    lines = result.stdout.strip().splitlines()
    assert lines[0] == "n,b,a"
    assert lines[-1] == "4,2,1"


def test_polygons_are_saved(run, tmp_path):
    result = run("--output", "json", "walks", "polygons", "--max-len", "12")
    assert result.exit_code == EXIT_OK, result.output
    data = json.loads(result.stdout)
    assert data["by_length"][0]["length"] == 12
    assert "sstsstsstss" in (tmp_path / "polygons_le12.txt").read_text().split()


def test_summary_json(run):
    result = run("--output", "json", "bounds", "summary", "--methods", "trivial,subadditive")
    assert result.exit_code == EXIT_OK, result.output
    data = json.loads(result.stdout)
    assert data["schema"] == 1
    assert data["mu_window"] == ["1.41421", "1.60574"]


def test_summary_needs_methods(run):
    assert run("bounds", "summary", "--methods", "").exit_code == EXIT_USAGE
    assert run("bounds", "summary", "--methods", "psychic").exit_code == EXIT_USAGE


def test_extended_summary_needs_flag(run):
    result = run("bounds", "summary", "--preset", "extended", "--methods", "trivial")
    assert result.exit_code == EXIT_USAGE


def test_alm_bound_with_dump(run, tmp_path):
    dump = tmp_path / "a.csv"
    result = run("bounds", "alm", "--m", "2", "--n", "8", "--dump", str(dump))
    assert result.exit_code == EXIT_OK, result.output
    assert result.stdout.splitlines()[0] == "method,direction,mu,lambda,rounding"
    assert result.stdout.splitlines()[1].startswith("alm,upper,")
    assert dump.read_text().startswith("i,j,count")


def test_alm_needs_m_below_n(run):
    assert run("bounds", "alm", "--m", "4", "--n", "4").exit_code == EXIT_USAGE


def test_gj_bound(run):
    result = run("--output", "json", "bounds", "gj", "--polygon-max", "12", "--n", "30", "--engine", "both")
    assert result.exit_code == EXIT_OK, result.output
    (bound,) = json.loads(result.stdout)["bounds"]
    assert bound["direction"] == "upper"
    assert bound["parameters"]["polygons"] >= 1


def test_irreducible_bound(run):
    result = run("--precision", "6", "bounds", "irreducible", "--max-n", "16")
    assert result.exit_code == EXIT_OK, result.output
    row = result.stdout.splitlines()[1].split(",")
    assert row[0] == "irreducible" and row[1] == "lower"
    assert len(row[2].split(".")[1]) == 6


def test_contour_check(run):
    result = run("contour", "check", "--n", "2", "--m", "1", "--exhaustive")
    assert result.exit_code == EXIT_OK, result.output
    data = json.loads(result.stdout)
    assert data["passed"] is True
    assert data["configurations"] == 256


def test_contour_check_sampled(run):
    result = run("contour", "check", "--n", "3", "--m", "1", "--samples", "5", "--seed", "4")
    assert result.exit_code == EXIT_OK, result.output
    assert json.loads(result.stdout)["seed"] == 4


def test_contour_check_needs_inner_box(run):
    assert run("contour", "check", "--n", "1", "--m", "1").exit_code == EXIT_USAGE
    assert run("contour", "check", "--n", "3", "--m", "3").exit_code == EXIT_USAGE


def test_tail(run):
    result = run("contour", "tail", "--mu", "2", "--lambda", "31", "--m", "3")
    assert result.exit_code == EXIT_OK, result.output
    data = json.loads(result.stdout)
    assert data["schema"] == 1
    assert data["passes"] is True
    assert data["minimal_m"] == 3


def test_tail_needs_large_activity(run):
    result = run("contour", "tail", "--mu", "2", "--lambda", "10", "--m", "3")
    assert result.exit_code == EXIT_COMPUTATION


def test_bad_jobs_is_a_usage_error(run):
    assert run("--jobs", "0", "walks", "table", "--max-n", "2").exit_code == EXIT_USAGE
