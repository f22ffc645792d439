import logging
from decimal import Decimal
from pathlib import Path

import click

from TaxiBounds.almbound import alm_upper_bound, build_transfer_matrix
from TaxiBounds.bound_report import BoundReport
from TaxiBounds.bridgecount import (
    DEFAULT_TOLERANCE,
    bridge_count_table,
    irreducible_from_bridges,
    irreducible_lower_bound,
)
from TaxiBounds.gjbound import gj_upper_bound
from TaxiBounds.summary_pipeline import COST_ESTIMATES, LONG_RUN_PRESETS, METHODS, PRESETS, SummaryPipeline
from routers.output import emit_json, emit_rows, run_config, table_store
from settings.run_config import long_run_banner
from table_store import dump_matrix

logger = logging.getLogger(__name__)

REPORT_HEADER = ["method", "direction", "mu", "lambda", "rounding"]


@click.group(name="bounds")
def bounds():
    """Certified upper and lower bounds on mu_taxi and lambda = mu^4 - 1."""


def _emit_bound(config, report: BoundReport) -> None:
    if config.output == "json":
        emit_json({"schema": 1, "bounds": [dict(report.as_row(), parameters=report.parameters)]})
    else:
        row = report.as_row()
        emit_rows(config, REPORT_HEADER, [[row[k] for k in REPORT_HEADER]])


def _parse_methods(text: str):
    methods = [m.strip() for m in text.split(",") if m.strip()]
    if not methods:
        raise click.UsageError("--methods needs at least one bound method")
    unknown = [m for m in methods if m not in METHODS]
    if unknown:
        raise click.UsageError(f"Unknown bound method(s): {', '.join(unknown)} (choose from {', '.join(METHODS)})")
    return methods


@bounds.command(name="summary")
@click.option("--preset", type=click.Choice(sorted(PRESETS)), default="desk", show_default=True)
@click.option("--methods", default=",".join(METHODS), show_default=True, help="Comma-separated bound methods")
@click.option("--jobs", type=int, default=None, help="Worker processes")
@click.pass_context
def cmd_bounds_summary(ctx: click.Context, preset: str, methods: str, jobs: int):
    """
    Run the selected bound methods, print every bound and the lambda window,
    and fail if some upper bound is below some lower bound.
    """
    selected = _parse_methods(methods)
    config = run_config(ctx, jobs=jobs)
    if preset in LONG_RUN_PRESETS and config.long_run:
        long_run_banner(f"preset '{preset}'", COST_ESTIMATES.get(preset, "cost unknown"))

    store = table_store(config)
    gj_max = PRESETS[preset].get("gj", {}).get("polygon_max", 4)
    polygons = store.load_polygons(gj_max)
    pipeline = SummaryPipeline(
        preset,
        selected,
        jobs=config.jobs,
        precision=config.precision,
        long_run=config.long_run,
        walk_table=store.load_table("c"),
        bridge_table=store.load_table("b", start=0),
        polygons=polygons,
        polygon_max=gj_max if polygons is not None else None,
        gate=config.require_long_run,
    )
    summary = pipeline.run()

    if pipeline.bridge_table is not None:
        store.save_table(pipeline.bridge_table)
    if pipeline.polygons is not None and polygons is None:
        store.save_polygons(pipeline.polygons, pipeline.polygon_max)

    if config.output == "json":
        emit_json(summary.as_json())
    else:
        rows = [[r.as_row()[k] for k in REPORT_HEADER] for r in summary.reports]
        rows.append(["window", "lower", str(summary.mu_lower), str(summary.lambda_lower), "down"])
        rows.append(["window", "upper", str(summary.mu_upper), str(summary.lambda_upper), "up"])
        emit_rows(config, REPORT_HEADER, rows)


@bounds.command(name="alm")
@click.option("--m", "m", type=click.IntRange(min=0), required=True, help="Length of the walks indexing the matrix")
@click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Length of the walks counted")
@click.option("--dump", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Write A(m, n) as CSV triples")
@click.option("--jobs", type=int, default=None, help="Worker processes")
@click.pass_context
def cmd_alm(ctx: click.Context, m: int, n: int, dump: Path, jobs: int):
    """mu_taxi <= lambda_1(A(m, n))^(1/(n-m))."""
    if m >= n:
        raise click.UsageError("need m < n")
    config = run_config(ctx, jobs=jobs)
    config.require_long_run("alm", n)
    matrix = build_transfer_matrix(m, n, config.jobs)
    if dump is not None:
        dump_matrix(matrix, dump)
    _emit_bound(config, alm_upper_bound(m, n, config.jobs, config.precision, matrix=matrix))


@bounds.command(name="gj")
@click.option("--polygon-max", type=click.IntRange(min=4), required=True, help="Longest polygon used as a mistake")
@click.option("--n", "n", type=click.IntRange(min=1), required=True, help="Word length")
@click.option("--engine", type=click.Choice(["automaton", "cluster", "both"]), default="automaton", show_default=True)
@click.pass_context
def cmd_gj(ctx: click.Context, polygon_max: int, n: int, engine: str):
    """mu_taxi <= l_n^(1/n) for the mistakes tt and the taxi polygons of length <= polygon-max."""
    config = run_config(ctx)
    store = table_store(config)
    config.require_long_run("gj", polygon_max)
    polygons = store.load_polygons(polygon_max)
    _emit_bound(config, gj_upper_bound(polygon_max, n, engine, polygons=polygons, precision=config.precision))


@bounds.command(name="irreducible")
@click.option("--max-n", type=click.IntRange(min=1), required=True, help="Truncation order N")
@click.option("--tol", type=Decimal, default=DEFAULT_TOLERANCE, show_default=True, help="Bisection tolerance")
@click.option("--jobs", type=int, default=None, help="Worker processes")
@click.pass_context
def cmd_irreducible(ctx: click.Context, max_n: int, tol: Decimal, jobs: int):
    """mu_taxi > 1/x where sum_(n <= N) a_n x^n = 1, from cached or freshly counted bridges."""
    config = run_config(ctx, jobs=jobs)
    config.require_long_run("irreducible", max_n)
    store = table_store(config)
    b = store.load_table("b", start=0)
    if b is None or b.max_n < max_n:
        b = bridge_count_table(max_n, config.jobs)
        store.save_table(b)
    a = irreducible_from_bridges(b.truncated(max_n))
    _emit_bound(config, irreducible_lower_bound(a, tol, config.precision))
