import logging

import click

from TaxiBounds.bridgecount import bridge_count_table, check_supermultiplicative, irreducible_from_bridges
from TaxiBounds.count_table import CountTable
from TaxiBounds.errors import InvariantViolation
from TaxiBounds.gjbound import enumerate_taxi_polygons
from TaxiBounds.published_values import PUBLISHED_WALK_COUNTS
from TaxiBounds.walkcount import check_submultiplicative, check_walk_bounds, walk_count_table
from routers.output import emit_report, run_config, table_store

logger = logging.getLogger(__name__)


@click.group(name="walks")
def walks():
    """Exact counts of taxi walks, bridges and taxi polygons."""


def _merge(cached: CountTable, fresh: CountTable) -> CountTable:
    """fresh extended by any longer cached entries."""
    merged = CountTable(name=fresh.name, values=dict(cached.values), start=fresh.start)
    merged.values.update(fresh.values)
    return merged


def _verify(fresh: CountTable, *references: CountTable) -> None:
    for reference in references:
        mismatches = fresh.mismatches(reference)
        if mismatches:
            detail = ", ".join(f"n={n}: {got} != {want}" for n, (got, want) in mismatches.items())
            raise InvariantViolation(f"{fresh.name}_n disagrees with {reference.name}: {detail}")
        logger.debug(f"✓ {fresh.name}_n agrees with {reference.name} on {len(set(fresh.values) & set(reference.values))} entries")


@walks.command(name="table")
@click.option("--max-n", type=click.IntRange(min=1), required=True, help="Largest walk length")
@click.option("--jobs", type=int, default=None, help="Worker processes")
@click.pass_context
def cmd_walks(ctx: click.Context, max_n: int, jobs: int):
    """
    Count c_1..c_max_n, check them against the cached and published tables,
    and cache the result.
    """
    config = run_config(ctx, jobs=jobs)
    config.require_long_run("walks", max_n)
    store = table_store(config)

    table = walk_count_table(max_n, config.jobs)
    cached = store.load_table("c")
    published = CountTable(name="published", values=dict(PUBLISHED_WALK_COUNTS))
    _verify(table, *([cached] if cached is not None else []), published)

    pairs = check_submultiplicative(table)
    if pairs:
        raise InvariantViolation(f"c_(n+m) <= c_n c_m fails at (n, m) = {pairs[:5]}")
    bad = check_walk_bounds(table)
    if bad:
        raise InvariantViolation(f"2^ceil(n/2) <= c_n <= 2 f_(n+1) fails at n={bad}")

    store.save_table(_merge(cached, table) if cached is not None else table)
    emit_report(
        config,
        {"table": "c", "rows": [{"n": n, "count": c} for n, c in table.rows()]},
        ["n", "count"],
        table.rows(),
    )


@walks.command(name="bridges")
@click.option("--max-n", type=click.IntRange(min=1), required=True, help="Largest bridge length")
@click.option("--jobs", type=int, default=None, help="Worker processes")
@click.pass_context
def cmd_bridges(ctx: click.Context, max_n: int, jobs: int):
    """Count b_0..b_max_n and the irreducible counts a_1..a_max_n derived from them."""
    config = run_config(ctx, jobs=jobs)
    config.require_long_run("bridges", max_n)
    store = table_store(config)

    b = bridge_count_table(max_n, config.jobs)
    cached = store.load_table("b", start=0)
    if cached is not None:
        _verify(b, cached)
    bad = check_supermultiplicative(b)
    if bad:
        raise InvariantViolation(f"b_(n+m) >= b_n b_m fails at {bad[:5]}")
    a = irreducible_from_bridges(b)
    negative = [n for n, count in a.rows() if count < 0]
    if negative:
        raise InvariantViolation(f"Negative irreducible bridge counts at n={negative}")

    store.save_table(_merge(cached, b) if cached is not None else b)
    store.save_table(a)
    rows = [(n, b_n, a.values.get(n, "")) for n, b_n in b.rows()]
    emit_report(
        config,
        {"table": "b", "rows": [{"n": n, "b": b_n, "a": a.values.get(n)} for n, b_n in b.rows()]},
        ["n", "b", "a"],
        rows,
    )


@walks.command(name="polygons")
@click.option("--max-len", type=click.IntRange(min=4), required=True, help="Largest polygon length")
@click.option("--jobs", type=int, default=None, help="Worker processes")
@click.pass_context
def cmd_polygons(ctx: click.Context, max_len: int, jobs: int):
    """Enumerate taxi-polygon words of length <= max-len and cache the sorted list."""
    config = run_config(ctx, jobs=jobs)
    config.require_long_run("polygons", max_len)
    store = table_store(config)

    polygons = enumerate_taxi_polygons(max_len, config.jobs)
    path = store.save_polygons(polygons, max_len)
    by_length = {}
    for polygon in polygons:
        by_length[polygon.length] = by_length.get(polygon.length, 0) + 1
    rows = sorted(by_length.items())
    emit_report(
        config,
        {"max_len": max_len, "total": len(polygons), "path": str(path), "by_length": [{"length": k, "count": c} for k, c in rows]},
        ["length", "count"],
        rows,
    )
