"""
Shared plumbing for the command routers: run configuration from the click
context and result output in the selected format.
"""
import csv
import io
import json
from typing import Any, Dict, Iterable, List, Sequence

import click

from settings.run_config import RunConfig
from table_store import TableStore


def run_config(ctx: click.Context, **local: Any) -> RunConfig:
    """RunConfig from the root options, overridden by the command's own options."""
    options = dict(ctx.obj or {})
    options.update({k: v for k, v in local.items() if v is not None})
    return RunConfig.from_options(**options)


def table_store(config: RunConfig) -> TableStore:
    return TableStore(config.cache_dir)


def emit_json(data: Dict[str, Any]) -> None:
    click.echo(json.dumps(data, indent=2))


def _csv(header: Sequence[str], rows: List[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _columns(header: Sequence[str], rows: List[Sequence[Any]]) -> str:
    """Left-aligned columns two spaces apart."""
    cells = [[str(c) for c in header]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(line[k]) for line in cells) for k in range(len(header))]
    return "".join(
        "  ".join(cell.ljust(width) for cell, width in zip(line, widths)).rstrip() + "\n"
        for line in cells
    )


def emit_rows(config: RunConfig, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    """CSV for --output csv, aligned columns for --output text."""
    rows = list(rows)
    render = _columns if config.output == "text" else _csv
    click.echo(render(header, rows), nl=False)


def emit_report(config: RunConfig, data: Dict[str, Any], header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    """JSON (with "schema": 1) when --output json, rows otherwise."""
    if config.output == "json":
        emit_json({"schema": 1, **data})
    else:
        emit_rows(config, header, rows)
