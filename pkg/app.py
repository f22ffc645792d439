"""
Command-line entry point.

    python app.py walks table --max-n 12
    python app.py bounds summary --preset desk
    python app.py contour check --n 3 --m 1 --exhaustive

Exit codes: 0 success, 1 usage error, 2 computation failure,
3 invariant or consistency violation.
"""
import logging
import sys
from pathlib import Path

import click
from pydantic import ValidationError

from TaxiBounds.errors import ComputationError, InvariantViolation, LongRunRefused
from routers.bounds import bounds
from routers.contour import contour
from routers.walks import walks

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_COMPUTATION = 2
EXIT_INVARIANT = 3


class ClickEchoHandler(logging.Handler):
    """Log records to stderr through click, so output capture sees them."""

    def emit(self, record: logging.LogRecord) -> None:
        try:
            click.echo(self.format(record), err=True)
        except Exception:
            self.handleError(record)


def configure_logging(verbose: bool) -> None:
    root = logging.getLogger()
    for handler in list(root.handlers):
        if isinstance(handler, ClickEchoHandler):
            root.removeHandler(handler)
    handler = ClickEchoHandler()
    handler.setFormatter(logging.Formatter("%(message)s"))
    root.addHandler(handler)
    root.setLevel(logging.DEBUG if verbose else logging.INFO)


class TaxiCLI(click.Group):
    """Root group that turns library exceptions into exit codes."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            result = super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
            code = result if isinstance(result, int) else EXIT_OK
        except click.ClickException as e:
            e.show()
            code = EXIT_USAGE
        except click.Abort:
            click.echo("Aborted!", err=True)
            code = EXIT_USAGE
        except (LongRunRefused, ValidationError) as e:
            click.echo(f"✗ {e}", err=True)
            code = EXIT_USAGE
        except InvariantViolation as e:
            click.echo(f"✗ Invariant violated: {e}", err=True)
            code = EXIT_INVARIANT
        except ComputationError as e:
            click.echo(f"✗ Computation failed: {e}", err=True)
            code = EXIT_COMPUTATION
        if standalone_mode:
            sys.exit(code)
        return code


@click.group(cls=TaxiCLI)
@click.option("--jobs", type=int, default=None, help="Worker processes (env TAXI_JOBS)")
@click.option("--precision", type=int, default=None, help="Decimal places of bounds (env TAXI_PRECISION)")
@click.option("--cache-dir", type=click.Path(file_okay=False, path_type=Path), default=None,
              help="Cache directory (env TAXI_CACHE_DIR)")
@click.option("--long-run", is_flag=True, default=False, help="Allow full-scale computations")
@click.option("--output", type=click.Choice(["json", "csv", "text"]), default=None, help="Output format")
@click.option("--verbose", "-v", is_flag=True, help="Debug logging")
@click.pass_context
def cli(ctx: click.Context, jobs, precision, cache_dir, long_run, output, verbose):
    """Exact enumeration and certified bounds for taxi walks."""
    configure_logging(verbose)
    ctx.obj = {
        "jobs": jobs,
        "precision": precision,
        "cache_dir": cache_dir,
        "long_run": long_run,
        "output": output,
    }


cli.add_command(walks)
cli.add_command(bounds)
cli.add_command(contour)


if __name__ == "__main__":
    cli()
