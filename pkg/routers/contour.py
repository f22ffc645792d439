import logging
from decimal import Decimal

import click

from TaxiBounds.contourLab.config_sweep import run_contour_sweep
from TaxiBounds.contourLab.peierls_tail import TailParams, peierls_tail
from settings.run_config import ContourParams
from routers.output import emit_json, run_config

logger = logging.getLogger(__name__)

# exit code when a sweep finds a failing check
CHECK_FAILED = 3


@click.group(name="contour")
def contour():
    """Peierls contours of hard-core configurations on finite boxes."""


@contour.command(name="check")
@click.option("--n", "n", type=int, required=True, help="Box radius")
@click.option("--m", "m", type=int, required=True, help="Inner box radius")
@click.option("--exhaustive", is_flag=True, help="Check every configuration instead of a sample")
@click.option("--samples", type=int, default=1000, show_default=True, help="Sample size")
@click.option("--seed", type=int, default=0, show_default=True, help="Sampling seed")
@click.option("--jobs", type=int, default=None, help="Worker processes")
@click.pass_context
def cmd_contour_check(ctx: click.Context, n: int, m: int, exhaustive: bool, samples: int, seed: int, jobs: int):
    """
    Build the contour of every configuration in the sweep and run each
    structural check on it. Prints a JSON report; exits with 3 if any check fails.
    """
    params = ContourParams(n=n, m=m, exhaustive=exhaustive, samples=samples, seed=seed)
    config = run_config(ctx, jobs=jobs)
    report = run_contour_sweep(
        params.n,
        params.m,
        mode="exhaustive" if params.exhaustive else "sampled",
        samples=params.samples,
        seed=params.seed,
        jobs=config.jobs,
    )
    emit_json(report.as_json())
    if not report.passed:
        ctx.exit(CHECK_FAILED)


@contour.command(name="tail")
@click.option("--mu", type=Decimal, required=True, help="Upper bound on mu_taxi")
@click.option("--lambda", "lam", type=Decimal, required=True, help="Hard-core activity")
@click.option("--m", "m", type=click.IntRange(min=1), required=True, help="Inner box radius")
def cmd_tail(mu: Decimal, lam: Decimal, m: int):
    """Geometric tail r^L / (1 - r) with r = mu^4 / (1 + lambda), against 1/3."""
    report = peierls_tail(TailParams(mu=mu, lam=lam, m=m))
    emit_json({"schema": 1, **report.model_dump(mode="json")})
