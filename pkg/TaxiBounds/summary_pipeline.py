"""
Bound Summary Pipeline

Runs a preset selection of bound methods, collects their BoundReports and
derives the window for mu_taxi and lambda = mu^4 - 1. Every upper bound must
sit at or above every lower bound; anything else aborts the run.
"""

import logging
from decimal import Decimal
from typing import Callable, Dict, Iterable, List, Optional, Set

from pydantic import BaseModel, Field

from .almbound import alm_upper_bound
from .bound_report import BoundReport
from .bridgecount import bridge_count_table, bridge_lower_bound, irreducible_from_bridges, irreducible_lower_bound
from .count_table import CountTable
from .errors import ComputationError, InvariantViolation, LongRunRefused
from .gjbound import TaxiPolygon, enumerate_taxi_polygons, gj_upper_bound
from .published_values import PUBLISHED_WALK_COUNTS
from .walkcount import subadditive_upper_bound, trivial_bounds, walk_count_table

logger = logging.getLogger(__name__)

METHODS = ("trivial", "subadditive", "alm", "gj", "bridge", "irreducible")

PRESETS: Dict[str, Dict[str, Dict]] = {
    "desk": {
        "trivial": {},
        "subadditive": {"n": 60, "source": "published"},
        "alm": {"m": 8, "n": 28},
        "gj": {"polygon_max": 20, "n": 200},
        "bridge": {"n": 20},
        "irreducible": {"N": 20},
    },
    "extended": {
        "trivial": {},
        "subadditive": {"n": 60, "source": "enumerated"},
        "alm": {"m": 20, "n": 60},
        "gj": {"polygon_max": 44, "n": 802},
        "bridge": {"n": 60},
        "irreducible": {"N": 60},
    },
}
LONG_RUN_PRESETS = {"extended"}

# Rough single-worker costs printed before a long run starts
COST_ESTIMATES = {
    "extended": "c_60 and b_60 enumeration (days of CPU), polygons <= 44 (hours), A(20,60) (days)",
}


class BoundSummary(BaseModel):
    preset: str
    reports: List[BoundReport] = Field(default_factory=list)
    mu_lower: Optional[Decimal] = None
    mu_upper: Optional[Decimal] = None
    lambda_lower: Optional[Decimal] = None
    lambda_upper: Optional[Decimal] = None

    def as_json(self) -> Dict:
        return {
            "schema": 1,
            "preset": self.preset,
            "bounds": [dict(r.as_row(), parameters=r.parameters) for r in self.reports],
            "mu_window": [_text(self.mu_lower), _text(self.mu_upper)],
            "lambda_window": [_text(self.lambda_lower), _text(self.lambda_upper)],
        }


def _text(value: Optional[Decimal]) -> Optional[str]:
    return None if value is None else str(value)


def check_consistency(reports: Iterable[BoundReport]) -> None:
    """
    Raises:
        InvariantViolation: if some upper bound is below some lower bound
    """
    reports = list(reports)
    uppers = [r for r in reports if r.is_upper]
    lowers = [r for r in reports if not r.is_upper]
    if not uppers or not lowers:
        return
    low = max(lowers, key=lambda r: r.value)
    high = min(uppers, key=lambda r: r.value)
    if high.value < low.value:
        dump = "\n".join(f"  {r.method:<14} {r.direction:<6} mu={r.value} lambda={r.lambda_value}" for r in reports)
        raise InvariantViolation(
            f"Upper bound {high.method}={high.value} is below lower bound {low.method}={low.value}\n{dump}"
        )


class SummaryPipeline:
    """
    Runs the methods of one preset in order.

    Tables and polygon lists can be handed in (e.g. from a cache); whatever is
    computed along the way is exposed on the instance so the caller can save it.
    gate(what, size) is called before each costly step and may refuse it.
    """

    def __init__(
        self,
        preset: str = "desk",
        methods: Optional[Iterable[str]] = None,
        jobs: int = 1,
        precision: int = 5,
        long_run: bool = False,
        overrides: Optional[Dict[str, Dict]] = None,
        walk_table: Optional[CountTable] = None,
        bridge_table: Optional[CountTable] = None,
        polygons: Optional[Set[TaxiPolygon]] = None,
        polygon_max: Optional[int] = None,
        gate: Optional[Callable[[str, int], None]] = None,
    ):
        if preset not in PRESETS:
            raise ComputationError(f"Unknown preset '{preset}' (choose from {', '.join(PRESETS)})")
        if preset in LONG_RUN_PRESETS and not long_run:
            raise LongRunRefused(f"Preset '{preset}' is a long run; pass --long-run to start it")
        self.methods = list(METHODS if methods is None else methods)
        if not self.methods:
            raise ComputationError("No bound methods selected")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ComputationError(f"Unknown bound method(s): {', '.join(unknown)}")
        self.preset = preset
        self.jobs = jobs
        self.precision = precision
        self.settings = {name: dict(params) for name, params in PRESETS[preset].items()}
        for name, params in (overrides or {}).items():
            self.settings.setdefault(name, {}).update(params)
        self.walk_table = walk_table
        self.bridge_table = bridge_table
        self.polygons = polygons
        self.polygon_max = polygon_max if polygons is not None else None  # length the polygon list is complete to
        self.gate = gate

    def _gate(self, what: str, size: int) -> None:
        if self.gate is not None:
            self.gate(what, size)

    # -- inputs ---------------------------------------------------------------

    def _walks(self, max_n: int, source: str) -> CountTable:
        published = CountTable(name="c", values=dict(PUBLISHED_WALK_COUNTS))
        if self.walk_table is not None and max_n in self.walk_table:
            mismatches = self.walk_table.mismatches(published)
            if mismatches:
                raise InvariantViolation(f"Cached c_n disagrees with the published table at n={sorted(mismatches)}")
            return self.walk_table
        if source == "published" and max_n in published:
            return published
        self._gate("walks", max_n)
        self.walk_table = walk_count_table(max_n, self.jobs)
        return self.walk_table

    def _bridges(self, max_n: int) -> CountTable:
        if self.bridge_table is None or self.bridge_table.max_n < max_n:
            self._gate("bridges", max_n)
            self.bridge_table = bridge_count_table(max_n, self.jobs)
        return self.bridge_table.truncated(max_n)

    def _polygons(self, polygon_max: int) -> Set[TaxiPolygon]:
        if self.polygons is None or (self.polygon_max or 0) < polygon_max:
            self._gate("polygons", polygon_max)
            self.polygons = enumerate_taxi_polygons(polygon_max, self.jobs)
            self.polygon_max = polygon_max
        return {p for p in self.polygons if p.length <= polygon_max}

    # -- methods ----------------------------------------------------------------

    def _trivial(self) -> List[BoundReport]:
        return list(trivial_bounds(self.precision))

    def _subadditive(self, n: int, source: str = "published") -> List[BoundReport]:
        table = self._walks(n, source)
        return [subadditive_upper_bound(table, n, self.precision)]

    def _alm(self, m: int, n: int) -> List[BoundReport]:
        self._gate("alm", n)
        return [alm_upper_bound(m, n, self.jobs, self.precision)]

    def _gj(self, polygon_max: int, n: int) -> List[BoundReport]:
        self._gate("gj", polygon_max)
        return [gj_upper_bound(polygon_max, n, polygons=self._polygons(polygon_max), precision=self.precision)]

    def _bridge(self, n: int) -> List[BoundReport]:
        return [bridge_lower_bound(self._bridges(n), n, self.precision)]

    def _irreducible(self, N: int) -> List[BoundReport]:
        self._gate("irreducible", N)
        a = irreducible_from_bridges(self._bridges(N))
        return [irreducible_lower_bound(a, precision=self.precision)]

    def _runner(self, method: str) -> Callable[..., List[BoundReport]]:
        return getattr(self, f"_{method}")

    def run(self) -> BoundSummary:
        """
        Raises:
            InvariantViolation: if the collected bounds are inconsistent
        """
        logger.info("=" * 80)
        logger.info(f"Bound summary, preset '{self.preset}', methods: {', '.join(self.methods)}")
        logger.info("=" * 80)

        summary = BoundSummary(preset=self.preset)
        total = len(self.methods)
        for k, method in enumerate(self.methods, start=1):
            params = self.settings.get(method, {})
            logger.info(f"[{k}/{total}] {method} {params}")
            for report in self._runner(method)(**params):
                logger.info(f"✓ {report.method}: mu {report.direction} {report.value} (lambda {report.lambda_value})")
                summary.reports.append(report)

        check_consistency(summary.reports)
        lowers = [r for r in summary.reports if not r.is_upper]
        uppers = [r for r in summary.reports if r.is_upper]
        if lowers:
            summary.mu_lower = max(r.value for r in lowers)
            summary.lambda_lower = max(r.lambda_value for r in lowers)
        if uppers:
            summary.mu_upper = min(r.value for r in uppers)
            summary.lambda_upper = min(r.lambda_value for r in uppers)
        logger.info("=" * 80)
        logger.info(f"mu_taxi in [{summary.mu_lower}, {summary.mu_upper}], "
                    f"lambda in [{summary.lambda_lower}, {summary.lambda_upper}]")
        logger.info("=" * 80)
        return summary


def run_summary(preset: str = "desk", methods: Optional[Iterable[str]] = None, **options) -> BoundSummary:
    return SummaryPipeline(preset, methods, **options).run()
