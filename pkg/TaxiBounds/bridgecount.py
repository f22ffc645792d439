"""
Bridges and Irreducible Bridges

A bridge is a taxi walk that starts with the step (0,0) -> (1,0), never returns
to the y-axis, and ends with an east step onto a vertex of maximal x. Bridges
concatenate freely, so b_n is supermultiplicative and b_n^(1/n) is a lower
bound on mu_taxi. The irreducible bridges (no cutvertex) generate all bridges:

    B(x) = 1 / (1 - A(x)),  b_0 = 1, a_0 = 0

and the smallest positive root of A(x) = 1 gives the sharper lower bound 1/x*.
"""

import logging
import math
from decimal import Decimal
from fractions import Fraction
from typing import List, Sequence, Tuple

from .bound_report import BoundReport
from .count_table import CountTable
from .errors import ComputationError
from .int_series import IntSeries
from .lattice import ORIGIN, Direction, Vertex, canonical_map, inverse_canonical_map
from .walkcount import DEFAULT_PREFIX_DEPTH, TaxiWalk, decode_word, tally_by_prefix, turn_word, visit_walk_steps

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = Decimal("1e-12")


def bridge_violations(vertices: Sequence[Vertex]) -> List[str]:
    """Bridge conditions (beyond being a taxi walk) that the vertex list breaks."""
    vs = [Vertex(*v) for v in vertices]
    if len(vs) < 2:
        return ["a bridge has at least one step"]
    problems = []
    if vs[0] != ORIGIN or vs[1] != Vertex(1, 0):
        problems.append("does not start with (0,0) -> (1,0)")
    if any(v.x <= 0 for v in vs[1:]):
        problems.append("returns to the y-axis")
    last, before = vs[-1], vs[-2]
    if (last.x - before.x, last.y - before.y) != (1, 0):
        problems.append("last step is not east")
    if last.x < max(v.x for v in vs):
        problems.append("does not end on a vertex of maximal x")
    return problems


def is_bridge(walk: TaxiWalk) -> bool:
    return walk.is_valid() and not bridge_violations(walk.vertices)


def cutvertices(walk: TaxiWalk) -> List[int]:
    """
    Indices i (0 < i < n) where the bridge splits: the walk up to v_i is a
    bridge and the walk from v_i, carried to the origin by f_(v_i), is a bridge.
    """
    vs = walk.vertices
    cuts = []
    for i in range(1, len(vs) - 1):
        if bridge_violations(vs[: i + 1]):
            continue
        if not bridge_violations(canonical_map(vs[i], vs[i:])):
            cuts.append(i)
    return cuts


def concatenate_bridges(first: TaxiWalk, second: TaxiWalk) -> TaxiWalk:
    """
    Join two bridges at the end of the first, carrying the second there by the
    inverse of f_(end). The result is a bridge with a cutvertex at the joint.
    """
    for name, walk in (("first", first), ("second", second)):
        if not is_bridge(walk):
            raise ComputationError(f"The {name} walk is not a bridge")
    joint = first.vertices[-1]
    moved = inverse_canonical_map(joint, second.vertices)
    return TaxiWalk.from_vertices(first.vertices + moved[1:])


def count_bridges(n: int, jobs: int = 1, prefix_depth: int = DEFAULT_PREFIX_DEPTH) -> int:
    """b_n by enumeration (b_0 = 1 by convention)."""
    if n < 0:
        raise ComputationError("Bridge length must be nonnegative")
    if n == 0:
        return 1
    return tally_by_prefix("bridge", n, jobs, prefix_depth)[n]


def bridge_count_table(max_n: int, jobs: int = 1, prefix_depth: int = DEFAULT_PREFIX_DEPTH) -> CountTable:
    """b_0..b_max_n from one enumeration pass."""
    tally = tally_by_prefix("bridge", max_n, jobs, prefix_depth)
    table = CountTable(name="b", start=0)
    for n, count in enumerate(tally):
        table.set(n, count)
    logger.info(f"✓ Counted bridges up to n={max_n} (b_{max_n} = {tally[max_n]})")
    return table


def enumerate_bridges(n: int) -> List[TaxiWalk]:
    """All bridges of length n in (a, sigma) order (small n only)."""
    found: List[TaxiWalk] = []

    def collect(dirs: List[int]) -> None:
        word = turn_word(dirs)
        vertices = decode_word(Direction.E, word)
        if not bridge_violations(vertices):
            found.append(TaxiWalk(vertices, Direction.E, word))

    visit_walk_steps(n, collect, first_steps=(Direction.E,), min_x=1)
    return found


def enumerate_irreducible_bridges(n: int) -> int:
    """a_n by direct enumeration: bridges of length n with no cutvertex."""
    if n < 1:
        raise ComputationError("Irreducible bridges have length at least 1")
    return sum(1 for bridge in enumerate_bridges(n) if not cutvertices(bridge))


def irreducible_from_bridges(b: CountTable) -> CountTable:
    """
    a_1..a_N from A(x) = 1 - 1/B(x), exact to the order of the b table.

    Raises:
        ComputationError: if b_0 != 1 or the table has gaps
        ComputationError: if some a_n comes out negative
    """
    if b.get(0) != 1:
        raise ComputationError(f"b_0 must be 1, got {b.get(0)}")
    order = b.max_n
    series = IntSeries([b.get(n) for n in range(order + 1)])
    a_series = IntSeries.one(order) - series.inverse()
    a = CountTable(name="a", start=1)
    for n in range(1, order + 1):
        if a_series[n] < 0:
            raise ComputationError(f"a_{n} = {a_series[n]} is negative; the bridge table is not a bridge count")
        a.set(n, a_series[n])
    return a


def bridges_from_irreducible(a: CountTable, max_n: int = None) -> CountTable:
    """b_0..b_N from B(x) = 1/(1 - A(x)); inverse of irreducible_from_bridges."""
    order = a.max_n if max_n is None else max_n
    a_series = IntSeries([0] + [a.values.get(n, 0) for n in range(1, order + 1)], order)
    b_series = (IntSeries.one(order) - a_series).inverse()
    return CountTable(name="b", values={n: b_series[n] for n in range(order + 1)}, start=0)


def check_supermultiplicative(b: CountTable, max_total: int = None) -> List[Tuple[int, int]]:
    """Pairs (n, m), both >= 1, with b_{n+m} < b_n b_m."""
    top = b.max_n if max_total is None else min(max_total, b.max_n)
    return [
        (n, m)
        for n in range(1, top + 1)
        for m in range(1, top - n + 1)
        if b[n + m] < b[n] * b[m]
    ]


def bridge_lower_bound(b: CountTable, n: int, precision: int = 5) -> BoundReport:
    """mu_taxi >= b_n^(1/n), rounded down."""
    b_n = b.get(n)
    if n < 1 or b_n < 1:
        raise ComputationError(f"b_{n} = {b_n} does not give a bound")
    return BoundReport.from_root("bridge", b_n, n, "lower", {"n": n, "b_n": str(b_n)}, precision)


def _exceeds_one(a: List[int], k: int, bits: int) -> bool:
    """Whether sum a_n (k / 2^bits)^n > 1, in integer arithmetic."""
    top = len(a) - 1
    total = sum(a_n * k ** n << (bits * (top - n)) for n, a_n in enumerate(a) if a_n)
    return total > 1 << (bits * top)


def irreducible_lower_bound(a: CountTable, tol: Decimal = DEFAULT_TOLERANCE, precision: int = 5) -> BoundReport:
    """
    Lower bound 1/x* where sum_{n<=N} a_n x*^n > 1, by bisection on dyadic
    rationals in (0, 1).

    x* is the right end of the final bracket, so the strict inequality holds at
    x* exactly and 1/x* is a valid bound however coarse tol is.

    Raises:
        ComputationError: if a has negative entries or sum a_n <= 1 (no root in (0, 1))
    """
    tol = Decimal(tol)
    if tol <= 0:
        raise ComputationError("Bisection tolerance must be positive")
    coefficients = [0] + [a.values.get(n, 0) for n in range(1, a.max_n + 1)]
    if any(c < 0 for c in coefficients):
        raise ComputationError("Irreducible bridge counts must be nonnegative")

    bits = max(1, math.ceil(math.log2(1 / tol)))
    lo, hi = 0, 1 << bits
    if not _exceeds_one(coefficients, hi, bits):
        raise ComputationError(f"sum of a_n up to N={a.max_n} is at most 1; no root in (0, 1)")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _exceeds_one(coefficients, mid, bits):
            hi = mid
        else:
            lo = mid

    x_star = Fraction(hi, 1 << bits)
    logger.debug(f"Irreducible-bridge root bracket [{lo}, {hi}] / 2^{bits}")
    return BoundReport.from_root(
        "irreducible",
        1 / x_star,
        1,
        "lower",
        {"N": a.max_n, "x_star": str(float(x_star)), "tolerance": str(tol)},
        precision,
    )
