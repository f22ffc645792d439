"""
Taxi Walk Enumeration

Exact counts c_n of taxi walks (self-avoiding walks on the Manhattan lattice
that never turn at two consecutive vertices), the (a, sigma) encoding, and the
subadditivity upper bounds on mu_taxi.

A walk is encoded by its first step a in {N, E} and a turn word sigma over
{s, t} of length n-1. After the first step a walk always has exactly two legal
continuations: straight on, or the single legal perpendicular turn.

Enumeration is a depth-first search over a flat occupancy bitmap covering
[-n, n]^2. Parallel runs split the search tree at a fixed prefix depth and sum
per-subtree tallies, so every count is independent of the worker count.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import mpmath

from .bound_report import BoundReport
from .count_table import CountTable
from .errors import ComputationError
from .lattice import ORIGIN, Direction, Vertex, direction_between, legal_steps

logger = logging.getLogger(__name__)

DEFAULT_PREFIX_DEPTH = 12

# Direction tags as plain ints in the hot loops: N=0, E=1, S=2, W=3
_DX = (0, 1, 0, -1)
_DY = (1, 0, -1, 0)
_N, _E, _S, _W = 0, 1, 2, 3

WALK_FIRST_STEPS = (Direction.N, Direction.E)


@dataclass(frozen=True)
class TaxiWalk:
    """A taxi walk from the origin: its vertices and its (a, sigma) encoding."""
    vertices: Tuple[Vertex, ...]
    first_step: Direction
    turns: str

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def key(self) -> Tuple[int, str]:
        """Sort key: lexicographic order of (a, sigma) with N < E and s < t."""
        return int(self.first_step), self.turns

    @classmethod
    def from_encoding(cls, first_step: Direction, turns: str, start: Vertex = ORIGIN) -> "TaxiWalk":
        """
        Decode (a, sigma) into a walk and validate it.

        Raises:
            ComputationError: if the first step is illegal, sigma has a letter
            outside {s, t}, contains "tt", or the walk self-intersects
        """
        walk = cls(decode_word(Direction(first_step), turns, start), Direction(first_step), turns)
        problems = walk.violations(start)
        if problems:
            raise ComputationError(f"({Direction(first_step).name}, {turns}) is not a taxi walk: {'; '.join(problems)}")
        return walk

    @classmethod
    def from_vertices(cls, vertices: Sequence[Vertex]) -> "TaxiWalk":
        vertices = tuple(Vertex(*v) for v in vertices)
        if len(vertices) < 2:
            raise ComputationError("A taxi walk needs at least one step")
        dirs = [direction_between(a, b) for a, b in zip(vertices, vertices[1:])]
        walk = cls(vertices, dirs[0], turn_word(dirs))
        problems = walk.violations(vertices[0])
        if problems:
            raise ComputationError(f"Vertex list is not a taxi walk: {'; '.join(problems)}")
        return walk

    def violations(self, start: Vertex = ORIGIN) -> List[str]:
        """Every taxi-walk invariant this walk breaks (empty when valid)."""
        problems = []
        vs = self.vertices
        if vs[0] != start:
            problems.append(f"starts at {vs[0]}, expected {start}")
        for a, b in zip(vs, vs[1:]):
            try:
                if direction_between(a, b) not in legal_steps(a):
                    problems.append(f"illegal step {a}->{b}")
            except ComputationError:
                problems.append(f"{a}->{b} is not a unit step")
        if len(set(vs)) != len(vs):
            problems.append("revisits a vertex")
        if "tt" in self.turns:
            problems.append("turns at two consecutive vertices")
        if set(self.turns) - {"s", "t"}:
            problems.append("turn word uses letters outside {s, t}")
        if len(self.turns) != max(len(vs) - 2, 0):
            problems.append("turn word length does not match the walk")
        elif not problems and decode_word(self.first_step, self.turns, start) != vs:
            problems.append("encoding does not decode to the vertex list")
        return problems

    def is_valid(self, start: Vertex = ORIGIN) -> bool:
        return not self.violations(start)

    def encode(self) -> Tuple[Direction, str]:
        return self.first_step, self.turns


def walk_from_encoding(first_step: Direction, turns: str) -> TaxiWalk:
    return TaxiWalk.from_encoding(first_step, turns)


def turn_word(dirs: Sequence[int]) -> str:
    """Turn word of a step-direction sequence: s where consecutive steps agree."""
    return "".join("s" if a == b else "t" for a, b in zip(dirs, dirs[1:]))


def turn_direction(x: int, y: int, d: int) -> int:
    """The single legal perpendicular direction at (x, y) after a step in direction d."""
    if d & 1:
        return _N if x % 2 == 0 else _S
    return _E if y % 2 == 0 else _W


def decode_word(first_step: Direction, turns: str, start: Vertex = ORIGIN) -> Tuple[Vertex, ...]:
    """
    Vertices of the directed walk encoded by (first_step, turns) from start.

    The result is always a legal directed walk; self-avoidance is not checked.
    """
    if first_step not in legal_steps(start):
        raise ComputationError(f"{first_step.name} is not a legal first step from {start}")
    x, y = start
    d = int(first_step)
    x, y = x + _DX[d], y + _DY[d]
    vertices = [Vertex(*start), Vertex(x, y)]
    for letter in turns:
        if letter == "t":
            d = turn_direction(x, y, d)
        elif letter != "s":
            raise ComputationError(f"Unknown turn letter {letter!r}")
        x, y = x + _DX[d], y + _DY[d]
        vertices.append(Vertex(x, y))
    return tuple(vertices)


class WalkBoard:
    """Flat occupancy bitmap over the box [-radius, radius]^2."""

    def __init__(self, radius: int):
        self.radius = radius
        self.side = 2 * radius + 1
        self.cells = bytearray(self.side * self.side)

    def index(self, x: int, y: int) -> int:
        return (x + self.radius) * self.side + (y + self.radius)

    def mark(self, x: int, y: int) -> None:
        self.cells[self.index(x, y)] = 1


# ---------------------------------------------------------------------------
# Depth-first search kernels. tally[k] accumulates the number of accepted
# walks of length k in the subtree.
# ---------------------------------------------------------------------------

def _tally_walks(cells, side, off, x, y, d, turned, depth, max_depth, tally):
    tally[depth] += 1
    if depth == max_depth:
        return
    nd = d
    while True:
        nx = x + _DX[nd]
        ny = y + _DY[nd]
        idx = (nx + off) * side + ny + off
        if not cells[idx]:
            if depth + 1 == max_depth:
                tally[max_depth] += 1
            else:
                cells[idx] = 1
                _tally_walks(cells, side, off, nx, ny, nd, nd != d, depth + 1, max_depth, tally)
                cells[idx] = 0
        if nd != d or turned:
            break
        nd = turn_direction(x, y, d)


def _tally_bridges(cells, side, off, x, y, d, turned, depth, max_depth, max_prev, tally):
    # x >= 1 after the start; accepted when the last step is E onto a maximal x
    if d == _E and x >= max_prev:
        tally[depth] += 1
    if depth == max_depth:
        return
    reach = x if x > max_prev else max_prev
    nd = d
    while True:
        nx = x + _DX[nd]
        ny = y + _DY[nd]
        if nx >= 1:
            idx = (nx + off) * side + ny + off
            if not cells[idx]:
                cells[idx] = 1
                _tally_bridges(cells, side, off, nx, ny, nd, nd != d, depth + 1, max_depth, reach, tally)
                cells[idx] = 0
        if nd != d or turned:
            break
        nd = turn_direction(x, y, d)


def _visit(cells, side, off, x, y, d, turned, remaining, dirs, min_x, callback):
    if remaining == 0:
        callback(dirs)
        return
    nd = d
    while True:
        nx = x + _DX[nd]
        ny = y + _DY[nd]
        if min_x is None or nx >= min_x:
            idx = (nx + off) * side + ny + off
            if not cells[idx]:
                cells[idx] = 1
                dirs.append(nd)
                _visit(cells, side, off, nx, ny, nd, nd != d, remaining - 1, dirs, min_x, callback)
                dirs.pop()
                cells[idx] = 0
        if nd != d or turned:
            break
        nd = turn_direction(x, y, d)


def visit_walk_steps(
    n: int,
    callback: Callable[[List[int]], None],
    first_steps: Iterable[Direction] = WALK_FIRST_STEPS,
    min_x: Optional[int] = None,
    prefix: Optional[Sequence[int]] = None,
) -> None:
    """
    Call callback(dirs) for every self-avoiding taxi walk of length n.

    dirs is the (reused, mutable) list of step direction tags. Walks are
    visited in lexicographic (a, sigma) order. With prefix, only the subtree
    below that step sequence is visited. min_x prunes vertices with x < min_x
    after the start.
    """
    board = WalkBoard(max(n, 1))
    cells, side, off = board.cells, board.side, board.radius
    board.mark(0, 0)
    if prefix:
        x, y, dirs = replay_prefix(board, prefix)
        turned = len(dirs) >= 2 and dirs[-1] != dirs[-2]
        _visit(cells, side, off, x, y, dirs[-1], turned, n - len(dirs), dirs, min_x, callback)
        return
    for first in first_steps:
        d = int(first)
        x, y = _DX[d], _DY[d]
        if min_x is not None and x < min_x:
            continue
        board.mark(x, y)
        _visit(cells, side, off, x, y, d, False, n - 1, [d], min_x, callback)
        cells[board.index(x, y)] = 0


def replay_prefix(board: WalkBoard, prefix: Sequence[int]) -> Tuple[int, int, List[int]]:
    """Mark the vertices of a step prefix on the board; returns the end point and the steps."""
    x = y = 0
    for d in prefix:
        x, y = x + _DX[d], y + _DY[d]
        board.mark(x, y)
    return x, y, list(prefix)


def prefix_tasks(depth: int, first_steps: Iterable[Direction], min_x: Optional[int] = None) -> List[Tuple[int, ...]]:
    """All step sequences of taxi walks of the given length, in (a, sigma) order."""
    tasks: List[Tuple[int, ...]] = []
    visit_walk_steps(depth, lambda dirs: tasks.append(tuple(dirs)), first_steps, min_x)
    return tasks


def _tally_task(task: Tuple[str, Tuple[int, ...], int]) -> List[int]:
    """Worker entry point: tally one prefix subtree up to max_n."""
    mode, prefix, max_n = task
    board = WalkBoard(max_n)
    board.mark(0, 0)
    x, y, dirs = replay_prefix(board, prefix)
    tally = [0] * (max_n + 1)
    depth = len(dirs)
    turned = depth >= 2 and dirs[-1] != dirs[-2]
    if mode == "bridge":
        xs = [0]
        px = 0
        for d in dirs[:-1]:
            px += _DX[d]
            xs.append(px)
        _tally_bridges(board.cells, board.side, board.radius, x, y, dirs[-1], turned, depth, max_n, max(xs), tally)
    else:
        _tally_walks(board.cells, board.side, board.radius, x, y, dirs[-1], turned, depth, max_n, tally)
    return tally


def tally_by_prefix(mode: str, max_n: int, jobs: int = 1, prefix_depth: int = DEFAULT_PREFIX_DEPTH) -> List[int]:
    """
    Tally accepted walks of every length 0..max_n.

    Args:
        mode: "walk" for taxi walks, "bridge" for bridges
        max_n: Largest length to count
        jobs: Worker processes (1 runs in-process)
        prefix_depth: Depth at which the search tree is split into tasks

    Returns:
        List whose k-th entry is the count of length k
    """
    first_steps = (Direction.E,) if mode == "bridge" else WALK_FIRST_STEPS
    min_x = 1 if mode == "bridge" else None
    split = max(1, min(prefix_depth if jobs > 1 else 1, max_n))

    tally = [0] * (max_n + 1)
    tally[0] = 1
    if max_n == 0:
        return tally

    if split > 1:
        # lengths shorter than the split depth are tallied in-process
        for k, count in enumerate(tally_by_prefix(mode, split - 1, jobs=1)):
            if k >= 1:
                tally[k] += count

    tasks = [(mode, prefix, max_n) for prefix in prefix_tasks(split, first_steps, min_x)]
    logger.debug(f"{mode} tally to n={max_n}: {len(tasks)} prefix task(s) at depth {split}, jobs={jobs}")

    if jobs <= 1 or len(tasks) <= 1:
        partials = map(_tally_task, tasks)
        for part in partials:
            _accumulate(tally, part)
    else:
        chunksize = max(1, len(tasks) // (jobs * 8))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_tally_task, tasks, chunksize=chunksize):
                _accumulate(tally, part)
    return tally


def _accumulate(total: List[int], part: List[int]) -> None:
    for k, count in enumerate(part):
        total[k] += count


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------

def count_taxi_walks(n: int, jobs: int = 1, prefix_depth: int = DEFAULT_PREFIX_DEPTH) -> int:
    """
    Number c_n of taxi walks of length n from the origin (c_0 = 1, the empty walk).
    """
    if n < 0:
        raise ComputationError("Walk length must be nonnegative")
    if n == 0:
        return 1
    return tally_by_prefix("walk", n, jobs, prefix_depth)[n]


def walk_count_table(max_n: int, jobs: int = 1, prefix_depth: int = DEFAULT_PREFIX_DEPTH) -> CountTable:
    """c_1..c_max_n from a single enumeration pass."""
    if max_n < 1:
        raise ComputationError("max_n must be at least 1")
    tally = tally_by_prefix("walk", max_n, jobs, prefix_depth)
    table = CountTable(name="c")
    for n in range(1, max_n + 1):
        table.set(n, tally[n])
    logger.info(f"✓ Counted taxi walks up to n={max_n} (c_{max_n} = {tally[max_n]})")
    return table


def enumerate_taxi_walks(n: int, visitor: Callable[[TaxiWalk], None]) -> None:
    """
    Hand every taxi walk of length n to visitor exactly once, in
    lexicographic (a, sigma) order.
    """
    if n < 1:
        raise ComputationError("Walk length must be at least 1")

    def emit(dirs: List[int]) -> None:
        first = Direction(dirs[0])
        word = turn_word(dirs)
        visitor(TaxiWalk(decode_word(first, word), first, word))

    visit_walk_steps(n, emit)


def fibonacci(k: int) -> int:
    a, b = 0, 1
    for _ in range(k):
        a, b = b, a + b
    return a


def fibonacci_bound(n: int) -> int:
    """2 f_{n+1}: the number of (a, sigma) codes without "tt", an upper bound on c_n."""
    if n < 1:
        raise ComputationError("n must be at least 1")
    return 2 * fibonacci(n + 1)


def subadditive_upper_bound(table: CountTable, n: int, precision: int = 5) -> BoundReport:
    """
    Upper bound mu_taxi <= c_n^(1/n) from submultiplicativity, rounded up.

    When c_{n+1} is also in the table the sharper (c_{n+1}/2)^(1/n) (walks of
    length one are all equivalent under the lattice symmetries) is reported
    in parameters["shifted_variant"].
    """
    c_n = table.get(n)
    parameters = {"n": n, "c_n": str(c_n)}
    if (n + 1) in table:
        variant = BoundReport.from_root("subadditive-shifted", Fraction(table.get(n + 1), 2), n, "upper",
                                        {"n": n}, precision)
        parameters["shifted_variant"] = str(variant.value)
    return BoundReport.from_root("subadditive", c_n, n, "upper", parameters, precision)


def trivial_bounds(precision: int = 5) -> Tuple[BoundReport, BoundReport]:
    """
    sqrt(2) <= mu_taxi <= (1 + sqrt(5)) / 2: walks stepping twice north or
    east at a time give the lower bound, the Fibonacci code count the upper.
    """
    lower = BoundReport.from_root("trivial-lower", 2, 2, "lower", {}, precision)
    with mpmath.workdps(60):
        golden = (1 + mpmath.sqrt(5)) / 2
    upper = BoundReport.from_mu("fibonacci", golden, "upper", {}, precision)
    return lower, upper


def check_submultiplicative(table: CountTable) -> List[Tuple[int, int]]:
    """Pairs (n, m) with c_{n+m} > c_n c_m inside the table (empty when none)."""
    bad = []
    for n in range(1, table.max_n + 1):
        for m in range(1, table.max_n - n + 1):
            if table[n + m] > table[n] * table[m]:
                bad.append((n, m))
    return bad


def check_walk_bounds(table: CountTable) -> List[int]:
    """Indices where 2^ceil(n/2) <= c_n <= 2 f_{n+1} fails."""
    return [
        n for n, c in table.rows()
        if n >= 1 and not (2 ** ((n + 1) // 2) <= c <= fibonacci_bound(n))
    ]


def gj_shifted_bound(l_n: int, n: int, precision: int = 5) -> BoundReport:
    """The weaker form (2 l_n)^(1/(n+1)) of the mistake-avoiding word bound."""
    if l_n < 1:
        raise ComputationError("l_n must be positive")
    return BoundReport.from_root("gj-shifted", 2 * l_n, n + 1, "upper", {"n": n, "l_n": str(l_n)}, precision)
