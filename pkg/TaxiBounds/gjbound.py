"""
Mistake-Avoiding Words and Taxi Polygons

Every taxi walk of length n+1 has a turn word of length n that avoids "tt" and
every taxi polygon word (a polygon word inside a walk's turn word would close
the walk on itself). With l_n the number of words of length n avoiding the
mistake set M,

    c_{n+1} <= 2 l_n   and   mu_taxi <= l_n^(1/n)

l_n is computed two ways: the Goulden-Jackson cluster series and the
forbidden-factor automaton. The two must agree wherever both are run.
"""

import logging
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple

from pydantic import BaseModel, ConfigDict, field_validator

from .bound_report import BoundReport
from .errors import ComputationError, InvariantViolation
from .int_series import IntSeries
from .lattice import ORIGIN, Direction, Vertex
from .walkcount import (
    DEFAULT_PREFIX_DEPTH,
    WALK_FIRST_STEPS,
    WalkBoard,
    decode_word,
    gj_shifted_bound,
    prefix_tasks,
    replay_prefix,
    turn_direction,
    turn_word,
)
from .word_automaton import WordAutomaton

logger = logging.getLogger(__name__)

TT = "tt"
_DX = (0, 1, 0, -1)
_DY = (1, 0, -1, 0)


@dataclass(frozen=True)
class TaxiPolygon:
    """A closed taxi walk through the origin, recorded by its turn word sigma'."""
    word: str

    @property
    def length(self) -> int:
        return len(self.word) + 1

    def vertices(self, first_step: Direction = Direction.E) -> Tuple[Vertex, ...]:
        return decode_word(first_step, self.word)

    def closes(self, first_step: Direction = Direction.E) -> bool:
        """Closed at the origin, simple otherwise, and free of "tt"."""
        if TT in self.word:
            return False
        vs = self.vertices(first_step)
        return vs[-1] == ORIGIN and len(set(vs[:-1])) == len(vs) - 1


def reduce_mistakes(words: Iterable[str]) -> FrozenSet[str]:
    """Drop duplicates and every word that has another mistake as a factor."""
    unique = set(words)
    if not unique:
        return frozenset()
    shortest = min(len(w) for w in unique)
    reduced = set()
    for word in unique:
        length = len(word)
        redundant = any(
            word[i:i + k] in unique
            for k in range(shortest, length)
            for i in range(length - k + 1)
        )
        if not redundant:
            reduced.add(word)
    return frozenset(reduced)


class MistakeSet(BaseModel):
    """A reduced set of mistake words: no word has another as a factor."""
    model_config = ConfigDict(frozen=True)

    words: FrozenSet[str]
    provenance: Tuple[str, ...] = ()

    @field_validator("words")
    @classmethod
    def _reduced(cls, words: FrozenSet[str]) -> FrozenSet[str]:
        return reduce_mistakes(words)

    @classmethod
    def from_words(cls, words: Iterable[str], provenance: Iterable[str] = ()) -> "MistakeSet":
        return cls(words=frozenset(words), provenance=tuple(provenance))

    @classmethod
    def taxi(cls, polygons: Iterable[TaxiPolygon] = (), polygon_max: int = None) -> "MistakeSet":
        """{tt} together with the given polygon words."""
        labels = [TT]
        if polygon_max is not None:
            labels.append(f"polygon<={polygon_max}")
        return cls.from_words([TT, *(p.word for p in polygons)], labels)

    def __len__(self) -> int:
        return len(self.words)


# ---------------------------------------------------------------------------
# Taxi polygons
# ---------------------------------------------------------------------------

def _polygon_search(cells, side, off, x, y, d, turned, depth, max_len, dirs, out):
    nd = d
    while True:
        nx = x + _DX[nd]
        ny = y + _DY[nd]
        if nx == 0 and ny == 0:
            if depth + 1 >= 4:
                dirs.append(nd)
                out.add(turn_word(dirs))
                dirs.pop()
        elif abs(nx) + abs(ny) <= max_len - depth - 1:
            idx = (nx + off) * side + ny + off
            if not cells[idx]:
                cells[idx] = 1
                dirs.append(nd)
                _polygon_search(cells, side, off, nx, ny, nd, nd != d, depth + 1, max_len, dirs, out)
                dirs.pop()
                cells[idx] = 0
        if nd != d or turned:
            break
        nd = turn_direction(x, y, d)


def _polygon_task(task: Tuple[Tuple[int, ...], int]) -> Set[str]:
    """Worker entry point: polygon words whose step sequence starts with prefix."""
    prefix, max_len = task
    words: Set[str] = set()
    x = y = 0
    for k, d in enumerate(prefix, start=1):
        x, y = x + _DX[d], y + _DY[d]
        if abs(x) + abs(y) > max_len - k:
            return words
    board = WalkBoard(max_len // 2 + len(prefix) + 1)
    board.mark(0, 0)
    x, y, dirs = replay_prefix(board, prefix)
    turned = len(dirs) >= 2 and dirs[-1] != dirs[-2]
    _polygon_search(board.cells, board.side, board.radius, x, y, dirs[-1], turned, len(dirs), max_len, dirs, words)
    return words


def enumerate_taxi_polygons(max_len: int, jobs: int = 1, prefix_depth: int = DEFAULT_PREFIX_DEPTH) -> Set[TaxiPolygon]:
    """
    All distinct taxi-polygon words of length <= max_len, from both first steps.

    A walk leaving the origin is cut off as soon as it cannot get back in the
    steps it has left. With jobs > 1 the search is split by step prefixes of
    length prefix_depth; shorter polygons are found in-process.
    """
    if max_len < 4:
        raise ComputationError("Taxi polygons have length at least 4")
    split = min(prefix_depth, max_len - 1) if jobs > 1 else 1
    words: Set[str] = set()
    if split > 1:
        if split >= 4:
            words |= {p.word for p in enumerate_taxi_polygons(split)}
        tasks = [(prefix, max_len) for prefix in prefix_tasks(split, WALK_FIRST_STEPS)]
        chunksize = max(1, len(tasks) // (jobs * 8))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for found in pool.map(_polygon_task, tasks, chunksize=chunksize):
                words |= found
    else:
        for first in WALK_FIRST_STEPS:
            words |= _polygon_task(((int(first),), max_len))
    logger.info(f"✓ Found {len(words)} taxi polygon words of length <= {max_len}")
    return {TaxiPolygon(w) for w in words}


def _turn_words(max_len: int) -> Iterator[str]:
    """Every word over {s, t} without tt, of length 3..max_len-1."""
    level = ["s", "t"]
    for length in range(2, max_len):
        level = [w + "s" for w in level] + [w + "t" for w in level if not w.endswith("t")]
        if length >= 3:
            yield from level


def brute_force_polygons(max_len: int) -> Set[TaxiPolygon]:
    """Polygons by decoding every (a, sigma') with |sigma'| < max_len and no tt (small max_len only)."""
    return {
        polygon
        for polygon in map(TaxiPolygon, _turn_words(max_len))
        if any(polygon.closes(first) for first in WALK_FIRST_STEPS)
    }


# ---------------------------------------------------------------------------
# Counting engines
# ---------------------------------------------------------------------------

def _overlaps(words: FrozenSet[str]) -> Dict[str, List[Tuple[str, int]]]:
    """
    For each mistake v, the pairs (u, shift) where a proper suffix of u equals
    a proper prefix of v; shift = |v| - |overlap|.
    """
    by_prefix: Dict[str, List[str]] = defaultdict(list)
    for v in words:
        for k in range(1, len(v)):
            by_prefix[v[:k]].append(v)
    table: Dict[str, List[Tuple[str, int]]] = {v: [] for v in words}
    for u in words:
        for k in range(1, len(u)):
            for v in by_prefix.get(u[-k:], ()):
                table[v].append((u, len(v) - k))
    return table


def cluster_counts(mistakes: MistakeSet, n: int) -> List[int]:
    """l_0..l_n from f(x) = 1 / (1 - 2x - C(x)), with C the cluster series."""
    words = sorted(mistakes.words)
    overlaps = _overlaps(mistakes.words)
    clusters: Dict[str, List[int]] = {v: [0] * (n + 1) for v in words}
    for k in range(1, n + 1):
        for v in words:
            total = -1 if k == len(v) else 0
            for u, shift in overlaps[v]:
                if k - shift >= 0:
                    total -= clusters[u][k - shift]
            clusters[v][k] = total
    cluster = [sum(clusters[v][k] for v in words) for k in range(n + 1)]
    denominator = IntSeries.one(n) - IntSeries.monomial(1, n, 2) - IntSeries(cluster)
    series = denominator.inverse()
    return [series[k] for k in range(n + 1)]


def brute_force_avoiding(mistakes: MistakeSet, n: int) -> int:
    """Exhaustive count over all 2^n words."""
    return sum(
        1 for letters in product("st", repeat=n)
        if not any(m in "".join(letters) for m in mistakes.words)
    )


def count_avoiding_words(mistakes: MistakeSet, n: int, engine: str = "automaton") -> int:
    """
    l_n, the number of words of length n over {s, t} with no mistake as a factor.

    Args:
        mistakes: Mistake set (already reduced)
        n: Word length
        engine: "automaton", "cluster", or "both" (cross-checked)

    Raises:
        InvariantViolation: if engine="both" and the two counts differ
    """
    if n < 0:
        raise ComputationError("Word length must be nonnegative")
    if engine == "automaton":
        return WordAutomaton(mistakes.words).count(n)
    if engine == "cluster":
        return cluster_counts(mistakes, n)[n]
    if engine == "both":
        by_automaton = WordAutomaton(mistakes.words).count(n)
        by_cluster = cluster_counts(mistakes, n)[n]
        if by_automaton != by_cluster:
            raise InvariantViolation(
                f"l_{n} disagrees: automaton {by_automaton}, cluster series {by_cluster}"
            )
        return by_automaton
    raise ComputationError(f"Unknown counting engine: {engine}")


def gj_upper_bound(
    polygon_max: int,
    n: int,
    engine: str = "automaton",
    polygons: Optional[Iterable[TaxiPolygon]] = None,
    precision: int = 5,
) -> BoundReport:
    """
    mu_taxi <= l_n^(1/n) for M = {tt} + taxi polygons of length <= polygon_max.

    polygons may be passed in (e.g. from the cache); only those of length
    <= polygon_max are used.
    """
    if polygon_max < 4 or n < 1:
        raise ComputationError("Need polygon_max >= 4 and n >= 1")
    if polygons is None:
        polygons = enumerate_taxi_polygons(polygon_max)
    chosen = [p for p in polygons if p.length <= polygon_max]
    mistakes = MistakeSet.taxi(chosen, polygon_max)
    l_n = count_avoiding_words(mistakes, n, engine)
    shifted = gj_shifted_bound(l_n, n, precision)
    return BoundReport.from_root(
        "gj",
        l_n,
        n,
        "upper",
        {
            "polygon_max": polygon_max,
            "n": n,
            "polygons": len(chosen),
            "mistakes": len(mistakes),
            "l_n_digits": len(str(l_n)),
            "shifted_variant": str(shifted.value),
        },
        precision,
    )
