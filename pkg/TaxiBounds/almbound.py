"""
Transfer-Matrix Upper Bound

A(m, n) has one row per length-m taxi walk (the prefix of a length-n walk) and
one column per length-m taxi walk at the origin (the canonical image of the
walk's last m steps). Entry (i, j) counts the length-n walks with prefix i and
suffix j; its largest eigenvalue lambda_1 satisfies

    mu_taxi <= lambda_1 ^ (1 / (n - m))

lambda_1 is bounded from above by the Collatz-Wielandt ratio max_i (Mu)_i / u_i,
evaluated exactly on a positive integer vector u found by power iteration.
"""

import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .bound_report import BoundReport
from .count_table import INT64_MAX
from .errors import ComputationError
from .walkcount import DEFAULT_PREFIX_DEPTH, WALK_FIRST_STEPS, count_taxi_walks, prefix_tasks, visit_walk_steps

logger = logging.getLogger(__name__)

WalkKey = Tuple[int, Tuple[bool, ...]]

DEFAULT_ITERATIONS = 500
DEFAULT_TOLERANCE = 1e-13
DEFAULT_FLOOR = 1e-200


def _encoding_key(dirs: Sequence[int], start: int, stop: int) -> WalkKey:
    """
    (a, sigma) of the steps dirs[start:stop] carried to the origin: a is N for
    a vertical first step and E for a horizontal one; sigma is recorded as
    "same direction as the previous step" flags.
    """
    return dirs[start] & 1, tuple(dirs[k] == dirs[k - 1] for k in range(start + 1, stop))


@lru_cache(maxsize=8)
def walk_index(m: int) -> Dict[WalkKey, int]:
    """Row/column index of every length-m taxi walk, in lexicographic (a, sigma) order."""
    index: Dict[WalkKey, int] = {}

    def add(dirs: List[int]) -> None:
        index[_encoding_key(dirs, 0, m)] = len(index)

    visit_walk_steps(m, add)
    return index


@dataclass
class TransferMatrix:
    """Sparse A(m, n) as sorted (row, col, count) triplets."""
    m: int
    n: int
    dim: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray

    @classmethod
    def from_counts(cls, m: int, n: int, dim: int, counts: Dict[Tuple[int, int], int]) -> "TransferMatrix":
        items = sorted(counts.items())
        dtype = np.int64
        if items and max(c for _, c in items) > INT64_MAX:
            logger.warning(f"⚠ A({m},{n}) has entries beyond 64 bits; storing exact Python integers")
            dtype = object
        rows = np.array([i for (i, _), _ in items], dtype=np.int64)
        cols = np.array([j for (_, j), _ in items], dtype=np.int64)
        vals = np.array([c for _, c in items], dtype=dtype)
        return cls(m, n, dim, rows, cols, vals)

    @property
    def nnz(self) -> int:
        return len(self.vals)

    def total(self) -> int:
        return sum(int(c) for c in self.vals)

    def triples(self) -> Iterator[Tuple[int, int, int]]:
        for i, j, c in zip(self.rows.tolist(), self.cols.tolist(), self.vals.tolist()):
            yield i, j, int(c)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.dim, self.dim), dtype=self.vals.dtype if self.nnz else np.int64)
        np.add.at(dense, (self.rows, self.cols), self.vals)
        return dense

    def matvec(self, v: np.ndarray) -> np.ndarray:
        """Floating-point M v."""
        weights = self.vals.astype(np.float64) * v[self.cols]
        return np.bincount(self.rows, weights=weights, minlength=self.dim)

    def exact_matvec(self, u: Sequence[int]) -> List[int]:
        """M u in exact integers for a nonnegative integer vector u."""
        u = np.asarray(u, dtype=object)
        out = np.zeros(self.dim, dtype=object)
        np.add.at(out, self.rows, self.vals.astype(object) * u[self.cols])
        return [int(x) for x in out]

    def permuted(self, perm: Sequence[int]) -> "TransferMatrix":
        """Copy with index i renamed perm[i] on both rows and columns."""
        perm = np.asarray(perm, dtype=np.int64)
        if sorted(perm.tolist()) != list(range(self.dim)):
            raise ComputationError("perm is not a permutation of the matrix indices")
        counts = {
            (int(perm[i]), int(perm[j])): c for i, j, c in self.triples()
        }
        return TransferMatrix.from_counts(self.m, self.n, self.dim, counts)


def _matrix_task(task: Tuple[int, int, Optional[Tuple[int, ...]]]) -> Dict[Tuple[int, int], int]:
    m, n, prefix = task
    index = walk_index(m)
    shift = n - m
    counts: Counter = Counter()

    def leaf(dirs: List[int]) -> None:
        counts[index[_encoding_key(dirs, 0, m)], index[_encoding_key(dirs, shift, n)]] += 1

    visit_walk_steps(n, leaf, prefix=prefix)
    return counts


def build_transfer_matrix(m: int, n: int, jobs: int = 1, prefix_depth: int = DEFAULT_PREFIX_DEPTH) -> TransferMatrix:
    """
    Build A(m, n) in one pass over all length-n taxi walks.

    m = 0 gives the 1x1 matrix [c_n].
    """
    if not 0 <= m < n:
        raise ComputationError(f"Need 0 <= m < n, got m={m}, n={n}")
    if m == 0:
        return TransferMatrix.from_counts(0, n, 1, {(0, 0): count_taxi_walks(n, jobs)})

    dim = len(walk_index(m))
    if jobs <= 1:
        counts = _matrix_task((m, n, None))
    else:
        split = min(prefix_depth, n)
        tasks = [(m, n, prefix) for prefix in prefix_tasks(split, WALK_FIRST_STEPS)]
        counts = Counter()
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_matrix_task, tasks, chunksize=max(1, len(tasks) // (jobs * 8))):
                counts.update(part)

    matrix = TransferMatrix.from_counts(m, n, dim, counts)
    logger.info(f"✓ Built A({m},{n}): dimension {dim}, {matrix.nnz} nonzero entries")
    return matrix


@dataclass
class EigenvalueEstimate:
    upper: Fraction  # certified: lambda_1 <= upper
    lower: Fraction  # Collatz-Wielandt min ratio on the same vector
    iterations: int

    def __float__(self) -> float:
        return float(self.upper)


def _integer_vector(v: np.ndarray, bits: int) -> List[int]:
    top = float(v.max())
    scale = float(2 ** bits) / top
    return [max(1, int(np.ceil(x * scale))) for x in v.tolist()]


def dominant_eigenvalue_upper(
    matrix: TransferMatrix,
    iters: int = DEFAULT_ITERATIONS,
    tol: float = DEFAULT_TOLERANCE,
    floor: float = DEFAULT_FLOOR,
) -> EigenvalueEstimate:
    """
    Certified upper bound on the spectral radius of a nonnegative matrix.

    Power iteration picks the vector with the smallest max-ratio; that vector
    is rounded up to positive integers and the ratio recomputed exactly.
    """
    if matrix.nnz == 0 or matrix.total() == 0:
        raise ComputationError("Matrix is all zeros")

    v = np.ones(matrix.dim)
    best, best_v = float("inf"), v
    previous = float("inf")
    done = 0
    for done in range(1, iters + 1):
        w = matrix.matvec(v)
        ratio = float((w / v).max())
        if ratio < best:
            best, best_v = ratio, v
        if abs(previous - ratio) <= tol * ratio:
            break
        previous = ratio
        v = np.maximum(w / w.max(), floor)

    u = _integer_vector(best_v, 52)
    mu = matrix.exact_matvec(u)
    ratios = [Fraction(a, b) for a, b in zip(mu, u)]
    estimate = EigenvalueEstimate(upper=max(ratios), lower=min(ratios), iterations=done)
    logger.debug(f"Collatz-Wielandt after {done} iterations: [{float(estimate.lower)}, {float(estimate.upper)}]")
    return estimate


def alm_upper_bound(
    m: int,
    n: int,
    jobs: int = 1,
    precision: int = 5,
    matrix: TransferMatrix = None,
) -> BoundReport:
    """mu_taxi <= lambda_1(A(m, n))^(1/(n-m)), rounded up."""
    if matrix is None:
        matrix = build_transfer_matrix(m, n, jobs)
    estimate = dominant_eigenvalue_upper(matrix)
    return BoundReport.from_root(
        "alm",
        estimate.upper,
        n - m,
        "upper",
        {"m": m, "n": n, "dimension": matrix.dim, "lambda1_upper": f"{float(estimate.upper):.12g}"},
        precision,
    )
