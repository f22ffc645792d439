"""
Configuration Sweeps

Generates the m-odd configurations with even boundary on U_n (all of them, or
an exactly uniform seeded sample) and runs every contour property on each.

Configurations are built row by row. A row is a bit mask over x = -n..n with
no two adjacent bits; consecutive rows must not share a bit. Odd vertices on
the rim of U_n touch the even exterior and are always empty, as are the even
neighbours of the odd vertices of U_m.

An exhaustive sweep splits each configuration I into its even part E and odd
part O. Then I' = E + F(E), where F(E) is the set of odd vertices of U_(n-1)
with no neighbour in E, and O ranges over every subset of F(E). The contour
depends on F(E) alone, so it is built once per class and the per-configuration
properties run on bit boards over the whole class.
"""

import hashlib
import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import chain, combinations
from typing import Dict, Iterator, List, Literal, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from ..errors import ContourError, InvariantViolation, TaxiBoundsError
from ..lattice import Vertex
from .box_bits import MAX_BITS, BoxBits, popcount, submasks
from .box_config import UNIT_STEPS, BoxConfig, box, in_box, is_even, m_odd_blocked
from .contour_builder import (
    Contour,
    build_contour,
    contour_to_taxi_walk,
    edge_parity_violations,
    interior_from_gamma,
    interior_violations,
    square_rule_violations,
    turn_pattern_violations,
)
from .shift_maps import all_shifts, reconstruct, tilde_set

logger = logging.getLogger(__name__)

CHECKS = (
    "augment",
    "cycle",
    "length",
    "taxi_walk",
    "turn_pattern",
    "square_rule",
    "edge_parity",
    "interior",
    "shift",
    "reconstruct",
)
# checks that depend on the contour only
CONTOUR_CHECKS = ("length", "taxi_walk", "turn_pattern", "square_rule", "interior")
MAX_COUNTEREXAMPLES = 10

# ---------------------------------------------------------------------------
# Row-mask transfer
# ---------------------------------------------------------------------------

class BoxProfile:
    """Allowed row masks of B_n^e and the number of completions above each row."""

    def __init__(self, n: int, m: int):
        if not 0 < m < n:
            raise ContourError(f"Need n > m >= 1, got n={n}, m={m}")
        self.n = n
        self.m = m
        self.width = 2 * n + 1
        blocked = m_odd_blocked(m)
        self.rows: List[List[int]] = []
        for y in range(-n, n + 1):
            free = 0
            for i in range(self.width):
                v = Vertex(i - n, y)
                rim = abs(v.x) == n or abs(v.y) == n
                if (rim and not is_even(v)) or v in blocked:
                    continue
                free |= 1 << i
            self.rows.append([a for a in range(1 << self.width) if a & (a >> 1) == 0 and a & ~free == 0])
        self._above = self._completions()

    def _completions(self) -> List[Dict[int, int]]:
        # above[r][a]: fillings of rows r+1.. given row r has mask a
        above: List[Dict[int, int]] = [dict() for _ in self.rows]
        above[-1] = {a: 1 for a in self.rows[-1]}
        for r in range(len(self.rows) - 2, -1, -1):
            nxt = above[r + 1]
            above[r] = {a: sum(c for b, c in nxt.items() if a & b == 0) for a in self.rows[r]}
        return above

    @property
    def total(self) -> int:
        return sum(self._above[0].values())

    def to_config(self, masks: Sequence[int]) -> BoxConfig:
        occupied = [
            (i - self.n, r - self.n)
            for r, a in enumerate(masks)
            for i in range(self.width)
            if a >> i & 1
        ]
        return BoxConfig.of(self.n, self.m, occupied)

    def masks(self) -> Iterator[Tuple[int, ...]]:
        """Every admissible sequence of row masks, bottom row first."""
        chosen: List[int] = []

        def extend(r: int) -> Iterator[Tuple[int, ...]]:
            if r == len(self.rows):
                yield tuple(chosen)
                return
            below = chosen[-1] if chosen else 0
            for a in self.rows[r]:
                if a & below == 0:
                    chosen.append(a)
                    yield from extend(r + 1)
                    chosen.pop()

        yield from extend(0)

    def sample_masks(self, rng: random.Random) -> Tuple[int, ...]:
        masks: List[int] = []
        below = 0
        for r in range(len(self.rows)):
            options = [(a, c) for a, c in self._above[r].items() if a & below == 0]
            pick = rng.randrange(sum(c for _, c in options))
            for a, c in options:
                if pick < c:
                    break
                pick -= c
            masks.append(a)
            below = a
        return tuple(masks)


def count_box_configs(n: int, m: int) -> int:
    """|B_n^e|, the number of m-odd configurations with even boundary on U_n."""
    return BoxProfile(n, m).total


def enumerate_box_configs(n: int, m: int) -> Iterator[BoxConfig]:
    profile = BoxProfile(n, m)
    for masks in profile.masks():
        yield profile.to_config(masks)


def sample_box_configs(n: int, m: int, count: int, seed: int = 0) -> List[BoxConfig]:
    """count configurations drawn uniformly (with replacement) from B_n^e."""
    profile = BoxProfile(n, m)
    rng = random.Random(seed)
    return [profile.to_config(profile.sample_masks(rng)) for _ in range(count)]



# ---------------------------------------------------------------------------
# Per-configuration checks
# ---------------------------------------------------------------------------

@dataclass
class CheckRecord:
    config: BoxConfig
    results: Dict[str, bool] = field(default_factory=dict)
    messages: List[str] = field(default_factory=list)
    # (digest of (J, s, gamma), digest of I) for the injectivity check
    witnesses: List[Tuple[bytes, bytes]] = field(default_factory=list)

    def record(self, check: str, problems: List[str]) -> None:
        self.results[check] = not problems
        self.messages.extend(f"{check}: {p}" for p in problems)

    @property
    def failed(self) -> List[str]:
        return [c for c in CHECKS if not self.results.get(c, False)]


def _digest(*parts: bytes) -> bytes:
    h = hashlib.blake2b(digest_size=16)
    for part in parts:
        h.update(part)
        h.update(b"|")
    return h.digest()


def _gamma_key(gamma) -> bytes:
    return ";".join(f"{u.x},{u.y}>{v.x},{v.y}" for u, v in sorted(gamma)).encode()


def _augment_problems(contour: Contour) -> List[str]:
    config, augmented = contour.config, contour.augmented
    problems = list(augmented.violations())
    if not config.occupied <= augmented.occupied:
        problems.append("I' does not contain I")
    missing = [v for v in box(config.m) if not is_even(v) and v not in augmented.occupied]
    if missing:
        problems.append(f"{len(missing)} odd vertices of U_{config.m} missing from I'")
    return problems


def _span_problems(contour: Contour) -> List[str]:
    best = max(len(tilde_set(contour.interior, s)) for s in UNIT_STEPS)
    if 4 * best < contour.length:
        return [f"max |I~_s| = {best} is below |gamma|/4 = {contour.length / 4}"]
    return []


def contour_level_problems(contour: Contour) -> Dict[str, List[str]]:
    """Problems of the checks in CONTOUR_CHECKS, which read nothing but the contour."""
    m = contour.config.m
    length = contour.length
    length_problems = []
    if length % 4:
        length_problems.append(f"|Gamma| = {length} is not a multiple of 4")
    if length * length < 8 * m * m:
        length_problems.append(f"|Gamma| = {length} is shorter than 2 sqrt(2) m")

    try:
        contour_to_taxi_walk(contour)
        walk_problems = []
    except TaxiBoundsError as e:
        walk_problems = [str(e)]

    interior_problems = interior_violations(contour)
    if interior_from_gamma(contour.gamma, contour.config.n) != contour.interior:
        interior_problems.append("interior recovered from gamma differs from the polygon interior")

    return {
        "length": length_problems,
        "taxi_walk": walk_problems,
        "turn_pattern": turn_pattern_violations(contour),
        "square_rule": square_rule_violations(contour),
        "interior": interior_problems,
    }


def _shift_problems(contour: Contour) -> List[str]:
    config = contour.config
    problems = []
    for result in all_shifts(config, contour):
        s = result.s
        if len(result.shifted.occupied) != len(config.occupied):
            problems.append(f"s={s}: |I_s| != |I|")
        if not result.shifted.is_independent():
            problems.append(f"s={s}: I_s is not independent")
        if result.tilde & result.shifted.occupied:
            problems.append(f"s={s}: I~_s meets I_s")
        if not result.augmented.is_independent():
            problems.append(f"s={s}: I''_s is not independent")
        if len(result.augmented.occupied) != len(result.shifted.occupied) + len(result.tilde):
            problems.append(f"s={s}: |I''_s| != |I_s| + |I~_s|")
        if not result.augmented.is_m_homogeneous():
            problems.append(f"s={s}: I''_s is not {config.m}-homogeneous")
    return problems + _span_problems(contour)


def _reconstruct_problems(contour: Contour, record: CheckRecord) -> List[str]:
    """
    Reconstruct I from J = I_s + S. The widest shift (largest I~_s) is tried
    with every subset S of I~_s, the others with S empty and S = I~_s. Each
    (J, s, gamma) is recorded as a witness for the injectivity count.
    """
    config = contour.config
    gamma_key = _gamma_key(contour.gamma)
    config_key = _digest(config.key())
    results = all_shifts(config, contour)
    widest = max(results, key=lambda r: len(r.tilde))
    problems = []
    for result in results:
        s = result.s
        tilde = sorted(result.tilde)
        if result is widest:
            subsets = chain.from_iterable(combinations(tilde, k) for k in range(len(tilde) + 1))
        else:
            subsets = [(), tuple(tilde)]
        for chosen in subsets:
            joined = result.shifted.with_occupied(result.shifted.occupied | set(chosen))
            try:
                back = reconstruct(joined, s, contour.gamma, verify=False)
            except ContourError as e:
                problems.append(f"s={s}, |S|={len(chosen)}: {e}")
                continue
            if back.occupied != config.occupied:
                problems.append(f"s={s}, |S|={len(chosen)}: reconstructed a different configuration")
            record.witnesses.append(
                (_digest(joined.key(), f"{s[0]},{s[1]}".encode(), gamma_key), config_key)
            )
    return problems


def contour_checks(config: BoxConfig) -> CheckRecord:
    """
    Build the contour of config and run every structural property on it.

    Never raises for a bad configuration; failures are recorded per check.
    """
    record = CheckRecord(config)
    try:
        contour = build_contour(config)
    except TaxiBoundsError as e:
        record.record("cycle", [str(e)])
        for check in CHECKS:
            record.results.setdefault(check, False)
        return record
    record.record("cycle", [])
    record.record("augment", _augment_problems(contour))
    for check, problems in contour_level_problems(contour).items():
        record.record(check, problems)
    record.record("edge_parity", edge_parity_violations(contour))
    record.record("shift", _shift_problems(contour))
    record.record("reconstruct", _reconstruct_problems(contour, record))
    return record


def _check_chunk(task: Tuple[int, int, List[List[List[int]]]]) -> List[CheckRecord]:
    """Worker entry point."""
    n, m, chunk = task
    return [contour_checks(BoxConfig.of(n, m, occupied)) for occupied in chunk]


# ---------------------------------------------------------------------------
# Exhaustive sweep by contour class
# ---------------------------------------------------------------------------

@dataclass
class SweepPart:
    """Tallies of one batch of configurations."""
    configurations: int = 0
    passed: Dict[str, int] = field(default_factory=lambda: {c: 0 for c in CHECKS})
    failed: Dict[str, int] = field(default_factory=lambda: {c: 0 for c in CHECKS})
    collisions: int = 0
    counterexamples: List["Counterexample"] = field(default_factory=list)


@lru_cache(maxsize=4)
def class_members(n: int, m: int) -> Tuple[BoxBits, np.ndarray, np.ndarray]:
    """Every admissible even part E, and F(E) for each."""
    bits = BoxBits(n, m)
    evens = submasks(bits.even_free)
    return bits, evens, bits.odd_free & ~bits.dilate(evens)


def _representative(bits: BoxBits, even: int) -> BoxConfig:
    return BoxConfig.of(bits.n, bits.m, bits.vertices_of(even))


@lru_cache(maxsize=8192)
def class_contour(n: int, m: int, free_set: int) -> Contour:
    """The contour shared by every configuration with F(E) = free_set."""
    bits, evens, free = class_members(n, m)
    return build_contour(_representative(bits, int(evens[np.argmax(free == free_set)])))


def contour_classes(n: int, m: int) -> List[List[int]]:
    """
    The free odd sets F(E), grouped by the edge set gamma of their contour.
    A class whose contour cannot be built forms a group of its own.
    """
    _, _, free = class_members(n, m)
    groups: Dict[object, List[int]] = {}
    for f in np.unique(free).tolist():
        try:
            key: object = class_contour(n, m, f).gamma
        except TaxiBoundsError:
            key = ("no contour", f)
        groups.setdefault(key, []).append(f)
    return list(groups.values())


def _reconstructs(bits: BoxBits, joined: np.ndarray, s, interior: int, tilde: int, configs: np.ndarray) -> np.ndarray:
    """reconstruct() on bit boards: does J give back I?"""
    back_step = (-s[0], -s[1])
    outside = bits.full ^ interior
    shifted = joined & (bits.full ^ tilde)
    inside = shifted & interior
    lost = inside & bits.leaving(back_step)
    back = bits.move(inside & ~lost, back_step)
    original = (shifted & outside) | back
    return (lost == 0) & ((back & outside) == 0) & bits.independent(original) & (original == configs)


def _shift_bits(bits: BoxBits, configs: np.ndarray, s, interior: int, tilde: int):
    """(I_s, I''_s, ok) on bit boards, ok mirroring _shift_problems for one s."""
    inside = configs & interior
    lost = inside & bits.leaving(s)
    shifted = (configs & (bits.full ^ interior)) | bits.move(inside & ~lost, s)
    joined = shifted | tilde
    size = popcount(shifted)
    ok = (
        (lost == 0)
        & (size == popcount(configs))
        & bits.independent(shifted)
        & ((shifted & tilde) == 0)
        & bits.independent(joined)
        & (popcount(joined) == size + tilde.bit_count())
        & bits.homogeneous(joined)
    )
    return shifted, joined, ok


def _fail_class(part: SweepPart, bits: BoxBits, f: int, evens: np.ndarray, free: np.ndarray, reason: str) -> None:
    members = evens[free == f]
    count = len(members) << f.bit_count()
    part.configurations += count
    for check in CHECKS:
        part.failed[check] += count
    if len(part.counterexamples) < MAX_COUNTEREXAMPLES:
        part.counterexamples.append(Counterexample(
            occupied=_representative(bits, int(members[0])).as_lists(),
            failed=list(CHECKS),
            messages=[f"cycle: {reason}"],
        ))


def check_contour_class(task: Tuple[int, int, List[int]]) -> SweepPart:
    """
    Run every check on all configurations whose free odd set is one of the
    given F, which must share one contour. Worker entry point.
    """
    n, m, free_sets = task
    bits, evens, free = class_members(n, m)
    part = SweepPart()

    try:
        contour = class_contour(n, m, free_sets[0])
    except TaxiBoundsError as e:
        for f in free_sets:
            _fail_class(part, bits, f, evens, free, str(e))
        return part

    level = contour_level_problems(contour)
    span = _span_problems(contour)
    level_messages = [f"{c}: {p}" for c, problems in level.items() for p in problems] + [f"shift: {p}" for p in span]
    inner_ends = bits.mask(u for u, _ in contour.gamma if in_box(u, n))
    outer_ends = bits.mask(v for _, v in contour.gamma if in_box(v, n))
    parity_ok = all(in_box(u, n) and is_even(u) and not is_even(v) for u, v in contour.gamma)
    interior = bits.mask(contour.interior)
    rebuilt = bits.mask(interior_from_gamma(contour.gamma, n))

    configs, augment_ok, edge_ok = [], [], []
    for f in free_sets:
        members = evens[free == f]
        odds = submasks(f)
        configs.append((members[:, None] | odds[None, :]).ravel())
        # I' = E + F(E) for every O
        per_even = bits.independent(members | np.uint64(f)) & ((bits.inner_odd & ~f) == 0)
        augment_ok.append(np.repeat(per_even, len(odds)))
        per_even = ((members & inner_ends) == 0) & ((f & outer_ends) == 0) & parity_ok
        edge_ok.append(np.repeat(per_even, len(odds)))

    shift_ok = [np.ones(len(c), dtype=bool) for c in configs]
    rebuild_ok = [np.ones(len(c), dtype=bool) for c in configs]
    widest = max(UNIT_STEPS, key=lambda s: len(tilde_set(contour.interior, s)))
    for s in UNIT_STEPS:
        tilde = bits.mask(tilde_set(contour.interior, s))
        rebuilt_tilde = bits.mask(tilde_set(interior_from_gamma(contour.gamma, n), s))
        keys = []
        for k, batch in enumerate(configs):
            shifted, joined, ok = _shift_bits(bits, batch, s, interior, tilde)
            shift_ok[k] &= ok
            rebuild_ok[k] &= _reconstructs(bits, shifted, s, rebuilt, rebuilt_tilde, batch)
            rebuild_ok[k] &= _reconstructs(bits, joined, s, rebuilt, rebuilt_tilde, batch)
            if s == widest:
                # J & ~I~_s = I_s for every S once I_s misses I~_s, so the
                # two joins above cover all 2^|I~_s| of them
                rebuild_ok[k] &= (shifted & rebuilt_tilde) == 0
            keys.append(shifted)
            if tilde:
                keys.append(joined)
        keys = np.concatenate(keys)
        part.collisions += keys.size - np.unique(keys).size

    for k, batch in enumerate(configs):
        size = batch.size
        results = {c: np.full(size, not level[c]) for c in CONTOUR_CHECKS}
        results["cycle"] = np.ones(size, dtype=bool)
        results["augment"] = augment_ok[k]
        results["edge_parity"] = edge_ok[k]
        results["shift"] = shift_ok[k] & (not span)
        results["reconstruct"] = rebuild_ok[k]
        part.configurations += size
        all_ok = np.ones(size, dtype=bool)
        for check in CHECKS:
            good = int(np.count_nonzero(results[check]))
            part.passed[check] += good
            part.failed[check] += size - good
            all_ok &= results[check]
        for i in np.flatnonzero(~all_ok)[:MAX_COUNTEREXAMPLES - len(part.counterexamples)]:
            failed = [c for c in CHECKS if not results[c][i]]
            part.counterexamples.append(Counterexample(
                occupied=_representative(bits, int(batch[i])).as_lists(),
                failed=failed,
                messages=level_messages + [f"{c}: fails on this configuration" for c in failed if c not in level],
            ))
    return part


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

class CheckTally(BaseModel):
    passed: int = 0
    failed: int = 0


class Counterexample(BaseModel):
    occupied: List[List[int]]
    failed: List[str]
    messages: List[str] = Field(default_factory=list)


class ContourReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(1, alias="schema")
    n: int
    m: int
    mode: Literal["exhaustive", "sampled"]
    seed: Optional[int] = None
    population: int  # |B_n^e|
    configurations: int = 0
    checks: Dict[str, CheckTally] = Field(default_factory=lambda: {c: CheckTally() for c in CHECKS})
    collisions: int = 0  # distinct I sharing one (J, s, gamma)
    counterexamples: List[Counterexample] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.collisions == 0 and all(t.failed == 0 for t in self.checks.values())

    def absorb(self, part: SweepPart) -> None:
        self.configurations += part.configurations
        self.collisions += part.collisions
        for check in CHECKS:
            self.checks[check].passed += part.passed[check]
            self.checks[check].failed += part.failed[check]
        room = MAX_COUNTEREXAMPLES - len(self.counterexamples)
        self.counterexamples.extend(part.counterexamples[:max(room, 0)])

    def as_json(self) -> Dict:
        data = self.model_dump(mode="json", by_alias=True)
        data["passed"] = self.passed
        return data


def _sweep_by_class(report: ContourReport, jobs: int) -> None:
    tasks = [(report.n, report.m, group) for group in contour_classes(report.n, report.m)]
    logger.info(f"[1/2] {len(tasks)} contour classes")
    if jobs <= 1:
        parts = map(check_contour_class, tasks)
        for part in parts:
            report.absorb(part)
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(check_contour_class, tasks):
                report.absorb(part)
    logger.info(f"[2/2] checked {report.configurations} configurations")
    if report.configurations != report.population:
        raise InvariantViolation(
            f"Contour classes cover {report.configurations} configurations, expected {report.population}"
        )


def _sweep_by_config(report: ContourReport, configs: Iterator[BoxConfig], jobs: int, chunk_size: int) -> None:
    n, m = report.n, report.m

    def chunks() -> Iterator[Tuple[int, int, List[List[List[int]]]]]:
        batch = []
        for config in configs:
            batch.append(config.as_lists())
            if len(batch) == chunk_size:
                yield n, m, batch
                batch = []
        if batch:
            yield n, m, batch

    owners: Dict[bytes, bytes] = {}
    seen = set()

    def absorb(records: List[CheckRecord]) -> None:
        for record in records:
            report.configurations += 1
            for check in CHECKS:
                tally = report.checks[check]
                if record.results.get(check, False):
                    tally.passed += 1
                else:
                    tally.failed += 1
            if record.failed and len(report.counterexamples) < MAX_COUNTEREXAMPLES:
                report.counterexamples.append(Counterexample(
                    occupied=record.config.as_lists(),
                    failed=record.failed,
                    messages=record.messages[:10],
                ))
            for key, owner in record.witnesses:
                # a sample may repeat a configuration; only distinct owners collide
                previous = owners.setdefault(key, owner)
                if previous != owner and (key, owner) not in seen:
                    seen.add((key, owner))
                    report.collisions += 1

    if jobs <= 1:
        for task in chunks():
            absorb(_check_chunk(task))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for records in pool.map(_check_chunk, chunks()):
                absorb(records)


def run_contour_sweep(
    n: int,
    m: int,
    mode: str = "sampled",
    samples: int = 1000,
    seed: int = 0,
    jobs: int = 1,
    chunk_size: int = 64,
) -> ContourReport:
    """
    Check every configuration of B_n^e (mode="exhaustive") or a uniform
    sample of them (mode="sampled").

    Exhaustive sweeps of boxes that fit a 64-bit board run class by class;
    larger boxes fall back to one configuration at a time.

    Args:
        n: Box radius
        m: Inner radius (1 <= m < n)
        mode: "exhaustive" or "sampled"
        samples: Sample size for mode="sampled"
        seed: Sampling seed
        jobs: Worker processes
        chunk_size: Configurations per worker task in the per-configuration sweep

    Returns:
        ContourReport with per-check tallies, collisions and counterexamples
    """
    if mode not in ("exhaustive", "sampled"):
        raise ContourError(f"Unknown sweep mode: {mode}")
    profile = BoxProfile(n, m)
    report = ContourReport(
        n=n,
        m=m,
        mode=mode,
        seed=seed if mode == "sampled" else None,
        population=profile.total,
    )
    logger.info(f"Contour sweep n={n}, m={m}, {mode}: population {report.population}")

    if mode == "exhaustive" and (2 * n + 1) ** 2 <= MAX_BITS:
        _sweep_by_class(report, jobs)
    elif mode == "exhaustive":
        logger.warning(f"U_{n} does not fit a bit board; checking {report.population} configurations one by one")
        _sweep_by_config(report, (profile.to_config(masks) for masks in profile.masks()), jobs, chunk_size)
    else:
        if samples < 1:
            raise ContourError("Need at least one sample")
        rng = random.Random(seed)
        configs = (profile.to_config(profile.sample_masks(rng)) for _ in range(samples))
        _sweep_by_config(report, configs, jobs, chunk_size)

    if report.passed:
        logger.info(f"✓ {report.configurations} configurations passed every contour check")
    else:
        failing = {c: t.failed for c, t in report.checks.items() if t.failed}
        logger.error(f"✗ Contour checks failed: {failing}, collisions={report.collisions}")
    return report
