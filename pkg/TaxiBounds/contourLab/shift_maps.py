"""
Shift Maps

For a contour with vertex interior W and a unit vector s:

    I_s  = (I outside W) + (I inside W shifted by s)
    I~_s = {v in W : v - s not in W}
    I''_s = I_s + I~_s

Any J = I_s + S with S a subset of I~_s determines I given s and gamma.
"""

import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Tuple

from ..errors import ContourError, TaxiBoundsError
from ..lattice import Vertex
from .box_config import UNIT_STEPS, BoxConfig
from .contour_builder import Contour, Edge, build_contour, interior_from_gamma

logger = logging.getLogger(__name__)

Shift = Tuple[int, int]


@dataclass(frozen=True)
class ShiftResult:
    s: Shift
    shifted: BoxConfig  # I_s
    tilde: FrozenSet[Vertex]  # I~_s
    augmented: BoxConfig  # I''_s


def _translate(vertices: Iterable[Vertex], s: Shift, sign: int = 1) -> FrozenSet[Vertex]:
    return frozenset(Vertex(v.x + sign * s[0], v.y + sign * s[1]) for v in vertices)


def tilde_set(interior: FrozenSet[Vertex], s: Shift) -> FrozenSet[Vertex]:
    """Vertices of W whose preimage under the shift lies outside W."""
    return frozenset(v for v in interior if Vertex(v.x - s[0], v.y - s[1]) not in interior)


def shift(config: BoxConfig, contour: Contour, s: Shift) -> ShiftResult:
    if s not in UNIT_STEPS:
        raise ContourError(f"{s} is not a unit shift")
    inside = frozenset(v for v in config.occupied if v in contour.interior)
    shifted = config.with_occupied((config.occupied - inside) | _translate(inside, s))
    tilde = tilde_set(contour.interior, s)
    return ShiftResult(
        s=s,
        shifted=shifted,
        tilde=tilde,
        augmented=shifted.with_occupied(shifted.occupied | tilde),
    )


def all_shifts(config: BoxConfig, contour: Contour) -> List[ShiftResult]:
    return [shift(config, contour, s) for s in UNIT_STEPS]


def best_shift(config: BoxConfig, contour: Contour) -> ShiftResult:
    """The first shift (in UNIT_STEPS order) with 4 |I~_s| >= |gamma|."""
    for result in all_shifts(config, contour):
        if 4 * len(result.tilde) >= contour.length:
            return result
    raise ContourError(f"No shift gains a quarter of the contour length {contour.length}")


def reconstruct(joined: BoxConfig, s: Shift, gamma: Iterable[Edge], verify: bool = True) -> BoxConfig:
    """
    Recover I from J = I_s + S, the shift s and the edge set gamma.

    With verify, the recovered I must also have gamma as its contour edges.

    Raises:
        ContourError: if J is not of that form for any I
    """
    gamma = frozenset(gamma)
    interior = interior_from_gamma(gamma, joined.n)
    tilde = tilde_set(interior, s)
    chosen = joined.occupied & tilde
    shifted = joined.occupied - chosen
    inside = frozenset(v for v in shifted if v in interior)
    back = _translate(inside, s, sign=-1)
    if not back <= interior:
        raise ContourError("Shifted vertices do not come from the contour interior")
    original = joined.with_occupied((shifted - inside) | back)
    problems = original.violations()
    if problems:
        raise ContourError(f"Reconstruction is not a valid configuration: {'; '.join(problems)}")
    if verify:
        try:
            rebuilt = build_contour(original)
        except TaxiBoundsError as e:
            raise ContourError(f"Reconstructed configuration has no contour: {e}") from e
        if rebuilt.gamma != gamma:
            raise ContourError("Reconstructed configuration has a different contour")
    return original
