"""
Peierls Tail Condition

Contours around U_m have at least sqrt(2) m edges, so with r = mu^4 / (1 + lambda)
the weight of all of them is bounded by the geometric tail

    sum_{l >= L} r^l = r^L / (1 - r),   L = ceil(sqrt(2) m / 2)

which must be below 1/3.
"""

import logging
from decimal import Decimal
from fractions import Fraction
from math import isqrt
from typing import Union

import mpmath
from pydantic import BaseModel, Field, field_validator

from ..bound_report import WORKING_DPS
from ..errors import ComputationError, InvariantViolation

logger = logging.getLogger(__name__)

THRESHOLD = Fraction(1, 3)
RELATIVE_TOLERANCE = mpmath.mpf("1e-12")

Rational = Union[int, Fraction]


class TailParams(BaseModel):
    mu: Decimal  # candidate value of mu_taxi
    lam: Decimal = Field(alias="lambda")  # hard-core activity
    m: int = Field(ge=1)  # inner box radius

    model_config = {"populate_by_name": True}

    @field_validator("mu")
    @classmethod
    def _mu_above_one(cls, mu: Decimal) -> Decimal:
        if mu <= 1:
            raise ValueError("mu must exceed 1")
        return mu

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.mu) ** 4 / (1 + Fraction(self.lam))


class TailReport(BaseModel):
    mu: str
    lam: str
    m: int
    ratio: str  # r = mu^4 / (1 + lambda)
    ell: int  # L for this m
    tail: str
    partial_sum: str
    passes: bool  # tail < 1/3
    minimal_ell: int
    minimal_m: int


def min_ell(m: int) -> int:
    """ceil(sqrt(2) m / 2), the least L with 2 L^2 >= m^2."""
    ell = isqrt(m * m // 2)
    while 2 * ell * ell < m * m:
        ell += 1
    return ell


def tail_sum(r: Rational, ell: int) -> Fraction:
    """r^L / (1 - r), exactly."""
    r = Fraction(r)
    if not 0 <= r < 1:
        raise ComputationError(f"Geometric tail diverges for r = {float(r):.6g} >= 1")
    return r ** ell / (1 - r)


def partial_tail_sum(r: Rational, ell: int) -> mpmath.mpf:
    """sum_{l >= L} r^l by direct summation, stopped once a term is below the tolerance."""
    r = Fraction(r)
    if not 0 <= r < 1:
        raise ComputationError(f"Geometric tail diverges for r = {float(r):.6g} >= 1")
    with mpmath.workdps(WORKING_DPS):
        x = mpmath.mpf(r.numerator) / r.denominator
        term = x ** ell
        total = mpmath.mpf(0)
        while term > 0 and term > total * RELATIVE_TOLERANCE * mpmath.mpf("1e-3"):
            total += term
            term *= x
        return total


def _to_decimal(x: Rational) -> str:
    x = Fraction(x)
    with mpmath.workdps(WORKING_DPS):
        return mpmath.nstr(mpmath.mpf(x.numerator) / x.denominator, 20)


def minimal_m(r: Rational) -> tuple:
    """(L, m): the least L with r^L / (1 - r) < 1/3 and the least m reaching it."""
    r = Fraction(r)
    closed = tail_sum(r, 0)
    ell = 0
    while closed >= THRESHOLD:
        closed *= r
        ell += 1
    m = max(1, isqrt(2 * ell * ell) - 1)
    while min_ell(m) < ell:
        m += 1
    while m > 1 and min_ell(m - 1) >= ell:
        m -= 1
    return ell, m


def peierls_tail(params: TailParams) -> TailReport:
    """
    Evaluate the tail condition for (mu, lambda, m).

    Raises:
        ComputationError: if mu^4 >= 1 + lambda
        InvariantViolation: if the closed form and the direct sum disagree
    """
    r = params.ratio
    ell = min_ell(params.m)
    tail = tail_sum(r, ell)
    partial = partial_tail_sum(r, ell)
    with mpmath.workdps(WORKING_DPS):
        closed = mpmath.mpf(tail.numerator) / tail.denominator
        if abs(closed - partial) > RELATIVE_TOLERANCE * closed:
            raise InvariantViolation(f"Tail closed form {closed} disagrees with the direct sum {partial}")
    best_ell, best_m = minimal_m(r)
    report = TailReport(
        mu=str(params.mu),
        lam=str(params.lam),
        m=params.m,
        ratio=_to_decimal(r),
        ell=ell,
        tail=_to_decimal(tail),
        partial_sum=mpmath.nstr(partial, 20),
        passes=tail < THRESHOLD,
        minimal_ell=best_ell,
        minimal_m=best_m,
    )
    mark = "✓" if report.passes else "✗"
    logger.info(f"{mark} Peierls tail at m={params.m}: {report.tail} (minimal m = {best_m})")
    return report
