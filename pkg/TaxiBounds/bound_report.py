"""
Bound Reports

Every bound on mu_taxi leaves the library as a BoundReport: a decimal value
rounded in the safe direction (up for upper bounds, down for lower bounds)
together with the matching activity bound lambda = mu^4 - 1.

Almost every bound in this package is a k-th root of an exact rational
(c_n^(1/n), lambda_1^(1/(n-m)), 1/x*, ...). Those are rounded by exact
verification: the decimal candidate q is checked with q^k >= base (or <=)
in rational arithmetic, so the published digits are certified, not estimated.
"""

from decimal import Decimal, ROUND_CEILING, ROUND_FLOOR
from fractions import Fraction
from typing import Any, Dict, Literal, Union

import mpmath
from pydantic import BaseModel, Field, model_validator

# Digits carried internally before directed rounding to the reported precision.
WORKING_DPS = 60
# Relative padding used only where no exact verification is available.
_PAD_EXPONENT = WORKING_DPS - 10

Rational = Union[int, Fraction]


class BoundReport(BaseModel):
    method: str
    value: Decimal  # bound on mu_taxi
    lambda_value: Decimal  # the same bound expressed as mu^4 - 1
    direction: Literal["upper", "lower"]
    parameters: Dict[str, Any] = Field(default_factory=dict)
    rounding: Literal["up", "down"]
    precision: int = 5

    @model_validator(mode="after")
    def _rounding_matches_direction(self):
        expected = "up" if self.direction == "upper" else "down"
        if self.rounding != expected:
            raise ValueError(f"{self.direction} bounds must be rounded {expected}")
        return self

    @property
    def is_upper(self) -> bool:
        return self.direction == "upper"

    @classmethod
    def from_root(
        cls,
        method: str,
        base: Rational,
        k: int,
        direction: str,
        parameters: Dict[str, Any] = None,
        precision: int = 5,
    ) -> "BoundReport":
        """
        Report the bound mu = base^(1/k) for an exact positive rational base.

        Args:
            method: Label of the bounding method
            base: Exact positive integer or Fraction
            k: Root index (k >= 1)
            direction: "upper" or "lower"
            parameters: Method parameters to record
            precision: Decimal places of the reported digit strings

        Returns:
            BoundReport whose value and lambda_value are certified on the safe side
        """
        up = direction == "upper"
        base = Fraction(base)
        quantum = Decimal(1).scaleb(-precision)
        mu = directed_root(base, k, precision, up)
        # lambda + 1 = mu^4 = (base^4)^(1/k)
        lam = directed_root(base ** 4, k, precision, up) - 1
        return cls(
            method=method,
            value=mu,
            lambda_value=lam.quantize(quantum),
            direction=direction,
            parameters=dict(parameters or {}),
            rounding="up" if up else "down",
            precision=precision,
        )

    @classmethod
    def from_mu(
        cls,
        method: str,
        mu: mpmath.mpf,
        direction: str,
        parameters: Dict[str, Any] = None,
        precision: int = 5,
    ) -> "BoundReport":
        """Report an irrational bound known only to WORKING_DPS digits (padded before rounding)."""
        up = direction == "upper"
        with mpmath.workdps(WORKING_DPS):
            mu = mpmath.mpf(mu)
            lam = mu ** 4 - 1
        return cls(
            method=method,
            value=padded_decimal(mu, precision, up),
            lambda_value=padded_decimal(lam, precision, up),
            direction=direction,
            parameters=dict(parameters or {}),
            rounding="up" if up else "down",
            precision=precision,
        )

    def as_row(self) -> Dict[str, str]:
        return {
            "method": self.method,
            "direction": self.direction,
            "mu": str(self.value),
            "lambda": str(self.lambda_value),
            "rounding": self.rounding,
        }


def _to_decimal(x: mpmath.mpf) -> Decimal:
    text = mpmath.nstr(x, WORKING_DPS - 5, min_fixed=-WORKING_DPS, max_fixed=WORKING_DPS)
    return Decimal(text)


def directed_root(base: Fraction, k: int, places: int, up: bool) -> Decimal:
    """
    Round base^(1/k) to `places` decimals, certified on the requested side.

    The mpmath estimate picks the candidate; exact rational comparison of
    candidate^k against base moves it one quantum at a time until it is on
    the safe side.
    """
    base = Fraction(base)
    if base <= 0 or k <= 0:
        raise ValueError("directed_root needs a positive base and root index")
    with mpmath.workdps(WORKING_DPS):
        approx = mpmath.root(mpmath.mpf(base.numerator) / base.denominator, k)
    quantum = Decimal(1).scaleb(-places)
    q = _to_decimal(approx).quantize(quantum, rounding=ROUND_CEILING if up else ROUND_FLOOR)
    if up:
        while Fraction(q) ** k < base:
            q += quantum
        while q - quantum > 0 and Fraction(q - quantum) ** k >= base:
            q -= quantum
    else:
        while q > 0 and Fraction(q) ** k > base:
            q -= quantum
        while Fraction(q + quantum) ** k <= base:
            q += quantum
    return q


def padded_decimal(x: mpmath.mpf, places: int, up: bool) -> Decimal:
    """
    Round x to a fixed number of decimal places after padding it by a
    relative 10^-(WORKING_DPS-10) toward the safe side.
    """
    with mpmath.workdps(WORKING_DPS):
        x = mpmath.mpf(x)
        pad = abs(x) * mpmath.mpf(10) ** (-_PAD_EXPONENT)
        padded = x + pad if up else x - pad
        text = _to_decimal(padded)
    quantum = Decimal(1).scaleb(-places)
    return text.quantize(quantum, rounding=ROUND_CEILING if up else ROUND_FLOOR)


def integer_root(value: Rational, n: int) -> mpmath.mpf:
    """value^(1/n) at WORKING_DPS digits (for display and sanity windows)."""
    value = Fraction(value)
    with mpmath.workdps(WORKING_DPS):
        return mpmath.root(mpmath.mpf(value.numerator) / value.denominator, n)
