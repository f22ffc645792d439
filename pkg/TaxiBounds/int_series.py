"""
Exact Integer Power Series

Truncated power series with arbitrary-precision integer coefficients, used for
B(x) = 1/(1 - A(x)) and for the Goulden-Jackson cluster generating function.
"""

from typing import Iterable, List

from .errors import ComputationError


class IntSeries:
    """
    Power series sum_{k<=order} c_k x^k with exact integer coefficients.

    Arithmetic between series of different orders truncates to the smaller one.
    """

    __slots__ = ("coefficients",)

    def __init__(self, coefficients: Iterable[int], order: int = None):
        coeffs = [int(c) for c in coefficients]
        if order is not None:
            coeffs = (coeffs + [0] * (order + 1))[: order + 1]
        if not coeffs:
            raise ComputationError("A series needs at least the constant coefficient")
        self.coefficients: List[int] = coeffs

    @classmethod
    def one(cls, order: int) -> "IntSeries":
        return cls([1], order)

    @classmethod
    def monomial(cls, power: int, order: int, coefficient: int = 1) -> "IntSeries":
        coeffs = [0] * (order + 1)
        if power <= order:
            coeffs[power] = coefficient
        return cls(coeffs)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k: int) -> int:
        return self.coefficients[k] if 0 <= k <= self.order else 0

    def __len__(self) -> int:
        return len(self.coefficients)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntSeries) and self.coefficients == other.coefficients

    def __repr__(self) -> str:
        return f"IntSeries({self.coefficients})"

    def truncate(self, order: int) -> "IntSeries":
        return IntSeries(self.coefficients, order)

    def __neg__(self) -> "IntSeries":
        return IntSeries([-c for c in self.coefficients])

    def __add__(self, other: "IntSeries") -> "IntSeries":
        order = min(self.order, other.order)
        return IntSeries([self[k] + other[k] for k in range(order + 1)])

    def __sub__(self, other: "IntSeries") -> "IntSeries":
        return self + (-other)

    def __mul__(self, other) -> "IntSeries":
        if isinstance(other, int):
            return IntSeries([c * other for c in self.coefficients])
        order = min(self.order, other.order)
        a, b = self.coefficients, other.coefficients
        out = [0] * (order + 1)
        for i in range(order + 1):
            ai = a[i]
            if ai == 0:
                continue
            for j in range(order - i + 1):
                out[i + j] += ai * b[j]
        return IntSeries(out)

    __rmul__ = __mul__

    def inverse(self) -> "IntSeries":
        """
        Multiplicative inverse up to the same order.

        Raises:
            ComputationError: if the constant term is not +1 or -1 (the inverse
            would leave the integers)
        """
        c0 = self.coefficients[0]
        if c0 not in (1, -1):
            raise ComputationError(f"Series with constant term {c0} has no integer inverse")
        a = self.coefficients
        inv = [0] * (self.order + 1)
        inv[0] = c0
        for k in range(1, self.order + 1):
            acc = 0
            for j in range(1, k + 1):
                acc += a[j] * inv[k - j]
            inv[k] = -acc * c0
        return IntSeries(inv)

