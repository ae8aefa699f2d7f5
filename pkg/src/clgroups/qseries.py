"""Pochhammer-style products ``(q)_k = prod_{i<=k} (1 - q^-i)`` and their limits.

Finite products are exact :class:`~fractions.Fraction` values.  The infinite
product is returned as an :class:`ApproxReal`, an exact rational centre with a
rigorous absolute error bound, so that downstream formulas can propagate error
without ever touching floating point until display time.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

__all__ = [
    "ApproxReal",
    "ToleranceError",
    "poch_finite",
    "poch_inf",
    "rising_product",
    "geometric_tail",
    "round_half_away",
    "round_sig",
]

# Centres are snapped to this binary grid after every operation so that
# denominators stay bounded; the snapping error is added to the bound.
_GRID_BITS = 256


class ToleranceError(ArithmeticError):
    """Raised when a requested error tolerance cannot be met."""


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def _snap(value: Fraction, err: Fraction) -> tuple[Fraction, Fraction]:
    scale = 1 << _GRID_BITS
    if value.denominator <= scale:
        return value, err
    num = (value.numerator * scale) // value.denominator
    snapped = Fraction(num, scale)
    return snapped, err + (value - snapped)


@dataclass(frozen=True)
class ApproxReal:
    """A real number known to lie in ``[value - err, value + err]``."""

    value: Fraction
    err: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "value", _as_fraction(self.value))
        object.__setattr__(self, "err", _as_fraction(self.err))
        if self.err < 0:
            raise ValueError("error bound must be nonnegative")

    @classmethod
    def exact(cls, x) -> ApproxReal:
        return cls(_as_fraction(x), Fraction(0))

    @staticmethod
    def _coerce(other) -> ApproxReal:
        if isinstance(other, ApproxReal):
            return other
        return ApproxReal.exact(other)

    @property
    def err_bound(self) -> Fraction:
        return self.err

    @property
    def lower(self) -> Fraction:
        return self.value - self.err

    @property
    def upper(self) -> Fraction:
        return self.value + self.err

    def contains(self, x) -> bool:
        return self.lower <= _as_fraction(x) <= self.upper

    def __float__(self) -> float:
        return float(self.value)

    def __add__(self, other):
        o = self._coerce(other)
        return ApproxReal(*_snap(self.value + o.value, self.err + o.err))

    __radd__ = __add__

    def __neg__(self):
        return ApproxReal(-self.value, self.err)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        value = self.value * o.value
        err = abs(self.value) * o.err + abs(o.value) * self.err + self.err * o.err
        return ApproxReal(*_snap(value, err))

    __rmul__ = __mul__

    def reciprocal(self) -> ApproxReal:
        a = abs(self.value)
        if a <= self.err:
            raise ZeroDivisionError("interval contains zero")
        return ApproxReal(*_snap(1 / self.value, self.err / (a * (a - self.err))))

    def __truediv__(self, other):
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = ApproxReal.exact(1)
        for _ in range(n):
            result = result * self
        return result

    def __repr__(self) -> str:
        return f"ApproxReal({float(self.value)!r} ± {float(self.err):.3g})"


@lru_cache(maxsize=4096)
def poch_finite(q: int, k: int) -> Fraction:
    """Exact ``prod_{i=1}^k (1 - q^-i)``; the empty product is 1."""
    if q < 2 or k < 0:
        raise ValueError("need q >= 2 and k >= 0")
    if k == 0:
        return Fraction(1)
    return poch_finite(q, k - 1) * (1 - Fraction(1, q**k))


def geometric_tail(q: int, n: int) -> Fraction:
    """Bound on ``|log prod_{i>n} (1 - q^-i)|``, namely ``sum_{i>n} 2 q^-i``.

    Valid because ``|log(1 - x)| <= 2x`` for ``0 <= x <= 1/2``.
    """
    return Fraction(2, (q - 1) * q**n)


def poch_inf(q: int, tol: float = 1e-12) -> ApproxReal:
    """``(q)_inf`` to within ``tol``.

    Truncates at the smallest ``N`` whose geometric tail bound is below
    ``tol / 2``.  Since ``0 <= P_N - P_inf <= P_N (1 - e^-B) <= B``, the tail
    bound ``B`` itself is a valid absolute error for the partial product.
    """
    if q < 2:
        raise ValueError("need q >= 2")
    if not tol > 0:
        raise ValueError("tol must be positive")
    half = Fraction(tol) / 2
    n = 0
    while geometric_tail(q, n) >= half:
        n += 1
    # P_inf lies in [P_N - B, P_N]; centre the interval to halve the bound.
    bound = geometric_tail(q, n)
    return ApproxReal(poch_finite(q, n) - bound / 2, bound / 2)


def rising_product(q: int, a: int, b: int) -> int:
    """``prod_{i=a}^{b} (q^i - 1)``, equal to 1 when ``b < a``."""
    if q < 2:
        raise ValueError("need q >= 2")
    result = 1
    for i in range(a, b + 1):
        result *= q**i - 1
    return result


def round_half_away(x, ndigits: int) -> Decimal:
    """Round to ``ndigits`` decimal places, ties away from zero."""
    d = Decimal(x) if not isinstance(x, Fraction) else Decimal(x.numerator) / Decimal(x.denominator)
    return d.quantize(Decimal(1).scaleb(-ndigits), rounding=ROUND_HALF_UP)


def round_sig(x, digits: int) -> Decimal:
    """Round to ``digits`` significant digits, ties away from zero."""
    if isinstance(x, Fraction):
        d = Decimal(x.numerator) / Decimal(x.denominator)
    else:
        d = Decimal(x)
    if d == 0:
        return Decimal(0)
    exp = d.adjusted()
    return d.quantize(Decimal(1).scaleb(exp - digits + 1), rounding=ROUND_HALF_UP)
