"""Polynomial and field-count arithmetic.

Contents: the dihedral quintic family, exact discriminants (Sylvester
determinant and subresultant chain), real-root counting by Sturm sequences,
and the asymptotic field-count formulas used to size the data sets.

The quintic family is written with parameters ``(a, b, t)``; these are the
``(u, v, t)`` of the usual presentation, renamed because ``u`` already
denotes a unit rank elsewhere in this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

__all__ = [
    "IntPolynomial",
    "d5_polynomial",
    "iter_d5_family",
    "sylvester_matrix",
    "bareiss_determinant",
    "resultant",
    "discriminant",
    "sturm_sequence",
    "real_root_count",
    "rational_roots",
    "ROBERTS_C1",
    "ROBERTS_C2",
    "roberts_count",
    "roberts_expected",
    "LINEAR_COUNT_CONSTANTS",
    "linear_count_expected",
    "D5_LOWER_BOUND_CONSTANTS",
    "d5_lower_bound",
]


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients listed constant term first."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Sequence[int]):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # zero polynomial has degree -1

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPolynomial([x + y for x, y in zip(a, b)])

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial([-x for x in self.coeffs])

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        return self + (-other)

    def __mul__(self, other) -> IntPolynomial:
        if isinstance(other, int):
            return IntPolynomial([x * other for x in self.coeffs])
        if not self.coeffs or not other.coeffs:
            return IntPolynomial([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] += x * y
        return IntPolynomial(out)

    __rmul__ = __mul__

    def derivative(self) -> IntPolynomial:
        return IntPolynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def shift(self, c: int) -> IntPolynomial:
        """``f(X + c)``."""
        out = IntPolynomial([])
        lin = IntPolynomial([c, 1])
        for coef in reversed(self.coeffs):
            out = out * lin + IntPolynomial([coef])
        return out

    def __str__(self) -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("X" if i == 1 else f"X^{i}")
            mag = abs(c)
            body = str(mag) if (mag != 1 or i == 0) else ""
            body = body + ("*" if body and mono else "") + mono
            terms.append(("-" if c < 0 else "+") + " " + body)
        if not terms:
            return "0"
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


X = IntPolynomial([0, 1])


def d5_polynomial(a: int, b: int, t: int) -> IntPolynomial:
    """``X^5 - 2bX^4 - a(5a^2-10ab+4b^2)X^2 + 2a^2(5a-4b)(a-b)X - 4a^3(a-b)^2 - X^2(X-a)t``."""
    if math.gcd(a, b) != 1:
        raise ValueError(f"gcd({a}, {b}) != 1")
    c0 = -4 * a**3 * (a - b) ** 2
    c1 = 2 * a**2 * (5 * a - 4 * b) * (a - b)
    c2 = -a * (5 * a * a - 10 * a * b + 4 * b * b) + a * t
    c3 = -t
    c4 = -2 * b
    return IntPolynomial([c0, c1, c2, c3, c4, 1])


def iter_d5_family(a_range: range, b_range: range, t_range: range) -> Iterator[tuple[int, int, int, IntPolynomial]]:
    """Members of the family in lexicographic ``(a, b, t)`` order, coprime ``(a, b)`` only."""
    for a in a_range:
        for b in b_range:
            if math.gcd(a, b) != 1:
                continue
            for t in t_range:
                yield a, b, t, d5_polynomial(a, b, t)


# --- resultants and discriminants -----------------------------------------


def sylvester_matrix(f: IntPolynomial, g: IntPolynomial) -> list[list[int]]:
    m, n = f.degree, g.degree
    size = m + n
    fc = list(reversed(f.coeffs))
    gc = list(reversed(g.coeffs))
    rows = []
    for i in range(n):
        rows.append([0] * i + fc + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gc + [0] * (size - n - 1 - i))
    return rows


def bareiss_determinant(matrix: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination; exact for integer matrices."""
    a = [row[:] for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _poly_divmod(f: list[Fraction], g: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    # coefficient lists, constant first, g nonzero
    r = f[:]
    q = [Fraction(0)] * max(len(f) - len(g) + 1, 1)
    while len(r) >= len(g) and any(r):
        shift = len(r) - len(g)
        c = r[-1] / g[-1]
        q[shift] = c
        for i, gc in enumerate(g):
            r[i + shift] -= c * gc
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return q, r


def _content(c: list[int]) -> int:
    g = 0
    for x in c:
        g = math.gcd(g, x)
    return g


def _pseudo_remainder(a: list[int], b: list[int]) -> list[int]:
    """``prem(A, B)``: remainder of ``lc(B)^{deg A - deg B + 1} A`` by ``B``."""
    r = a[:]
    lb = b[-1]
    e = len(a) - len(b) + 1
    while r and len(r) >= len(b):
        shift = len(r) - len(b)
        lr = r[-1]
        r = [x * lb for x in r]
        for i, bc in enumerate(b):
            r[i + shift] -= lr * bc
        r.pop()
        e -= 1
        while r and r[-1] == 0:
            r.pop()
    return [x * lb**e for x in r]


def _subresultant_resultant(f: IntPolynomial, g: IntPolynomial) -> int:
    """Resultant by the subresultant pseudo-remainder sequence over Z."""
    a, b = list(f.coeffs), list(g.coeffs)
    if not a or not b:
        return 0
    ca, cb = _content(a), _content(b)
    a = [x // ca for x in a]
    b = [x // cb for x in b]
    da, db = len(a) - 1, len(b) - 1
    t = ca**db * cb**da
    s = 1
    if da < db:
        a, b = b, a
        da, db = db, da
        if da % 2 and db % 2:
            s = -1
    gg, h = 1, 1
    while db > 0:
        delta = da - db
        if da % 2 and db % 2:
            s = -s
        r = _pseudo_remainder(a, b)
        if not r:
            return 0
        a = b
        divisor = gg * h**delta
        b = [x // divisor for x in r]
        da, db = len(a) - 1, len(b) - 1
        gg = a[-1]
        h = gg**delta // h ** (delta - 1) if delta >= 1 else h
    h = b[-1] ** da // h ** (da - 1) if da >= 1 else h
    return s * t * h


def resultant(f: IntPolynomial, g: IntPolynomial, method: str = "subresultant") -> int:
    if method == "sylvester":
        if f.degree < 0 or g.degree < 0:
            return 0
        return bareiss_determinant(sylvester_matrix(f, g))
    if method == "subresultant":
        return _subresultant_resultant(f, g)
    raise ValueError(f"unknown resultant method {method!r}")


def discriminant(f: IntPolynomial, method: str = "subresultant") -> int:
    """``(-1)^{n(n-1)/2} Res(f, f') / lc(f)``."""
    n = f.degree
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    if n == 1:
        return 1
    res = resultant(f, f.derivative(), method)
    num = (-1) ** (n * (n - 1) // 2) * res
    if num % f.lc:
        raise ArithmeticError("resultant not divisible by the leading coefficient")
    return num // f.lc


# --- real roots -----------------------------------------------------------


def sturm_sequence(f: IntPolynomial) -> list[list[Fraction]]:
    p0 = [Fraction(c) for c in f.coeffs]
    p1 = [Fraction(c) for c in f.derivative().coeffs]
    seq = [p0, p1]
    while len(seq[-1]) > 1:
        _, r = _poly_divmod(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def _sign_changes(signs: list[int]) -> int:
    signs = [s for s in signs if s]
    return sum(1 for x, y in zip(signs, signs[1:]) if x != y)


def real_root_count(f: IntPolynomial) -> int:
    """Number of distinct real roots of a squarefree polynomial."""
    if f.degree < 1:
        return 0
    if discriminant(f) == 0:
        raise ValueError("real_root_count needs a squarefree polynomial")
    seq = sturm_sequence(f)
    at_pos = [1 if p[-1] > 0 else -1 for p in seq]
    at_neg = [(1 if p[-1] > 0 else -1) * (-1) ** (len(p) - 1) for p in seq]
    return _sign_changes(at_neg) - _sign_changes(at_pos)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    out = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            if i * i != n:
                out.append(n // i)
        i += 1
    return sorted(out)


def rational_roots(f: IntPolynomial) -> list[Fraction]:
    """Rational roots, found by testing candidates ``p/s`` near the real roots.

    Candidates come from a floating-point root estimate; each is then
    verified exactly, so the screen never reports a false root.  Intended as
    a cheap reducibility filter, not a factorisation.
    """
    import numpy as np

    if f.degree < 1:
        return []
    roots = set()
    if f.coeffs[0] == 0:
        roots.add(Fraction(0))
    approx = np.roots([float(c) for c in reversed(f.coeffs)])
    for z in approx:
        if abs(z.imag) > 1e-6 * max(1.0, abs(z)):
            continue
        for s in _divisors(f.lc):
            centre = round(z.real * s)
            for p in (centre - 1, centre, centre + 1):
                x = Fraction(p, s)
                if f(x) == 0:
                    roots.add(x)
    return sorted(roots)


# --- asymptotic field counts -------------------------------------------------

ROBERTS_C1 = 0.06932561438172562
ROBERTS_C2 = 0.403483636663946799


def roberts_count(x: float) -> float:
    """``c1 X - c2 X^{5/6} / (sqrt 3 + 1)``, totally real cubic fields up to ``X``."""
    return ROBERTS_C1 * x - ROBERTS_C2 * x ** (5 / 6) / (math.sqrt(3) + 1)


def roberts_expected(d1: float, d2: float) -> float:
    """Expected number of fields with discriminant in ``[d1, d2]``."""
    if not 0 < d1 <= d2:
        raise ValueError("need 0 < d1 <= d2")
    width = d2 - d1
    # D2^{5/6} - D1^{5/6} without cancellation
    power_gap = d1 ** (5 / 6) * math.expm1((5 / 6) * math.log1p(width / d1))
    return ROBERTS_C1 * width - ROBERTS_C2 * power_gap / (math.sqrt(3) + 1)


LINEAR_COUNT_CONSTANTS = {
    "q2_sqrt-3": 0.02613532018111,
    "q2_sqrt-3_paired": 0.01306766,
    "q2_sqrt5": 0.001852542,
    "q2_sqrt-1": 0.008144834,
    "q2_mu5": 0.12444267e-5,
}

D5_LOWER_BOUND_CONSTANTS = {"complex": 0.07599, "real": 0.01507}


def linear_count_expected(key: str, x1: float, x2: float) -> float:
    """``const * (x2 - x1)`` for a registered linear growth constant."""
    try:
        const = LINEAR_COUNT_CONSTANTS[key]
    except KeyError:
        raise KeyError(f"unknown count constant {key!r}; known: {', '.join(LINEAR_COUNT_CONSTANTS)}") from None
    if not 0 <= x1 <= x2:
        raise ValueError("need 0 <= x1 <= x2")
    return const * (x2 - x1)


def d5_lower_bound(x: float, signature: str) -> float:
    """Lower-bound count ``const * sqrt(X)`` of dihedral quintic fields."""
    return D5_LOWER_BOUND_CONSTANTS[signature] * math.sqrt(x)
