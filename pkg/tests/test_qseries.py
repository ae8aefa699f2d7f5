from decimal import Decimal
from fractions import Fraction
import math

import pytest
from hypothesis import given, strategies as st

from clgroups.qseries import (
    ApproxReal,
    ToleranceError,
    geometric_tail,
    poch_finite,
    poch_inf,
    rising_product,
    round_half_away,
    round_sig,
)


def float_poch_inf(q, terms=400):
    # independent oracle: direct float product in log space
    return math.exp(sum(math.log1p(-q ** -i) for i in range(1, terms)))


@pytest.mark.parametrize("q,k,expected", [(2, 0, 1), (3, 0, 1), (2, 1, Fraction(1, 2)), (3, 2, Fraction(16, 27))])
def test_poch_finite_examples(q, k, expected):
    assert poch_finite(q, k) == expected


@given(st.integers(2, 9), st.integers(1, 30))
def test_poch_finite_recurrence(q, k):
    assert poch_finite(q, k) == poch_finite(q, k - 1) * (1 - Fraction(1, q**k))


@pytest.mark.parametrize("q,approx", [(3, 0.56012), (2, 0.28879)])
def test_poch_inf_examples(q, approx):
    v = poch_inf(q, 1e-12)
    assert v.err_bound <= Fraction(1, 10**12)
    assert abs(float(v) - approx) < 1e-5
    assert v.contains(Fraction(float_poch_inf(q))) or abs(float(v) - float_poch_inf(q)) < 1e-14


@pytest.mark.parametrize("q", [2, 3, 4, 5, 9, 25])
def test_poch_inf_bracketed_by_partial_products(q):
    v = poch_inf(q, 1e-14)
    for n in (5, 10, 20, 40):
        assert v.upper <= poch_finite(q, n) + v.err_bound
        assert abs(v.value - poch_finite(q, n)) <= Fraction(1, 10**14) + geometric_tail(q, n)
    assert v.lower > 0


@pytest.mark.parametrize("q", [2, 3, 7])
def test_finite_decreasing_and_above_limit(q):
    lim = poch_inf(q, 1e-15)
    vals = [poch_finite(q, k) for k in range(15)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert all(v >= lim.lower for v in vals)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
@pytest.mark.parametrize("u", [0, 1, 2])
def test_euler_identity(q, u):
    tol = 1e-13
    closed = (poch_finite(q * q, u) * poch_inf(q, tol)) / (poch_finite(q, u) * poch_inf(q * q, tol))
    m = 60
    # the closed form is the reciprocal of prod_{i>u} (1 + q^-i)
    prod = Fraction(1)
    for i in range(u + 1, m + 1):
        prod /= 1 + Fraction(1, q**i)
    # tail of the product is at most exp(2 q^-m) - 1
    slack = closed.err_bound + Fraction(3, q**m)
    assert abs(closed.value - prod) <= slack


def test_poch_inf_rejects_bad_args():
    with pytest.raises((ValueError, ToleranceError)):
        poch_inf(1)
    with pytest.raises((ValueError, ToleranceError)):
        poch_inf(2, 0)


@pytest.mark.parametrize("q,a,b,expected", [(2, 3, 2, 1), (3, 2, 2, 8), (2, 3, 4, 105), (2, 1, 0, 1)])
def test_rising_product(q, a, b, expected):
    assert rising_product(q, a, b) == expected


def test_approx_arithmetic_bounds():
    x = ApproxReal(Fraction(1, 3), Fraction(1, 1000))
    y = ApproxReal(Fraction(2, 7), Fraction(1, 500))
    for op in (lambda a, b: a + b, lambda a, b: a - b, lambda a, b: a * b, lambda a, b: a / b):
        res = op(x, y)
        for xv in (x.lower, x.upper, x.value):
            for yv in (y.lower, y.upper, y.value):
                assert res.contains(op(xv, yv))


def test_approx_exact_and_pow():
    x = ApproxReal.exact(Fraction(3, 2))
    assert x.err_bound == 0
    assert (x**3).contains(Fraction(27, 8))
    assert (1 / x).contains(Fraction(2, 3))
    with pytest.raises(ValueError):
        ApproxReal(Fraction(1), Fraction(-1))


@pytest.mark.parametrize(
    "x,nd,expected",
    [(Fraction(5, 2), 0, "3"), (Fraction(-5, 2), 0, "-3"), (Fraction(1, 8), 2, "0.13"), (0.8520, 3, "0.852")],
)
def test_round_half_away(x, nd, expected):
    assert round_half_away(x, nd) == Decimal(expected)


def test_round_sig():
    assert round_sig(Fraction(16501, 10**9), 2) == Decimal("0.000017")
    assert round_sig(0.0765042, 2) == Decimal("0.077")
