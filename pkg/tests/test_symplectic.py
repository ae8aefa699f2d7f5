from fractions import Fraction
import math
from itertools import product

import numpy as np
import pytest

from clgroups import heuristics as H
from clgroups import symplectic as S


@pytest.mark.parametrize("g,q,order", [(0, 2, 1), (0, 3, 1), (1, 2, 6), (1, 3, 24), (2, 2, 720), (2, 3, 51840)])
def test_sp_order(g, q, order):
    assert S.sp_order(g, q) == order


def test_sl2_order_enumeration():
    count = sum((a * d - b * c) % 2 == 1 for a, b, c, d in product(range(2), repeat=4))
    assert count == S.sp_order(1, 2)


def test_alpha_examples():
    assert [S.alpha(1, r, 2) for r in range(3)] == [Fraction(1, 3), Fraction(1, 2), Fraction(1, 6)]


@pytest.mark.parametrize("g,q", [(1, 2), (2, 2), (1, 3), (2, 3), (3, 2), (4, 5)])
def test_alpha_sums_to_one(g, q):
    assert sum(S.alpha(g, r, q) for r in range(2 * g + 1)) == 1


@pytest.mark.parametrize("g,q", [(2, 3), (3, 2), (3, 3)])
def test_alpha_counts_integral(g, q):
    for r in range(2 * g + 1):
        assert (S.alpha(g, r, q) * S.sp_order(g, q)).denominator == 1


@pytest.mark.parametrize(
    "g,q,expected",
    [(1, 2, {0: 2, 1: 3, 2: 1}), (1, 3, {0: 15, 1: 8, 2: 1}), (2, 2, {0: 304, 1: 300, 2: 100, 3: 15, 4: 1})],
)
def test_census_values(g, q, expected):
    assert S.eigenspace_census(g, q) == expected


@pytest.mark.parametrize("g,q", [(1, 2), (1, 3), (2, 2), (2, 3)])
def test_census_matches_formula(g, q):
    counts = S.eigenspace_census(g, q)
    order = S.sp_order(g, q)
    assert sum(counts.values()) == order
    assert all(counts[r] == S.alpha(g, r, q) * order for r in range(2 * g + 1))


def test_uncorrected_exponent_fails():
    bad = 0
    for g, q in [(1, 2), (1, 3), (2, 2), (2, 3)]:
        counts = S.eigenspace_census(g, q)
        bad += sum(counts[r] != S.alpha_uncorrected(g, r, q) * S.sp_order(g, q) for r in range(2 * g + 1))
    assert bad > 0


@pytest.mark.parametrize("g,q", [(1, 2), (1, 3), (2, 2)])
def test_filter_and_closure_agree(g, q):
    assert S.census_filter(g, q) == S.census_closure(g, q)


def test_filter_sharding_invariant():
    base = S.census_filter(2, 2)
    assert S.census_filter(2, 2, shards=7) == base
    assert S.census_filter(2, 2, shards=4, workers=2) == base


def test_size_guard():
    with pytest.raises(S.SizeGuardError):
        S.census_filter(2, 3)
    with pytest.raises(ValueError):
        S.eigenspace_census(1, 4)


def test_transvections_preserve_form():
    for g, q in [(1, 3), (2, 2), (2, 3)]:
        for m in S._transvections(g, q):
            assert S.is_symplectic(m, q)


def test_fixed_space_dim():
    assert S.fixed_space_dim(np.eye(4, dtype=np.int64), 3) == 4
    assert S.fixed_space_dim(np.array([[1, 1], [0, 1]]), 2) == 1
    assert S.fixed_space_dim(np.array([[0, 1], [-1, 0]]) % 3, 3) == 0


def test_alpha_limit_examples():
    # (3)_inf / (9)_inf from a direct float product
    ratio = math.exp(sum(math.log1p(-(3.0**-i)) - math.log1p(-(9.0**-i)) for i in range(1, 200)))
    assert abs(float(S.alpha_limit(0, 3, 1e-10)) - ratio) < 1e-10
    assert round(ratio, 3) == 0.639
    for q in (2, 3):
        for r in range(5):
            sit0 = H.Situation(0, "u0", "Fq(t)", "-", p=q, u=0, q=q, d=1)
            assert abs(float(S.alpha_limit(r, q).value - H.rank_prob(sit0, r).value)) < 1e-12
            assert abs(float(S.alpha(20, r, q) - S.alpha_limit(r, q).value)) < 1e-6


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("r", [0, 1, 2, 3])
def test_monotone_convergence(q, r):
    lim = S.alpha_limit(r, q, 1e-30)
    gaps = [abs(S.alpha(g, r, q) - lim.value) for g in range(max(r, 1), 21)]
    # beyond the resolution of the limit value the gaps carry no information
    resolved = [x for x in gaps if x > 4 * lim.err_bound]
    assert len(resolved) >= 5
    assert all(a > b for a, b in zip(resolved, resolved[1:]))
