from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from clgroups.bruteforce import aut_count, aut_count_eisenstein
from clgroups.pgroups import (
    MalformedLabelError,
    MixedPrimesError,
    NotPrimePowerError,
    PartitionType,
    aut_order,
    conjugate,
    enumerate_types,
    format_divisors,
    format_type,
    group_order_exponent,
    module_rank,
    module_type_from_abelian,
    parse_type,
    partitions_of,
    underlying_abelian,
)
from clgroups.qseries import poch_finite

P = PartitionType.of


def gl_order_bruteforce(r, p):
    """Count invertible r x r matrices mod p by full enumeration."""
    from itertools import product

    count = 0
    for entries in product(range(p), repeat=r * r):
        m = np.array(entries).reshape(r, r)
        # Gaussian elimination rank mod p
        a = m.copy() % p
        rank = 0
        for c in range(r):
            piv = next((i for i in range(rank, r) if a[i, c]), None)
            if piv is None:
                continue
            a[[rank, piv]] = a[[piv, rank]]
            a[rank] = (a[rank] * pow(int(a[rank, c]), -1, p)) % p
            for i in range(r):
                if i != rank and a[i, c]:
                    a[i] = (a[i] - a[i, c] * a[rank]) % p
            rank += 1
        count += rank == r
    return count


def test_partition_validation():
    with pytest.raises(ValueError):
        PartitionType((1, 2))
    with pytest.raises(ValueError):
        PartitionType((2, 0))
    assert P(3, 1) == PartitionType((3, 1))
    assert P().size == 0 and P().length == 0


@pytest.mark.parametrize("lam,size,rank", [((), 0, 0), ((2, 1), 3, 2), ((1, 1, 1), 3, 3), ((1,), 1, 1), ((3, 1), 4, 2)])
def test_size_and_rank(lam, size, rank):
    assert group_order_exponent(lam) == size
    assert module_rank(lam) == rank


@pytest.mark.parametrize(
    "lam,d,p,expected", [((1,), 2, 2, [2, 2]), ((2, 1), 2, 2, [4, 4, 2, 2]), ((), 2, 2, []), ((3, 1), 1, 3, [27, 3])]
)
def test_underlying_abelian(lam, d, p, expected):
    assert underlying_abelian(lam, d, p) == expected


def test_module_type_from_abelian():
    assert module_type_from_abelian(P(1, 1), 2) == P(1)
    assert module_type_from_abelian(P(2, 2, 1, 1), 2) == P(2, 1)
    assert module_type_from_abelian(P(2, 1), 2) is None


@pytest.mark.parametrize("lam,q,expected", [((1,), 2, 1), ((1, 1), 3, 48), ((2, 1), 2, 8), ((), 5, 1), ((2,), 3, 6)])
def test_aut_order_examples(lam, q, expected):
    assert aut_order(lam, q) == expected


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("r", [1, 2, 3, 4])
def test_aut_of_elementary_is_gl(q, r):
    gl = Fraction(q ** (r * r)) * poch_finite(q, r)
    assert aut_order((1,) * r, q) == gl


@pytest.mark.parametrize("r,p", [(1, 2), (2, 2), (2, 3), (3, 2)])
def test_gl_order_against_enumeration(r, p):
    assert aut_order((1,) * r, p) == gl_order_bruteforce(r, p)


@pytest.mark.parametrize("q,bound", [(2, 4), (3, 3)])
def test_aut_order_bruteforce(q, bound):
    for t in enumerate_types(bound):
        assert aut_count(t.parts, q) == aut_order(t, q), t


@pytest.mark.parametrize("lam", [(1,), (2,), (1, 1), (3,), (2, 1)])
def test_aut_order_eisenstein_modules(lam):
    # modules over Z[w] at 2 have residue field of size 4
    assert aut_count_eisenstein(lam) == aut_order(lam, 4)


def test_enumerate_examples():
    assert enumerate_types(2) == [P(), P(1), P(2), P(1, 1)]
    assert enumerate_types(3, rank=1) == [P(1), P(2), P(3)]
    assert enumerate_types(0) == [P()]


@pytest.mark.parametrize("n,count", [(0, 1), (1, 1), (5, 7), (10, 42), (20, 627)])
def test_partition_counts(n, count):
    parts = list(partitions_of(n))
    assert len(parts) == count == len(set(parts))


def test_conjugate_involution():
    for t in enumerate_types(12):
        assert conjugate(conjugate(t)) == t.parts
        assert sum(conjugate(t)) == t.size


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("u", [0, 1])
@pytest.mark.parametrize("r", [0, 1, 2, 3])
def test_rank_sum_invariant(q, u, r):
    # sum over rank-r types of 1/(q^{u|l|} Aut) tends to q^{-r(r+u)} (q)_u / ((q)_r (q)_{r+u})
    target = Fraction(1, q ** (r * (r + u))) * poch_finite(q, u) / (poch_finite(q, r) * poch_finite(q, r + u))
    n = 30
    partial = sum(Fraction(1, q ** (u * t.size) * aut_order(t, q)) for t in enumerate_types(n, rank=r))
    gap = target - partial
    # Aut >= q^{|l| + r^2 - r} (q)_inf^r and at most m^{r-1} rank-r types of size m
    x = Fraction(1, q ** (u + 1))
    low = 1 - Fraction(1, q) - Fraction(1, q * q)
    ratio = Fraction(n + 2, n + 1) ** max(r - 1, 0) * x
    bound = Fraction((n + 1) ** max(r - 1, 0)) * x ** (n + 1) / (1 - ratio) * Fraction(q ** (r - r * r)) / low**r
    assert 0 <= gap <= bound


@pytest.mark.parametrize(
    "text,lam,p",
    [("27x3", (3, 1), 3), ("[27,3]", (3, 1), 3), ("1", (), None), ("[]", (), None), ("4^2x2^2", (2, 2, 1, 1), 2)],
)
def test_parse_type(text, lam, p):
    assert parse_type(text) == (P(*lam), p)


def test_parse_type_module():
    assert parse_type("[4,4,2,2]", d=2) == (P(2, 1), 2)
    assert format_type(P(2, 1), 2, 2) == "4^2x2^2"
    assert format_divisors(P(2, 1), 2, 2) == "[4,4,2,2]"


@pytest.mark.parametrize(
    "text,err",
    [("12", NotPrimePowerError), ("[3,2]", MixedPrimesError), ("abc", MalformedLabelError), ("[4,2,2]", MalformedLabelError)],
)
def test_parse_errors(text, err):
    d = 2 if text == "[4,2,2]" else 1
    with pytest.raises(err):
        parse_type(text, d=d)


partitions = st.lists(st.integers(1, 5), max_size=5).map(lambda xs: PartitionType(tuple(sorted(xs, reverse=True))))


@settings(max_examples=200)
@given(partitions, st.sampled_from([2, 3, 5]), st.sampled_from([1, 2]))
def test_format_parse_roundtrip(lam, p, d):
    lam_p = p if lam.size else None
    assert parse_type(format_type(lam, p, d), d=d) == (lam, lam_p)
    assert parse_type(format_divisors(lam, p, d), d=d) == (lam, lam_p)
