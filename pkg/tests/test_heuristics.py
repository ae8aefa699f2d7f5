from fractions import Fraction

import pytest

from clgroups import heuristics as H
from clgroups.pgroups import PartitionType, enumerate_types
from clgroups.qseries import poch_finite, poch_inf

P = PartitionType.of
ALL = [s.id for s in H.REGISTRY]


def close(value, expected, tol):
    return abs(float(value) - expected) <= tol


def test_registry_contents():
    expected = {
        1: (3, 1, 3, 1), 2: (5, 2, 5, 1), 3: (2, 2, 2, 1), 4: (2, 1, 4, 2), 5: (2, 1, 4, 2),
        6: (2, 2, 4, 2), 7: (2, 1, 4, 2), 8: (2, 1, 4, 2), 9: (2, 2, 4, 2),
    }
    got = {s.id: (s.p, s.u, s.q, s.d) for s in H.REGISTRY}
    assert got == expected
    assert [s.id for s in H.REGISTRY if s.anomalous] == [7]


def test_get_situation_forms():
    s = H.get_situation(4)
    assert H.get_situation("4") is s
    assert H.get_situation(s.label) is s
    assert H.get_situation(s.label.upper()) is s
    with pytest.raises(KeyError):
        H.get_situation(42)
    with pytest.raises(KeyError):
        H.get_situation("C7/Q")


def test_situation_validation():
    with pytest.raises(ValueError):
        H.Situation(0, "x", "y", "-", p=2, u=0, q=5, d=1)


@pytest.mark.parametrize("sit,r,expected,tol", [(1, 0, 0.8520, 5e-5), (3, 0, 0.786, 5e-4), (4, 0, 0.8530, 5e-5)])
def test_rank_prob_examples(sit, r, expected, tol):
    assert close(H.rank_prob(sit, r), expected, tol)


@pytest.mark.parametrize(
    "sit,lam,expected,tol",
    [
        (1, (), 0.852, 5e-4), (1, (1,), 0.126, 5e-4), (1, (2,), 0.014, 5e-4), (1, (1, 1), 0.0051, 5e-5),
        (4, (), 0.853, 5e-4), (4, (1,), 0.133, 5e-4), (4, (2,), 0.0083, 5e-5), (4, (1, 1), 0.0044, 5e-5),
        (3, (), 0.786, 5e-4),
    ],
)
def test_group_prob_examples(sit, lam, expected, tol):
    assert close(H.modified_group_prob(sit, P(*lam)), expected, tol)


@pytest.mark.parametrize(
    "sit,lam,expected,tol",
    [(4, (), 0.918, 5e-4), (4, (2,), 0.0048, 5e-5), (1, (), 0.840, 5e-4), (1, (1,), 0.140, 5e-4), (1, (2,), 0.0156, 5e-5)],
)
def test_cl_group_prob_examples(sit, lam, expected, tol):
    assert close(H.cl_group_prob(sit, P(*lam)), expected, tol)


@pytest.mark.parametrize("sit", ALL)
def test_cl_trivial_ratio(sit):
    s = H.get_situation(sit)
    base = poch_inf(s.q, 1e-15) / poch_finite(s.q, s.u)
    assert abs(float(H.cl_group_prob(s, P()) / base) - 1) < 1e-12


@pytest.mark.parametrize(
    "sit,row", [(1, [0.8402, 0.158, 0.0023]), (6, [0.9793, 0.0207]), (3, [0.770])]
)
def test_cl_rank_examples(sit, row):
    for r, v in enumerate(row):
        digits = len(str(v).split(".")[1])
        assert close(H.cl_rank_prob(sit, r), v, 0.5 * 10**-digits)


def test_moment_examples():
    assert [H.moment(1, n) for n in (1, 2, 3)] == [Fraction(4, 3), Fraction(8, 3), Fraction(32, 3)]
    assert [H.moment(3, n) for n in range(1, 5)] == [Fraction(5, 4), Fraction(15, 8), Fraction(15, 4), Fraction(45, 4)]
    assert [H.moment(4, n) for n in range(1, 5)] == [Fraction(3, 2), Fraction(9, 2), Fraction(81, 2), Fraction(2673, 2)]


@pytest.mark.parametrize("sit", ALL)
def test_rank_normalization(sit):
    total = sum(H.rank_prob(sit, r) for r in range(30))
    assert abs(float(total) - 1) < 1e-9


@pytest.mark.parametrize("sit", ALL)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_moment_identity(sit, n):
    s = H.get_situation(sit)
    acc = sum(H.rank_prob(s, r) * s.q ** (n * r) for r in range(40))
    assert abs(float(acc) - float(H.moment(s, n))) < 1e-8


@pytest.mark.parametrize("sit", ALL)
def test_normalization_d1_closed_form(sit):
    s = H.get_situation(sit)
    series = H.normalization_series(s, 1e-14)
    c = H.normalization_constant(s)
    assert abs(float(series) - float(c)) < 1e-12


@pytest.mark.parametrize("sit", [1, 2, 3, 4, 5, 6, 7])
def test_closed_form_specialisations(sit):
    for r in range(4):
        assert abs(float(H.closed_form_rank_prob(sit, r)) - float(H.rank_prob(sit, r))) < 1e-9
    for lam in enumerate_types(5):
        assert abs(float(H.closed_form_group_prob(sit, lam)) - float(H.modified_group_prob(sit, lam))) < 1e-9


def test_closed_forms_only_for_known_cases():
    with pytest.raises(KeyError):
        H.closed_form_rank_prob(H.Situation(0, "x", "y", "-", p=7, u=1, q=7, d=1), 0)


def test_d2_constants_match_closed_multiples():
    k = poch_inf(2, 1e-15) * poch_inf(16, 1e-15) / (poch_inf(4, 1e-15) * poch_inf(4, 1e-15))
    assert abs(float(H.normalization_constant(4)) - 1.5 * float(k)) < 1e-12
    assert abs(float(H.normalization_constant(6)) - 27 / 16 * float(k)) < 1e-12


def test_product_bound_starts_above_u():
    # the trivial class group must have probability below 1
    for s in H.REGISTRY:
        assert 0 < float(H.modified_group_prob(s, P())) < 1


@pytest.mark.parametrize("sit", [1, 3, 4, 6])
@pytest.mark.parametrize("r", [0, 1, 2, 3])
def test_group_sums_to_rank(sit, r):
    s = H.get_situation(sit)
    partial = sum(H.modified_group_factor(s, t) for t in enumerate_types(24, rank=r))
    gap = H.rank_term(s, r) - partial
    assert 0 <= gap < Fraction(1, 10**9)


@pytest.mark.parametrize("sit", [1, 4])
@pytest.mark.parametrize("r", [0, 1, 2])
def test_cl_group_sums_to_rank(sit, r):
    partial = sum(float(H.cl_group_prob(sit, t)) for t in enumerate_types(24, rank=r))
    assert abs(partial - float(H.cl_rank_prob(sit, r))) < 1e-9


def test_cl_moments():
    # weighted rank sums against the series
    acc = sum(float(H.cl_rank_prob(1, r)) * 3**r for r in range(20))
    assert abs(acc - float(H.cl_moment(1, 1))) < 1e-9
    s = H.get_situation(6)
    acc = sum(float(H.cl_rank_prob(s, r)) * s.q**r for r in range(20))
    assert abs(acc - float(H.cl_moment(s, 1))) < 1e-9


def test_top_types_ordered():
    tops = H.top_types(1, 9)
    probs = [float(H.modified_group_prob(1, t)) for t in tops]
    assert probs == sorted(probs, reverse=True)
    assert tops[:4] == [P(), P(1), P(2), P(1, 1)]


def test_predicted_table_shapes():
    t = H.predicted_table(1, "sylow", 9)
    assert t.columns[:3] == ["1", "3", "9"]
    assert len(t.rows) == 1 and t.rows[0].role == "predicted"
    t = H.predicted_table(6, "rank", 2, "both")
    assert t.columns == ["r=0", "r=2", "r=4"] and len(t.rows) == 2
    t = H.predicted_table(4, "moments", 4)
    assert [round(v, 6) for v in t.rows[0].values] == [float(H.moment(4, n)) for n in range(1, 5)]
    with pytest.raises(ValueError):
        H.predicted_table(1, "bogus")


def test_anomalous_note_in_table():
    t = H.predicted_table(7, "sylow", 5)
    assert any("roots of unity" in n for n in t.notes)
