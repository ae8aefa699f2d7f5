"""Predicted distributions of Sylow p-subgroups of relative class groups.

Two predictors are provided for every situation:

* the *modified* law for base fields containing the p-th roots of unity,
  ``c * d^r * prod_{i=u+1}^{r+u}(q^i - 1) / q^{r(u+1)} / (|H|^u |Aut H|)``;
* the classical Cohen-Lenstra-Martinet law ``(q)_inf/(q)_u / (|H|^u |Aut H|)``.

Here ``r`` is the O-rank of ``H``, ``q = |O/pO|`` and ``d = (O:Z)``.  The
product in the modified law runs from ``u + 1``: with a lower bound of 1 the
trivial group alone would receive mass above 1 for ``(p, u) = (3, 1)``, and
only the shifted bound reproduces the specialised formulas and the rank
distribution ``c d^r q^{-r(r+2u+1)/2} / (q)_r``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from .pgroups import PartitionType, aut_order, enumerate_types, format_type
from .qseries import ApproxReal, ToleranceError, poch_finite, poch_inf, rising_product
from .tables import DistributionTable, TableRow

__all__ = [
    "Situation",
    "REGISTRY",
    "ANOMALY_NOTE",
    "get_situation",
    "normalization_constant",
    "normalization_series",
    "modified_group_factor",
    "modified_group_prob",
    "cl_constant",
    "cl_group_prob",
    "rank_term",
    "rank_prob",
    "cl_rank_prob",
    "moment",
    "cl_moment",
    "closed_form_group_prob",
    "closed_form_rank_prob",
    "predicted_table",
    "top_types",
]

ANOMALY_NOTE = (
    "The base field contains the 4th roots of unity: observed 2-ranks follow the "
    "rank formula but individual Sylow 2-subgroups do not seem to follow the formulas."
)


@dataclass(frozen=True)
class Situation:
    id: int
    group_label: str
    base_field_label: str
    signature_label: str
    p: int
    u: int
    q: int
    d: int
    anomalous: bool = False

    def __post_init__(self):
        if self.q != self.p**self.d:
            raise ValueError(f"situation {self.id}: q={self.q} is not p^d = {self.p}^{self.d}")
        if self.u < 0 or self.d < 1:
            raise ValueError("need u >= 0 and d >= 1")

    @property
    def label(self) -> str:
        return f"{self.group_label}/{self.base_field_label}" + (
            f"-{self.signature_label}" if self.group_label in ("S3", "D5") else ""
        )

    def describe(self) -> str:
        return (
            f"({self.id}) {self.group_label} over {self.base_field_label}, {self.signature_label}: "
            f"p={self.p}, u={self.u}, q={self.q}, d={self.d}"
        )


REGISTRY: tuple[Situation, ...] = (
    Situation(1, "C2", "Q(sqrt-3)", "complex", p=3, u=1, q=3, d=1),
    Situation(2, "C2", "Q(mu5)", "complex", p=5, u=2, q=5, d=1),
    Situation(3, "S3", "Q", "real", p=2, u=2, q=2, d=1),
    Situation(4, "C3", "Q", "real", p=2, u=1, q=4, d=2),
    Situation(5, "C3", "Q(sqrt-3)", "complex", p=2, u=1, q=4, d=2),
    Situation(6, "C3", "Q(sqrt5)", "real", p=2, u=2, q=4, d=2),
    Situation(7, "C3", "Q(sqrt-1)", "complex", p=2, u=1, q=4, d=2, anomalous=True),
    Situation(8, "D5", "Q", "complex", p=2, u=1, q=4, d=2),
    Situation(9, "D5", "Q", "real", p=2, u=2, q=4, d=2),
)

_BY_LABEL = {s.label.lower(): s for s in REGISTRY}


def get_situation(key: Union[int, str, Situation]) -> Situation:
    """Look up by id (``4`` or ``"4"``) or label (``"C3/Q"``, ``"D5/Q-real"``)."""
    if isinstance(key, Situation):
        return key
    if isinstance(key, int) or (isinstance(key, str) and key.strip().isdigit()):
        i = int(key)
        if not 1 <= i <= len(REGISTRY):
            raise KeyError(f"no situation with id {i}")
        return REGISTRY[i - 1]
    s = _BY_LABEL.get(str(key).strip().lower())
    if s is None:
        known = ", ".join(x.label for x in REGISTRY)
        raise KeyError(f"unknown situation {key!r}; known labels: {known}")
    return s


# --- rank series and normalization -----------------------------------------


def rank_term(sit: Situation, r: int) -> Fraction:
    """Unnormalized rank weight ``d^r q^{-r(r+2u+1)/2} / (q)_r``."""
    q, u, d = sit.q, sit.u, sit.d
    return Fraction(d**r, q ** (r * (r + 1) // 2 + r * u)) / poch_finite(q, r)


def _rank_tail_ratio(sit: Situation, r: int) -> Fraction:
    # t_{j+1}/t_j = d q^{-(j+1+u)} / (1 - q^{-(j+1)}) <= d / (q^{r+1} - 1) for j >= r
    return Fraction(sit.d, sit.q ** (r + 1) - 1)


def normalization_series(sit: Situation, tol: float = 1e-12) -> ApproxReal:
    """``1 / sum_r rank_term(r)`` with a rigorous geometric tail bound."""
    tol = Fraction(tol)
    total = Fraction(0)
    r = 0
    while True:
        total += rank_term(sit, r)
        rho = _rank_tail_ratio(sit, r + 1)
        if rho < 1:
            tail = rank_term(sit, r + 1) / (1 - rho)
            if tail < tol / 4:
                break
        r += 1
        if r > 500:
            raise ToleranceError("rank series did not reach the requested tolerance")
    s = ApproxReal(total + tail / 2, tail / 2)
    return s.reciprocal()


@lru_cache(maxsize=None)
def _normalization_cached(sit: Situation, tol: float) -> ApproxReal:
    if sit.d == 1:
        q, u = sit.q, sit.u
        inner = Fraction(tol) / 64
        c = poch_finite(q * q, u) * poch_inf(q, float(inner)) / (poch_finite(q, u) * poch_inf(q * q, float(inner)))
    else:
        c = normalization_series(sit, tol)
    if c.err > tol:
        raise ToleranceError(f"normalization constant error {float(c.err)} exceeds {tol}")
    return c


def normalization_constant(sit, tol: float = 1e-12) -> ApproxReal:
    """The constant ``c`` making the modified law a probability distribution.

    For ``d = 1`` this is ``(q^2)_u (q)_inf / ((q)_u (q^2)_inf)``; for ``d > 1``
    it is obtained by summing the rank series.
    """
    return _normalization_cached(get_situation(sit), float(tol))


def rank_prob(sit, r: int, tol: float = 1e-12) -> ApproxReal:
    """Probability that the O-rank (p-rank / d) equals ``r``."""
    sit = get_situation(sit)
    if r < 0:
        raise ValueError("rank must be >= 0")
    return normalization_constant(sit, tol) * rank_term(sit, r)


def modified_group_factor(sit, lam) -> Fraction:
    """Everything in the modified law except the constant ``c``, exactly."""
    sit = get_situation(sit)
    lam = lam if isinstance(lam, PartitionType) else PartitionType(tuple(lam))
    q, u, d, r = sit.q, sit.u, sit.d, lam.length
    weight = Fraction(d**r * rising_product(q, u + 1, r + u), q ** (r * (u + 1)))
    return weight / (q ** (u * lam.size) * aut_order(lam, q))


def modified_group_prob(sit, lam, tol: float = 1e-12) -> ApproxReal:
    sit = get_situation(sit)
    return normalization_constant(sit, tol) * modified_group_factor(sit, lam)


@lru_cache(maxsize=None)
def _cl_constant_cached(sit: Situation, tol: float) -> ApproxReal:
    return poch_inf(sit.q, tol / 4) / poch_finite(sit.q, sit.u)


def cl_constant(sit, tol: float = 1e-12) -> ApproxReal:
    """``(q)_inf / (q)_u``."""
    return _cl_constant_cached(get_situation(sit), float(tol))


def cl_group_prob(sit, lam, tol: float = 1e-12) -> ApproxReal:
    sit = get_situation(sit)
    lam = lam if isinstance(lam, PartitionType) else PartitionType(tuple(lam))
    return cl_constant(sit, tol) * Fraction(1, sit.q ** (sit.u * lam.size) * aut_order(lam, sit.q))


def _cl_rank_term(sit: Situation, r: int) -> Fraction:
    q, u = sit.q, sit.u
    return Fraction(1, q ** (r * (r + u))) / (poch_finite(q, r) * poch_finite(q, r + u))


def cl_rank_prob(sit, r: int, tol: float = 1e-12) -> ApproxReal:
    """``(q)_inf q^{-r(r+u)} / ((q)_r (q)_{r+u})``."""
    sit = get_situation(sit)
    return poch_inf(sit.q, tol / 2) * _cl_rank_term(sit, r)


def moment(sit, n: int) -> Fraction:
    """Exact ``E[q^{n r}] = E[p^{n * p-rank}] = prod_{k=1}^n (1 + d q^{k-u-1})``."""
    sit = get_situation(sit)
    if n < 1:
        raise ValueError("moment index must be >= 1")
    out = Fraction(1)
    for k in range(1, n + 1):
        out *= 1 + sit.d * Fraction(sit.q) ** (k - sit.u - 1)
    return out


def cl_moment(sit, n: int, tol: float = 1e-10) -> ApproxReal:
    """``E[q^{n r}]`` under the classical law, summed with a tail bound."""
    sit = get_situation(sit)
    q, u = sit.q, sit.u
    total = Fraction(0)
    r = 0
    while True:
        total += _cl_rank_term(sit, r) * q ** (n * r)
        # ratio of consecutive terms for j >= r+1 is at most this
        j = r + 1
        rho = Fraction(q**n, q ** (2 * j + 1 + u)) / (
            (1 - Fraction(1, q ** (j + 1))) * (1 - Fraction(1, q ** (j + 1 + u)))
        )
        if rho < Fraction(1, 2):
            tail = _cl_rank_term(sit, j) * q ** (n * j) / (1 - rho)
            if tail < Fraction(tol) / 4:
                break
        r += 1
    s = ApproxReal(total + tail / 2, tail / 2)
    return poch_inf(q, tol / 8) * s


# --- specialised closed forms ------------------------------------------------


def _closed_form_constants(sit: Situation):
    """(rank prefactor, group prefactor, base product) for the cases with a known closed form."""
    q2 = lambda k: poch_inf(k, 1e-16)  # noqa: E731
    key = (sit.p, sit.u, sit.d)
    if key == (3, 1, 1):
        base = q2(3) / q2(9)
        return Fraction(4, 3), Fraction(2), base
    if key == (5, 2, 1):
        base = q2(5) / q2(25)
        return Fraction(156, 125), Fraction(13, 8), base
    if key == (2, 2, 1):
        base = q2(2) / q2(4)
        return Fraction(15, 8), Fraction(5), base
    if key in ((2, 1, 2), (2, 2, 2)):
        base = q2(2) * q2(16) / (q2(4) * q2(4))
        return (Fraction(3, 2), Fraction(2), base) if sit.u == 1 else (Fraction(27, 16), Fraction(12, 5), base)
    raise KeyError(f"no closed-form specialisation for {sit.describe()}")


def closed_form_rank_prob(sit, r: int) -> ApproxReal:
    """Rank law as written out case by case for the nine situations."""
    sit = get_situation(sit)
    pre, _, base = _closed_form_constants(sit)
    p, u = sit.p, sit.u
    if sit.d == 1:
        tail = Fraction(1, p ** (r * (r + 2 * u + 1) // 2)) / poch_finite(p, r)
    else:
        tail = Fraction(1, 2 ** (r * (r + 2 * u))) / poch_finite(4, r)
    return base * pre * tail


def closed_form_group_prob(sit, lam) -> ApproxReal:
    """Sylow law as written out case by case, with ``|H| = q^{|lambda|}``."""
    sit = get_situation(sit)
    lam = lam if isinstance(lam, PartitionType) else PartitionType(tuple(lam))
    _, pre, base = _closed_form_constants(sit)
    p, u, q, r = sit.p, sit.u, sit.q, lam.length
    order = q**lam.size
    denom = order**u * aut_order(lam, q)
    if sit.d == 1:
        num = Fraction(p ** ((r * r - r) // 2)) * poch_finite(p, r + u)
    else:
        num = Fraction(2 ** (r * r)) * poch_finite(4, r + u)
    return base * pre * (num / denom)


# --- prediction tables ------------------------------------------------------


def top_types(sit, count: int, predictor: str = "modified", max_size: int = 12) -> list[PartitionType]:
    """The ``count`` most likely types, by probability then canonical order."""
    sit = get_situation(sit)
    factor = modified_group_factor if predictor == "modified" else _cl_factor
    types = enumerate_types(max_size)
    index = {t: i for i, t in enumerate(types)}
    ranked = sorted(types, key=lambda t: (-factor(sit, t), index[t]))
    return ranked[:count]


def _cl_factor(sit: Situation, lam) -> Fraction:
    lam = lam if isinstance(lam, PartitionType) else PartitionType(tuple(lam))
    return Fraction(1, sit.q ** (sit.u * lam.size) * aut_order(lam, sit.q))


_PREDICTOR_LABELS = {"modified": "modified law", "cl": "Cohen-Lenstra-Martinet"}


def predicted_table(sit, kind: str = "rank", bound: int = 3, predictor: str = "modified", tol: float = 1e-12) -> DistributionTable:
    """Prediction row(s) one column per rank, type or moment.

    ``kind="rank"``: columns ``r=0 .. r=d*bound`` (p-ranks);
    ``kind="sylow"``: the ``bound`` most likely types, labelled by their
    underlying abelian groups; ``kind="moments"``: ``n=1 .. n=bound``.
    ``predictor`` may be ``"modified"``, ``"cl"`` or ``"both"``.
    """
    sit = get_situation(sit)
    predictors = ["modified", "cl"] if predictor == "both" else [predictor]
    for pr in predictors:
        if pr not in _PREDICTOR_LABELS:
            raise ValueError(f"unknown predictor {pr!r}")
    title = f"Situation {sit.describe()}: predicted {kind}"
    if kind == "rank":
        columns = [f"r={sit.d * r}" for r in range(bound + 1)]
        table = DistributionTable(title, columns)
        for pr in predictors:
            fn = rank_prob if pr == "modified" else cl_rank_prob
            table.add_row(TableRow(_PREDICTOR_LABELS[pr], [float(fn(sit, r, tol)) for r in range(bound + 1)]))
    elif kind == "sylow":
        types = top_types(sit, bound, predictors[0])
        columns = [format_type(t, sit.p, sit.d) for t in types]
        table = DistributionTable(title, columns)
        for pr in predictors:
            fn = modified_group_prob if pr == "modified" else cl_group_prob
            table.add_row(TableRow(_PREDICTOR_LABELS[pr], [float(fn(sit, t, tol)) for t in types]))
    elif kind == "moments":
        columns = [f"n={n}" for n in range(1, bound + 1)]
        table = DistributionTable(title, columns)
        for pr in predictors:
            if pr == "modified":
                vals = [float(moment(sit, n)) for n in range(1, bound + 1)]
            else:
                vals = [float(cl_moment(sit, n)) for n in range(1, bound + 1)]
            table.add_row(TableRow(_PREDICTOR_LABELS[pr], vals))
    else:
        raise ValueError(f"unknown table kind {kind!r}")
    if sit.anomalous:
        table.notes.append(ANOMALY_NOTE)
    return table
