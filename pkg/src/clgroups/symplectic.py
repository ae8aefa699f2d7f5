"""Fixed-space statistics of finite symplectic groups.

``alpha(g, r, q)`` is the proportion of ``x`` in ``Sp_{2g}(F_q)`` with
``dim ker(x - 1) = r``.  The closed formula is checked here against an
exhaustive census of the group, obtained either by filtering all
``2g x 2g`` matrices on the form-preservation predicate or by a
breadth-first closure under symplectic transvections.
"""

from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

import numpy as np

from .qseries import ApproxReal, poch_finite, poch_inf

__all__ = [
    "SizeGuardError",
    "sp_order",
    "alpha",
    "alpha_uncorrected",
    "alpha_limit",
    "standard_form",
    "is_symplectic",
    "fixed_space_dim",
    "census_filter",
    "census_closure",
    "eigenspace_census",
]

# Largest number of candidate matrices the filter strategy will scan.
FILTER_LIMIT = 1 << 20


class SizeGuardError(ValueError):
    pass


def sp_order(g: int, q: int) -> int:
    """``|Sp_{2g}(q)| = q^{g^2} prod_{i=1}^g (q^{2i} - 1)``."""
    if g < 0:
        raise ValueError("g must be >= 0")
    out = q ** (g * g)
    for i in range(1, g + 1):
        out *= q ** (2 * i) - 1
    return out


def _alpha(g: int, r: int, q: int, corrected: bool) -> Fraction:
    if not 0 <= r <= 2 * g:
        raise ValueError(f"r must lie in 0..{2 * g}, got {r}")
    k, odd = divmod(r, 2)

    def num(i):
        return q ** (i * (i + 1)) if corrected else q ** (i * (i - 1))

    if not odd:
        s = sum(Fraction((-1) ** i * num(i), sp_order(i, q) * q ** (2 * i * k)) for i in range(g - k + 1))
        return s / sp_order(k, q)
    s = sum(Fraction((-1) ** i * num(i), sp_order(i, q) * q ** (2 * i * (k + 1))) for i in range(g - k))
    return s / (q ** (2 * k + 1) * sp_order(k, q))


def alpha(g: int, r: int, q: int) -> Fraction:
    """Exact proportion of elements of ``Sp_{2g}(q)`` with ``r``-dimensional fixed space.

    Uses the numerator ``q^{i(i+1)}`` (that is ``(q^2)^{binom(i+1, 2)}``).
    """
    return _alpha(g, r, q, corrected=True)


def alpha_uncorrected(g: int, r: int, q: int) -> Fraction:
    """The same sum with the numerator ``q^{i(i-1)}``; does not match the census."""
    return _alpha(g, r, q, corrected=False)


def alpha_limit(r: int, q: int, tol: float = 1e-12) -> ApproxReal:
    """``lim_g alpha(g, r, q) = (q)_inf / (q^2)_inf * q^{-r(r+1)/2} / (q)_r``."""
    if r < 0:
        raise ValueError("r must be >= 0")
    inner = tol / 16
    ratio = poch_inf(q, inner) / poch_inf(q * q, inner)
    return ratio * (Fraction(1, q ** (r * (r + 1) // 2)) / poch_finite(q, r))


# --- matrices over F_p --------------------------------------------------------


def standard_form(g: int) -> np.ndarray:
    j = np.zeros((2 * g, 2 * g), dtype=np.int64)
    j[:g, g:] = np.eye(g, dtype=np.int64)
    j[g:, :g] = -np.eye(g, dtype=np.int64)
    return j


def is_symplectic(m: np.ndarray, q: int) -> bool:
    g = m.shape[0] // 2
    j = standard_form(g)
    return bool(np.all((m.T @ j @ m - j) % q == 0))


def _rank_mod_p(rows: list[list[int]], p: int) -> int:
    rows = [r[:] for r in rows]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(rows)) if rows[i][col] % p), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [(x * inv) % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col] % p:
                f = rows[i][col]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def fixed_space_dim(m: np.ndarray, p: int) -> int:
    """``dim ker(m - 1)`` over ``F_p``."""
    n = m.shape[0]
    a = ((m - np.eye(n, dtype=np.int64)) % p).tolist()
    return n - _rank_mod_p(a, p)


def _check_prime(q: int) -> None:
    if q < 2 or any(q % f == 0 for f in range(2, int(q**0.5) + 1)):
        raise ValueError(f"census needs a prime field size, got {q}")


def _decode(indices: np.ndarray, n: int, q: int) -> np.ndarray:
    digits = np.empty((indices.size, n * n), dtype=np.int64)
    rest = indices.copy()
    for k in range(n * n):
        digits[:, k] = rest % q
        rest //= q
    return digits.reshape(-1, n, n)


def _filter_chunk(args) -> dict[int, int]:
    g, q, start, stop = args
    n = 2 * g
    j = standard_form(g)
    counts: Counter = Counter()
    step = 1 << 16
    for lo in range(start, stop, step):
        mats = _decode(np.arange(lo, min(stop, lo + step), dtype=np.int64), n, q)
        prod = np.einsum("kji,jl,klm->kim", mats, j, mats)
        keep = np.all(((prod - j) % q) == 0, axis=(1, 2))
        for m in mats[keep]:
            counts[fixed_space_dim(m, q)] += 1
    return dict(counts)


def census_filter(g: int, q: int, shards: int = 1, workers: int = 1) -> dict[int, int]:
    """Count by fixed-space dimension, scanning every candidate matrix.

    The candidate range may be split into ``shards``, optionally evaluated by
    ``workers`` processes; merged counts do not depend on the split.
    """
    _check_prime(q)
    n = 2 * g
    total = q ** (n * n)
    if total > FILTER_LIMIT:
        raise SizeGuardError(f"{total} candidate matrices exceed the filter limit {FILTER_LIMIT}")
    bounds = np.linspace(0, total, shards + 1).astype(np.int64)
    jobs = [(g, q, int(a), int(b)) for a, b in zip(bounds, bounds[1:])]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_filter_chunk, jobs))
    else:
        parts = [_filter_chunk(job) for job in jobs]
    merged: Counter = Counter()
    for part in parts:
        merged.update(part)
    return {r: merged.get(r, 0) for r in range(n + 1)}


def _transvections(g: int, q: int) -> list[np.ndarray]:
    """``x -> x + <x, v> v`` for every nonzero 0/1 vector ``v``."""
    n = 2 * g
    j = standard_form(g)
    gens = []
    for bits in itertools.product((0, 1), repeat=n):
        if not any(bits):
            continue
        v = np.array(bits, dtype=np.int64).reshape(n, 1)
        # <x, v> = x^T J v, so the matrix is I + v (J v)^T ... acting on columns x
        t = (np.eye(n, dtype=np.int64) + v @ (j @ v).T) % q
        gens.append(t)
    return gens


def _encode(mats: np.ndarray, q: int) -> np.ndarray:
    flat = mats.reshape(mats.shape[0], -1)
    weights = q ** np.arange(flat.shape[1], dtype=np.int64)
    return flat @ weights


def census_closure(g: int, q: int) -> dict[int, int]:
    """Count by fixed-space dimension over the group generated by transvections."""
    _check_prime(q)
    n = 2 * g
    gens = np.stack(_transvections(g, q))
    identity = np.eye(n, dtype=np.int64)[None]
    seen = set(_encode(identity, q).tolist())
    frontier = identity
    elements = [identity]
    while frontier.shape[0]:
        images = np.einsum("kij,gjl->kgil", frontier, gens).reshape(-1, n, n) % q
        codes = _encode(images, q)
        codes, first = np.unique(codes, return_index=True)
        fresh = np.array([c not in seen for c in codes.tolist()], dtype=bool)
        seen.update(codes[fresh].tolist())
        frontier = images[first[fresh]]
        elements.append(frontier)
    group = np.concatenate(elements)
    counts: Counter = Counter(fixed_space_dim(m, q) for m in group)
    return {r: counts.get(r, 0) for r in range(n + 1)}


def eigenspace_census(g: int, q: int, method: str = "auto") -> dict[int, int]:
    """Exact counts ``r -> #{x : dim ker(x - 1) = r}`` in ``Sp_{2g}(q)``.

    ``method="auto"`` scans all matrices when that is cheap (q = 2 or g = 1)
    and otherwise uses the transvection closure.
    """
    if not 1 <= g <= 2:
        raise SizeGuardError("census is limited to g in {1, 2}")
    if method == "auto":
        method = "filter" if q ** (4 * g * g) <= FILTER_LIMIT else "closure"
    if method == "filter":
        return census_filter(g, q)
    if method == "closure":
        return census_closure(g, q)
    raise ValueError(f"unknown census method {method!r}")
