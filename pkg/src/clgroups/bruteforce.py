"""Exhaustive automorphism counts, used to check the closed formula.

An endomorphism of ``M = sum_i R/p^{l_i}`` is fixed by the images of the
generators, and the image of generator ``i`` may be any element killed by
``p^{l_i}``.  We enumerate all such choices and keep the injective ones.
"""

from __future__ import annotations

import itertools

import numpy as np

__all__ = ["aut_count", "aut_count_eisenstein"]

CANDIDATE_LIMIT = 1 << 22


def _torsion_elements(moduli: list[int], k: int) -> np.ndarray:
    """Elements of ``sum Z/m_j`` killed by ``k``."""
    axes = [range(0, m, m // np.gcd(m, k)) for m in moduli]
    return np.array(list(itertools.product(*axes)), dtype=np.int64).reshape(-1, len(moduli))


def aut_count(parts, p: int) -> int:
    """``|Aut(sum Z/p^{l_i})|`` by brute force over all endomorphisms."""
    parts = list(parts)
    n = len(parts)
    if n == 0:
        return 1
    moduli = [p**l for l in parts]
    order = int(np.prod(moduli))
    choices = [_torsion_elements(moduli, m) for m in moduli]
    total = int(np.prod([len(c) for c in choices]))
    if total * order > CANDIDATE_LIMIT * 16:
        raise ValueError(f"{total} candidate endomorphisms is too many")
    elements = np.array(list(itertools.product(*[range(m) for m in moduli])), dtype=np.int64)
    mod = np.array(moduli, dtype=np.int64)
    count = 0
    # images[k, i, :] is the image of generator i under candidate k
    grids = np.meshgrid(*[np.arange(len(c)) for c in choices], indexing="ij")
    picks = [g.reshape(-1) for g in grids]
    step = max(1, CANDIDATE_LIMIT // order)
    for lo in range(0, total, step):
        sl = slice(lo, lo + step)
        images = np.stack([choices[i][picks[i][sl]] for i in range(n)], axis=1)
        mapped = np.einsum("ei,kij->kej", elements, images) % mod
        zero = np.all(mapped == 0, axis=2).sum(axis=1)
        count += int(np.count_nonzero(zero == 1))
    return count


# --- modules over Z[w], w^2 + w + 1 = 0, localised at 2 (residue field F_4) ---


def _mul(c, x, m):
    s, t = c
    a, b = x
    return ((s * a - t * b) % m, (s * b + t * a - t * b) % m)


def aut_count_eisenstein(parts) -> int:
    """``|Aut_O(sum O/2^{l_i})|`` for ``O = Z[w]``; small types only."""
    parts = list(parts)
    n = len(parts)
    if n == 0:
        return 1
    mods = [2**l for l in parts]
    ring = [list(itertools.product(range(m), repeat=2)) for m in mods]
    module = list(itertools.product(*ring))

    def killed_by(x, k):
        return all((k * a) % m == 0 and (k * b) % m == 0 for (a, b), m in zip(x, mods))

    choices = [[x for x in module if killed_by(x, m)] for m in mods]
    if np.prod([len(c) for c in choices]) * len(module) > CANDIDATE_LIMIT:
        raise ValueError("type too large for exhaustive search")
    count = 0
    zero = tuple((0, 0) for _ in mods)
    for imgs in itertools.product(*choices):
        injective = True
        for coeffs in itertools.product(*ring):
            if all(c == (0, 0) for c in coeffs):
                continue
            acc = [(0, 0)] * n
            for c, img in zip(coeffs, imgs):
                for j in range(n):
                    da, db = _mul(c, img[j], mods[j])
                    acc[j] = ((acc[j][0] + da) % mods[j], (acc[j][1] + db) % mods[j])
            if tuple(acc) == zero:
                injective = False
                break
        if injective:
            count += 1
    return count
