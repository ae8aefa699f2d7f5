"""Finite abelian p-groups and finite p-torsion O-modules as partitions.

A module ``O/p^l1 + ... + O/p^ln`` over a complete DVR with residue field of
size ``q`` is encoded by the partition ``(l1 >= ... >= ln)``.  For plain
p-groups ``q = p``; for modules over ``O = Z[mu_3]`` at ``p = 2`` we have
``q = 4`` and each part contributes ``d = 2`` copies to the underlying group.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .qseries import poch_finite

__all__ = [
    "PartitionType",
    "TypeParseError",
    "NotPrimePowerError",
    "MixedPrimesError",
    "MalformedLabelError",
    "group_order_exponent",
    "module_rank",
    "underlying_abelian",
    "module_type_from_abelian",
    "conjugate",
    "aut_order",
    "enumerate_types",
    "partitions_of",
    "parse_type",
    "format_type",
    "format_divisors",
    "p_valuation",
    "prime_power",
]


@dataclass(frozen=True, order=True)
class PartitionType:
    """Weakly decreasing tuple of positive parts; ``()`` is the trivial group."""

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        parts = tuple(int(x) for x in self.parts)
        if any(x < 1 for x in parts):
            raise ValueError(f"parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"parts must be weakly decreasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: int) -> PartitionType:
        return cls(tuple(sorted(parts, reverse=True)))

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self):
        return len(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


def _pt(lam) -> PartitionType:
    return lam if isinstance(lam, PartitionType) else PartitionType(tuple(lam))


def group_order_exponent(lam) -> int:
    """``|lambda|``, so that ``|H| = q^|lambda|``."""
    return _pt(lam).size


def module_rank(lam) -> int:
    """Number of parts: the p-rank for ``d = 1``, the O-rank otherwise."""
    return _pt(lam).length


def underlying_abelian(lam, d: int, p: int) -> list[int]:
    """Elementary divisors of the underlying abelian group, descending."""
    if d < 1:
        raise ValueError("d must be >= 1")
    return [p**part for part in _pt(lam).parts for _ in range(d)]


def module_type_from_abelian(lam, d: int) -> Optional[PartitionType]:
    """Inverse of repeating every part ``d`` times; ``None`` if impossible."""
    counts = Counter(_pt(lam).parts)
    if any(m % d for m in counts.values()):
        return None
    parts = [part for part, m in counts.items() for _ in range(m // d)]
    return PartitionType(tuple(sorted(parts, reverse=True)))


def conjugate(lam) -> tuple[int, ...]:
    parts = _pt(lam).parts
    if not parts:
        return ()
    return tuple(sum(1 for x in parts if x >= i) for i in range(1, parts[0] + 1))


def aut_order(lam, q: int) -> int:
    """Order of the automorphism group of the module of type ``lam``.

    ``q^{sum lam'_i^2} * prod_i (q)_{m_i}`` with ``lam'`` the conjugate
    partition and ``m_i`` the multiplicity of the part ``i``.
    """
    if q < 2:
        raise ValueError("need q >= 2")
    lam = _pt(lam)
    value = Fraction(q ** sum(c * c for c in conjugate(lam)))
    for m in Counter(lam.parts).values():
        value *= poch_finite(q, m)
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral automorphism count for {lam}")
    return value.numerator


def partitions_of(n: int, max_part: Optional[int] = None) -> Iterator[tuple[int, ...]]:
    """Partitions of ``n`` in lexicographically descending order."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions_of(n - first, first):
            yield (first,) + rest


def enumerate_types(max_size: int, rank: Optional[int] = None) -> list[PartitionType]:
    """All types with ``|lambda| <= max_size``, by size then lex-descending."""
    if max_size < 0:
        raise ValueError("max_size must be >= 0")
    out = []
    for n in range(max_size + 1):
        for parts in partitions_of(n):
            if rank is None or len(parts) == rank:
                out.append(PartitionType(parts))
    return out


# --- textual labels ---------------------------------------------------------


class TypeParseError(ValueError):
    """Base class for label parsing failures."""


class MalformedLabelError(TypeParseError):
    pass


class NotPrimePowerError(TypeParseError):
    pass


class MixedPrimesError(TypeParseError):
    pass


def _smallest_prime_factor(n: int) -> int:
    if n % 2 == 0:
        return 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return f
        f += 2
    return n


def prime_power(n: int) -> tuple[int, int]:
    """Return ``(p, e)`` with ``n = p^e``, ``e >= 1``, or raise."""
    if n < 2:
        raise NotPrimePowerError(f"{n} is not a prime power")
    p = _smallest_prime_factor(n)
    e, m = 0, n
    while m % p == 0:
        m //= p
        e += 1
    if m != 1:
        raise NotPrimePowerError(f"{n} is not a prime power")
    return p, e


def p_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


_LIST_RE = re.compile(r"^\[\s*(\d+(\s*,\s*\d+)*)?\s*\]$")
_FACTOR_RE = re.compile(r"^(\d+)(?:\^(\d+))?$")


def _divisors_from_text(text: str) -> list[int]:
    text = text.strip()
    if not text:
        raise MalformedLabelError("empty label")
    if text.startswith("["):
        if not _LIST_RE.match(text):
            raise MalformedLabelError(f"malformed divisor list: {text!r}")
        inner = text[1:-1].strip()
        return [int(x) for x in inner.split(",")] if inner else []
    if text == "1":
        return []
    divisors = []
    for factor in re.split(r"\s*[x×]\s*", text):
        m = _FACTOR_RE.match(factor)
        if not m:
            raise MalformedLabelError(f"malformed factor {factor!r} in {text!r}")
        base, rep = int(m.group(1)), int(m.group(2) or 1)
        if rep < 1:
            raise MalformedLabelError(f"zero repetition in {text!r}")
        divisors.extend([base] * rep)
    return divisors


def parse_type(text: str, d: int = 1) -> tuple[PartitionType, Optional[int]]:
    """Parse ``"[27,3]"``, ``"27x3"``, ``"4^2x2^2"`` or ``"1"``.

    Returns the type and the prime (``None`` for the trivial group, which is
    valid for every prime).  With ``d > 1`` the divisors are read as an
    underlying abelian group and collapsed to the O-module type.
    """
    divisors = _divisors_from_text(text)
    prime = None
    parts = []
    for n in divisors:
        p, e = prime_power(n)
        if prime is None:
            prime = p
        elif p != prime:
            raise MixedPrimesError(f"divisors of {text!r} involve primes {prime} and {p}")
        parts.append(e)
    lam = PartitionType(tuple(sorted(parts, reverse=True)))
    if d > 1:
        mod = module_type_from_abelian(lam, d)
        if mod is None:
            raise MalformedLabelError(f"{text!r} is not the underlying group of a rank-{d} module type")
        lam = mod
    return lam, prime


def format_type(lam, p: int, d: int = 1) -> str:
    """Compact label of the underlying group, e.g. ``4^2x2^2``."""
    divisors = underlying_abelian(lam, d, p)
    if not divisors:
        return "1"
    chunks = []
    for n, m in sorted(Counter(divisors).items(), reverse=True):
        chunks.append(f"{n}^{m}" if m > 1 else str(n))
    return "x".join(chunks)


def format_divisors(lam, p: int, d: int = 1) -> str:
    """Canonical list form, e.g. ``[4,4,2,2]``."""
    return "[" + ",".join(map(str, underlying_abelian(lam, d, p))) + "]"
