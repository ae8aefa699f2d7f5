"""Synthetic class-group data drawn from the modified law.

Types are listed by descending probability (ties in canonical order) until
the listed mass reaches ``1 - tail_mass``; draws use inverse-CDF lookup on
uniforms from numpy's PCG64 generator seeded with ``seed``.  A uniform that
lands beyond the listed mass is assigned to the overflow type, which is the
last (least likely) listed type, and counted separately.

Sharded generation derives shard ``i``'s generator from
``numpy.random.SeedSequence([seed, i])``; shard outputs are concatenated in
shard order.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .empirics import ClassGroupRecord
from .heuristics import get_situation, modified_group_prob
from .pgroups import PartitionType, enumerate_types, underlying_abelian

__all__ = ["TypeTable", "SampleRun", "SamplerError", "build_type_table", "sample", "sample_run", "sample_sharded"]

log = logging.getLogger(__name__)

MAX_ENUM_SIZE = 30


class SamplerError(ValueError):
    pass


@dataclass(frozen=True)
class TypeTable:
    types: tuple[PartitionType, ...]
    probs: np.ndarray
    cdf: np.ndarray

    @property
    def overflow_type(self) -> PartitionType:
        return self.types[-1]

    @property
    def listed_mass(self) -> float:
        return float(self.cdf[-1])


@dataclass
class SampleRun:
    records: list[ClassGroupRecord]
    type_index: np.ndarray
    table: TypeTable
    overflow_count: int


def build_type_table(sit, tail_mass: float = 1e-6, max_size: int = MAX_ENUM_SIZE) -> TypeTable:
    """Most likely types covering at least ``1 - tail_mass`` of the law."""
    sit = get_situation(sit)
    if not 0 < tail_mass < 1:
        raise SamplerError("tail_mass must lie in (0, 1)")
    # Grow the enumeration until its total mass clears the target.
    size, types, probs = 4, [], []
    while True:
        types = enumerate_types(size)
        probs = [float(modified_group_prob(sit, t)) for t in types]
        if sum(probs) >= 1 - tail_mass / 2 or size >= max_size:
            break
        size += 2
    if sum(probs) < 1 - tail_mass:
        raise SamplerError(f"tail_mass {tail_mass} too small for enumeration bound {max_size}")
    order = sorted(range(len(types)), key=lambda i: (-probs[i], i))
    chosen, cum = [], 0.0
    for i in order:
        chosen.append(i)
        cum += probs[i]
        if cum >= 1 - tail_mass:
            break
    p = np.array([probs[i] for i in chosen])
    return TypeTable(tuple(types[i] for i in chosen), p, np.cumsum(p))


def _draw(table: TypeTable, n: int, rng: np.random.Generator) -> tuple[np.ndarray, int]:
    u = rng.random(n)
    idx = np.searchsorted(table.cdf, u, side="right")
    overflow = int(np.count_nonzero(idx >= len(table.types)))
    idx = np.minimum(idx, len(table.types) - 1)
    return idx, overflow


def _records(sit, table: TypeTable, idx: np.ndarray, disc_start: int) -> list[ClassGroupRecord]:
    invs = [tuple(underlying_abelian(t, sit.d, sit.p)) for t in table.types]
    return [ClassGroupRecord(disc_start + k, invs[i]) for k, i in enumerate(idx.tolist())]


def sample_run(sit, n: int, seed: int, tail_mass: float = 1e-6, disc_start: int = 1,
               table: Optional[TypeTable] = None) -> SampleRun:
    sit = get_situation(sit)
    if n < 0:
        raise SamplerError("n must be >= 0")
    table = table or build_type_table(sit, tail_mass)
    rng = np.random.Generator(np.random.PCG64(seed))
    idx, overflow = _draw(table, n, rng)
    if overflow:
        log.info("%d of %d draws fell in the tail and were mapped to %s", overflow, n, table.overflow_type)
    return SampleRun(_records(sit, table, idx, disc_start), idx, table, overflow)


def sample(sit, n: int, seed: int, tail_mass: float = 1e-6, disc_start: int = 1) -> list[ClassGroupRecord]:
    """``n`` records with increasing discriminants starting at ``disc_start``."""
    return sample_run(sit, n, seed, tail_mass, disc_start).records


def sample_sharded(sit, n: int, seed: int, shards: int, tail_mass: float = 1e-6, disc_start: int = 1) -> list[ClassGroupRecord]:
    """Split ``n`` draws over ``shards`` independently seeded streams."""
    sit = get_situation(sit)
    table = build_type_table(sit, tail_mass)
    sizes = [n // shards + (1 if i < n % shards else 0) for i in range(shards)]
    out: list[ClassGroupRecord] = []
    start = disc_start
    for i, size in enumerate(sizes):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, i])))
        idx, _ = _draw(table, size, rng)
        out.extend(_records(sit, table, idx, start))
        start += size
    return out
