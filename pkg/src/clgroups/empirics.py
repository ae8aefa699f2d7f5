"""Class-group data: ingestion, per-bin summaries and observed/predicted tables.

Record formats
--------------
JSONL, one object per line::

    {"disc": "3896", "clgrp": [27, 3], "field": "optional label"}

CSV, ``disc,inv1|inv2|...`` with an empty second column for the trivial
group and an optional header line (detected when the first field of the
first line is not an integer).
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import IO, Iterable, Iterator, Optional, Union

from .heuristics import (
    ANOMALY_NOTE,
    Situation,
    cl_group_prob,
    cl_rank_prob,
    get_situation,
    modified_group_prob,
    moment,
    rank_prob,
    top_types,
)
from .pgroups import PartitionType, format_type, module_type_from_abelian, p_valuation
from .tables import DistributionTable, TableRow

__all__ = [
    "IngestError",
    "ClassGroupRecord",
    "EmpiricalSummary",
    "DiscBin",
    "INVALID",
    "ingest",
    "iter_records",
    "records_to_text",
    "sylow_type",
    "parse_bins",
    "summarize",
    "compare",
    "moments_table",
]

log = logging.getLogger(__name__)

INVALID = "invalid"
_INT_RE = re.compile(r"^-?\d+$")


class IngestError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
        self.message = message


@dataclass(frozen=True)
class ClassGroupRecord:
    disc: int
    invariants: tuple[int, ...] = ()
    label: Optional[str] = None

    def __post_init__(self):
        inv = tuple(sorted((int(x) for x in self.invariants), reverse=True))
        if any(x < 2 for x in inv):
            raise ValueError(f"invariants must be >= 2, got {inv}")
        object.__setattr__(self, "invariants", inv)

    def to_json(self) -> str:
        doc = {"disc": str(self.disc), "clgrp": list(self.invariants)}
        if self.label is not None:
            doc["field"] = self.label
        return json.dumps(doc, separators=(",", ":"))


def _parse_disc(raw, line_no: int) -> int:
    if isinstance(raw, bool):
        raise IngestError(line_no, f"non-integer disc {raw!r}")
    if isinstance(raw, int):
        value = raw
    elif isinstance(raw, str) and _INT_RE.match(raw.strip()):
        value = int(raw.strip())
    else:
        raise IngestError(line_no, f"non-integer disc {raw!r}")
    return value


def _parse_invariants(values, line_no: int) -> tuple[int, ...]:
    out = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, int):
            raise IngestError(line_no, f"non-integer invariant {v!r}")
        if v < 2:
            raise IngestError(line_no, f"invariant {v} < 2")
        out.append(v)
    return tuple(out)


def _parse_jsonl_line(line: str, line_no: int) -> ClassGroupRecord:
    try:
        doc = json.loads(line)
    except json.JSONDecodeError as exc:
        raise IngestError(line_no, f"malformed JSON ({exc.msg})") from None
    if not isinstance(doc, dict) or "disc" not in doc or "clgrp" not in doc:
        raise IngestError(line_no, "expected an object with 'disc' and 'clgrp'")
    if not isinstance(doc["clgrp"], list):
        raise IngestError(line_no, "'clgrp' must be an array")
    label = doc.get("field")
    return ClassGroupRecord(_parse_disc(doc["disc"], line_no), _parse_invariants(doc["clgrp"], line_no), label)


def _parse_csv_row(row: list[str], line_no: int) -> ClassGroupRecord:
    if len(row) not in (1, 2):
        raise IngestError(line_no, f"expected 2 columns, got {len(row)}")
    disc = _parse_disc(row[0], line_no)
    text = row[1].strip() if len(row) == 2 else ""
    invs = []
    if text:
        for piece in text.split("|"):
            piece = piece.strip()
            if not _INT_RE.match(piece):
                raise IngestError(line_no, f"non-integer invariant {piece!r}")
            invs.append(int(piece))
    return ClassGroupRecord(disc, _parse_invariants(invs, line_no))


def iter_records(
    lines: Iterable[str], fmt: str = "jsonl", strict: bool = True, errors: Optional[list] = None
) -> Iterator[ClassGroupRecord]:
    """Stream records from text lines.

    With ``strict=False`` bad lines are logged, appended to ``errors`` and
    skipped; otherwise the first bad line raises :class:`IngestError`.
    """
    if fmt not in ("jsonl", "csv"):
        raise ValueError(f"unknown record format {fmt!r}")
    for line_no, line in enumerate(lines, start=1):
        line = line.rstrip("\r\n")
        if not line.strip():
            continue
        try:
            if fmt == "jsonl":
                yield _parse_jsonl_line(line, line_no)
            else:
                row = next(csv.reader([line]))
                if line_no == 1 and row and not _INT_RE.match(row[0].strip()):
                    continue  # header
                yield _parse_csv_row(row, line_no)
        except IngestError as exc:
            if strict:
                raise
            log.warning("skipping %s", exc)
            if errors is not None:
                errors.append(exc)


def ingest(
    source: Union[str, Path, IO[str]], fmt: Optional[str] = None, strict: bool = True, errors: Optional[list] = None
) -> list[ClassGroupRecord]:
    """Read a JSONL or CSV file (path or open text stream)."""
    if isinstance(source, (str, Path)):
        path = Path(source)
        if fmt is None:
            fmt = "csv" if path.suffix.lower() == ".csv" else "jsonl"
        with path.open(encoding="utf-8") as fh:
            return list(iter_records(fh, fmt, strict, errors))
    return list(iter_records(source, fmt or "jsonl", strict, errors))


def records_to_text(records: Iterable[ClassGroupRecord], fmt: str = "jsonl") -> str:
    if fmt == "jsonl":
        return "".join(r.to_json() + "\n" for r in records)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for r in records:
            w.writerow([r.disc, "|".join(map(str, r.invariants))])
        return buf.getvalue()
    raise ValueError(f"unknown record format {fmt!r}")


def sylow_type(rec: Union[ClassGroupRecord, Iterable[int]], p: int) -> PartitionType:
    """Partition of the p-adic valuations of the invariants, zeros dropped."""
    invs = rec.invariants if isinstance(rec, ClassGroupRecord) else tuple(rec)
    vals = [v for v in (p_valuation(n, p) for n in invs) if v]
    return PartitionType(tuple(sorted(vals, reverse=True)))


# --- binning and summaries --------------------------------------------------


@dataclass(frozen=True)
class DiscBin:
    """Half-open range ``[lo, hi)`` for ``|disc|``; ``hi=None`` is unbounded."""

    lo: int
    hi: Optional[int] = None

    def __contains__(self, disc: int) -> bool:
        disc = abs(disc)
        return disc >= self.lo and (self.hi is None or disc < self.hi)

    @property
    def label(self) -> str:
        if self.hi is None:
            return f">={_short(self.lo)}"
        return f"[{_short(self.lo)},{_short(self.hi)})"


def _short(n: int) -> str:
    if n >= 10 and n == 10 ** round(math.log10(n)):
        return f"1e{round(math.log10(n))}"
    return str(n)


def _parse_bound(text: str) -> int:
    try:
        d = Decimal(text.strip())
    except InvalidOperation:
        raise ValueError(f"bad discriminant bound {text!r}") from None
    if d != d.to_integral_value() or d < 0:
        raise ValueError(f"discriminant bound must be a nonnegative integer: {text!r}")
    return int(d)


def parse_bins(spec: str) -> list[DiscBin]:
    """``"1e16,1e20"`` -> ``[1e16, 1e20)`` and ``>= 1e20``."""
    edges = [_parse_bound(x) for x in spec.split(",") if x.strip()]
    if not edges:
        raise ValueError("no bin edges given")
    if any(a >= b for a, b in zip(edges, edges[1:])):
        raise ValueError("bin edges must be strictly increasing")
    return [DiscBin(a, b) for a, b in zip(edges, edges[1:])] + [DiscBin(edges[-1], None)]


@dataclass
class EmpiricalSummary:
    bin_label: str
    count: int
    rank_freq: dict = field(default_factory=dict)
    type_freq: dict = field(default_factory=dict)
    moments: dict = field(default_factory=dict)
    rank_counts: dict = field(default_factory=dict)
    type_counts: dict = field(default_factory=dict)
    invalid_rank: int = 0
    invalid_type: int = 0


def _summarize_one(label: str, records: list[ClassGroupRecord], sit: Situation, max_moment: int) -> EmpiricalSummary:
    p, d = sit.p, sit.d
    n = len(records)
    rank_counts: Counter = Counter()
    type_counts: Counter = Counter()
    prank_counts: Counter = Counter()
    cache: dict = {}
    for rec in records:
        key = rec.invariants
        hit = cache.get(key)
        if hit is None:
            lam = sylow_type(rec, p)
            mod = module_type_from_abelian(lam, d)
            hit = cache[key] = (lam.length, mod)
        prank, mod = hit
        prank_counts[prank] += 1
        rank_counts[prank // d if prank % d == 0 else INVALID] += 1
        type_counts[mod if mod is not None else INVALID] += 1
    summary = EmpiricalSummary(label, n, rank_counts=dict(rank_counts), type_counts=dict(type_counts))
    summary.invalid_rank = rank_counts.get(INVALID, 0)
    summary.invalid_type = type_counts.get(INVALID, 0)
    if summary.invalid_rank or summary.invalid_type:
        log.warning(
            "bin %s: %d records with p-rank not divisible by %d, %d not of module type",
            label, summary.invalid_rank, d, summary.invalid_type,
        )
    if n:
        summary.rank_freq = {k: v / n for k, v in rank_counts.items()}
        summary.type_freq = {k: v / n for k, v in type_counts.items()}
        for m in range(1, max_moment + 1):
            summary.moments[m] = sum(c * float(p ** (m * r)) for r, c in prank_counts.items()) / n
    return summary


def summarize(
    records: Iterable[ClassGroupRecord], sit, bins: Optional[list[DiscBin]] = None, max_moment: int = 3
) -> list[EmpiricalSummary]:
    """Rank, Sylow-type and moment statistics per discriminant bin.

    Ranks are keyed by O-rank (p-rank / d); records whose p-rank is not a
    multiple of ``d`` go to the ``"invalid"`` bucket.  The n-th moment is the
    mean of ``p^{n * p-rank}``.
    """
    sit = get_situation(sit)
    if bins is None:
        bins = [DiscBin(0, None)]
    for a, b in zip(bins, bins[1:]):
        if a.hi is None or a.hi > b.lo:
            raise ValueError("bins must be disjoint and increasing")
    grouped: list[list[ClassGroupRecord]] = [[] for _ in bins]
    for rec in records:
        for i, b in enumerate(bins):
            if rec.disc in b:
                grouped[i].append(rec)
                break
    return [_summarize_one(b.label, recs, sit, max_moment) for b, recs in zip(bins, grouped)]


def compare(
    summary: EmpiricalSummary,
    sit,
    kind: str = "sylow",
    predictor: str = "modified",
    min_predicted: float = 1e-5,
    max_rank: int = 3,
) -> DistributionTable:
    """Observed frequencies against a predictor, one column per rank or type.

    Columns are ordered by predicted probability, descending.  Sylow columns
    cover every observed type plus every type with predicted probability at
    least ``min_predicted``.
    """
    sit = get_situation(sit)
    if predictor not in ("modified", "cl"):
        raise ValueError(f"unknown predictor {predictor!r}")
    name = "modified law" if predictor == "modified" else "Cohen-Lenstra-Martinet"
    if kind == "rank":
        fn = rank_prob if predictor == "modified" else cl_rank_prob
        observed_ranks = [k for k in summary.rank_freq if k != INVALID]
        ranks = sorted(set(range(max_rank + 1)) | set(observed_ranks))
        keys = ranks
        columns = [f"r={sit.d * r}" for r in ranks]
        predicted = [float(fn(sit, r)) for r in ranks]
        observed = [summary.rank_freq.get(r, 0.0) for r in ranks]
    elif kind == "sylow":
        fn = modified_group_prob if predictor == "modified" else cl_group_prob
        candidates = set(k for k in summary.type_freq if k != INVALID)
        for t in top_types(sit, 64, predictor):
            if float(fn(sit, t)) >= min_predicted:
                candidates.add(t)
        preds = {t: float(fn(sit, t)) for t in candidates}
        keys = sorted(candidates, key=lambda t: (-preds[t], t.size, tuple(-x for x in t.parts)))
        columns = [format_type(t, sit.p, sit.d) for t in keys]
        predicted = [preds[t] for t in keys]
        observed = [summary.type_freq.get(t, 0.0) for t in keys]
    else:
        raise ValueError(f"unknown comparison kind {kind!r}")
    ratio = [o / p if p > 0 else None for o, p in zip(observed, predicted)]
    table = DistributionTable(
        f"Situation {sit.describe()}: {kind} vs {name}", columns,
    )
    table.add_row(TableRow(summary.bin_label, observed, "observed", summary.count))
    table.add_row(TableRow(summary.bin_label, ratio, "ratio", summary.count))
    table.add_row(TableRow(name, predicted, "predicted"))
    invalid = summary.invalid_rank if kind == "rank" else summary.invalid_type
    if invalid:
        table.notes.append(f"{summary.bin_label}: {invalid} records outside the module-type lattice (excluded)")
    if sit.anomalous:
        table.notes.append(ANOMALY_NOTE)
    return table


def moments_table(summaries: list[EmpiricalSummary], sit, max_moment: int = 3) -> DistributionTable:
    sit = get_situation(sit)
    columns = [f"n={n}" for n in range(1, max_moment + 1)]
    table = DistributionTable(f"Situation {sit.describe()}: higher moments", columns)
    for s in summaries:
        table.add_row(TableRow(s.bin_label, [s.moments.get(n) for n in range(1, max_moment + 1)], "observed", s.count))
    table.add_row(TableRow("modified law", [float(moment(sit, n)) for n in range(1, max_moment + 1)], "predicted"))
    return table
