"""Labelled distribution tables and their markdown / csv / json renderings.

A table has one column per rank, Sylow type or moment index and one row per
data source.  Observed rows (one per discriminant bin) come first and
prediction rows last, the usual layout for comparing data with a heuristic.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from decimal import Decimal
from typing import Optional

from .qseries import round_sig

__all__ = ["TableRow", "Cell", "DistributionTable", "render", "format_value", "stack"]

ROLES = ("observed", "ratio", "predicted")


@dataclass
class TableRow:
    label: str
    values: list[Optional[float]]
    role: str = "predicted"
    count: Optional[int] = None

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown row role {self.role!r}")


@dataclass(frozen=True)
class Cell:
    column: str
    observed: Optional[float]
    predicted: Optional[float]
    ratio: Optional[float]


@dataclass
class DistributionTable:
    title: str
    columns: list[str]
    rows: list[TableRow] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add_row(self, row: TableRow) -> None:
        if len(row.values) != len(self.columns):
            raise ValueError(f"row {row.label!r} has {len(row.values)} values for {len(self.columns)} columns")
        self.rows.append(row)

    def rows_with_role(self, role: str) -> list[TableRow]:
        return [r for r in self.rows if r.role == role]

    def cells(self) -> list[Cell]:
        """Per-column (observed, predicted, ratio), from the first row of each role."""

        def first(role):
            rows = self.rows_with_role(role)
            return rows[0].values if rows else [None] * len(self.columns)

        obs, pred, ratio = first("observed"), first("predicted"), first("ratio")
        return [Cell(c, o, p, r) for c, o, p, r in zip(self.columns, obs, pred, ratio)]


def stack(tables: list[DistributionTable], title: Optional[str] = None) -> DistributionTable:
    """Merge single-bin comparison tables into one table: all bins first, predictions last.

    Columns are the union in first-seen order; each input contributes its
    observed/ratio rows, and the prediction rows of the first input close
    the table.
    """
    if not tables:
        raise ValueError("nothing to stack")
    columns: list[str] = []
    for t in tables:
        for c in t.columns:
            if c not in columns:
                columns.append(c)
    out = DistributionTable(title or tables[0].title, columns)

    def remap(t, row):
        lookup = dict(zip(t.columns, row.values))
        return TableRow(row.label, [lookup.get(c) for c in columns], row.role, row.count)

    for t in tables:
        for row in t.rows:
            if row.role != "predicted":
                out.add_row(remap(t, row))
    seen_pred = set()
    for t in tables:
        for row in t.rows_with_role("predicted"):
            if row.label not in seen_pred:
                seen_pred.add(row.label)
                out.add_row(remap(t, row))
    for t in tables:
        for n in t.notes:
            if n not in out.notes:
                out.notes.append(n)
    return out


def _decimal_text(d: Decimal) -> str:
    return format(d, "f")


def format_value(x: Optional[float], digits: int = 4, style: str = "plain") -> str:
    """Format ``x`` to ``digits`` significant digits, rounding ties away from zero.

    ``style="compact"`` drops the leading zero and writes small values with a
    mantissa in ``[0.1, 1)``: ``0.852 -> .852``, ``7.5e-4 -> .75e-3``.
    """
    if x is None:
        return ""
    if x == 0:
        return "0"
    d = round_sig(x, digits)
    if style == "compact":
        sign = "-" if d < 0 else ""
        d = abs(d)
        if d >= Decimal("0.001"):
            text = _decimal_text(d)
            if text.startswith("0."):
                text = text[1:]
            return sign + text
        # mantissa in [0.1, 1): x = m * 10^k
        k = d.adjusted() + 1
        m = (d.scaleb(-k)).normalize()
        mant = _decimal_text(round_sig(m, digits))
        if mant.startswith("0."):
            mant = mant[1:]
        return f"{sign}{mant}e{k}"
    if style != "plain":
        raise ValueError(f"unknown style {style!r}")
    if Decimal("1e-4") <= abs(d) < Decimal("1e7"):
        return _decimal_text(d)
    mant = d.scaleb(-d.adjusted())
    return f"{_decimal_text(mant)}e{d.adjusted():+03d}"


def _row_cells(row: TableRow, digits: int, style: str) -> list[str]:
    return [format_value(v, digits, style) for v in row.values]


def render(table: DistributionTable, fmt: str = "markdown", digits: int = 4, style: str = "plain") -> str:
    """Deterministic text rendering in ``markdown``, ``csv`` or ``json``."""
    if fmt == "markdown":
        header = ["D", "|S|"] + list(table.columns)
        lines = [f"**{table.title}**", ""]
        lines.append("| " + " | ".join(h.replace("|", "\\|") for h in header) + " |")
        lines.append("|" + "|".join(["---"] * 2 + ["---:"] * len(table.columns)) + "|")
        observed = [r for r in table.rows if r.role != "predicted"]
        predicted = table.rows_with_role("predicted")
        for row in observed + predicted:
            count = "" if row.count is None else str(row.count)
            lines.append("| " + " | ".join([row.label, count] + _row_cells(row, digits, style)) + " |")
        if table.notes:
            lines.append("")
            lines.extend(f"> {n}" for n in table.notes)
        return "\n".join(lines) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["label", "role", "count"] + list(table.columns))
        for row in table.rows:
            w.writerow([row.label, row.role, "" if row.count is None else row.count] + _row_cells(row, digits, style))
        return buf.getvalue()
    if fmt == "json":
        doc = {
            "title": table.title,
            "columns": list(table.columns),
            "rows": [
                {
                    "label": r.label,
                    "role": r.role,
                    "count": r.count,
                    "values": [None if v is None else float(round_sig(v, digits)) for v in r.values],
                }
                for r in table.rows
            ],
            "notes": list(table.notes),
        }
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
