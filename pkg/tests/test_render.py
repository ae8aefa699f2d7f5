import json

import pytest

from conftest import GOLDEN
from clgroups import heuristics as H
from clgroups.tables import Cell, DistributionTable, TableRow, format_value, render, stack


@pytest.mark.parametrize("fmt,ext,style", [("markdown", "md", "compact"), ("csv", "csv", "plain"), ("json", "json", "plain")])
def test_golden_snapshots(fmt, ext, style):
    table = H.predicted_table(1, "sylow", 9, "both")
    assert render(table, fmt, 4, style) == (GOLDEN / f"sit1_sylow.{ext}").read_text()


@pytest.mark.parametrize(
    "x,style,expected",
    [
        (0.852, "plain", "0.8520"),
        (0.852, "compact", ".8520"),
        (0.000075, "compact", ".7500e-4"),
        (1336.5, "plain", "1337"),
        (0.00016501, "compact", ".1650e-3"),
        (None, "plain", ""),
        (0.0, "compact", "0"),
    ],
)
def test_format_value(x, style, expected):
    assert format_value(x, 4, style) == expected


def test_format_value_digits():
    assert format_value(0.0765042, 2, "compact") == ".077"
    assert format_value(0.125, 2, "plain") == "0.13"


def table_pair():
    a = DistributionTable("bin a", ["1", "3"])
    a.add_row(TableRow("[0,10)", [0.8, 0.2], "observed", 10))
    a.add_row(TableRow("[0,10)", [1.0, 1.0], "ratio", 10))
    a.add_row(TableRow("formula", [0.8, 0.2], "predicted"))
    b = DistributionTable("bin b", ["1", "3"])
    b.add_row(TableRow(">=10", [0.7, 0.3], "observed", 5))
    b.add_row(TableRow("formula", [0.8, 0.2], "predicted"))
    return a, b


def test_stack_puts_predictions_last_once():
    t = stack(list(table_pair()))
    assert [r.role for r in t.rows] == ["observed", "ratio", "observed", "predicted"]


def test_cells_and_roles():
    a, _ = table_pair()
    cells = a.cells()
    assert cells[0] == Cell("1", 0.8, 0.8, 1.0)
    with pytest.raises(ValueError):
        TableRow("x", [1], "guess")
    with pytest.raises(ValueError):
        a.add_row(TableRow("x", [1, 2, 3], "observed"))


def test_render_markdown_notes_and_json():
    a, _ = table_pair()
    a.notes.append("caveat")
    md = render(a)
    assert md.splitlines()[-1] == "> caveat"
    doc = json.loads(render(a, "json"))
    assert doc["rows"][0]["count"] == 10
    with pytest.raises(ValueError):
        render(a, "xml")
