import math

import pytest

from geometry.tube_trig import MARGULIS_RADIUS, f_packing
from reports.bound_reports import ConeLocusSpec, assemble_report
from ui.components import TABLE_RADII, constants_table, flag_rows, parse_lengths


def test_parse_lengths():
    assert parse_lengths("0.01, 0.02 0.03") == [0.01, 0.02, 0.03]
    assert parse_lengths("  ") == []
    with pytest.raises(ValueError):
        parse_lengths("0.01, short")


def test_constants_table():
    rows = constants_table(0.9)
    assert [row["radius"] for row in rows] == TABLE_RADII
    assert rows[3]["radius"] == MARGULIS_RADIUS
    assert rows[2]["f"] == pytest.approx(f_packing(1.0))
    assert all(row["g"] > 0 for row in rows)


def test_flag_rows():
    spec = ConeLocusSpec(components=[{"length": 0.01}, {"length": 6.0}], K=1.5)
    rows = flag_rows(assemble_report(spec))
    assert len(rows) == 3
    assert rows[0]["length_ok"] == "✅"
    assert rows[1]["length_ok"] == "❌"
    assert rows[2]["component"] == "all"
    assert rows[2]["length_ok"] == "❌"
    assert rows[2]["radius_ok"] == "disjointness assumed"
    assert math.isnan(rows[2]["angle"])
