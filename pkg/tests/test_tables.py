from __future__ import annotations

import json

import pytest

from _golden import GOLDEN, load_golden, mismatches
from bsv.tables import TABLE_IDS, UnknownTable, generate_table, render_json, render_text


@pytest.mark.parametrize("tid", TABLE_IDS)
def test_matches_transcribed_fixture(tid):
    assert mismatches(generate_table(tid), load_golden(tid)) == []


@pytest.mark.parametrize("tid", TABLE_IDS)
def test_text_rendering_is_frozen(tid):
    assert render_text(generate_table(tid)) == (GOLDEN / f"table{tid}.txt").read_text(encoding="utf-8")


@pytest.mark.parametrize("tid", (4, 5, 6))
def test_glyph_rendering_is_frozen(tid):
    got = render_text(generate_table(tid), unicode=True)
    assert got == (GOLDEN / f"table{tid}.unicode.txt").read_text(encoding="utf-8")


@pytest.mark.parametrize("tid", TABLE_IDS)
def test_json_is_byte_stable_and_parses(tid):
    first = render_json(generate_table(tid))
    assert render_json(generate_table(tid)) == first
    assert json.loads(first)["table"] == tid


def test_table2_column2_marks_the_sc_ssc_pre_violation():
    t = generate_table(2)
    rows = {r["label"]: r["values"] for r in t["rows"]}
    assert rows["effPre_SC"][1] and rows["effPre_SSC"][1]
    assert {"kind": "pre", "sup": "SC", "sub": "SSC"} in t["violations"][1]


def test_table4_first_column_accepts_and_last_rejects():
    cells = [r["cells"] for r in generate_table(4)["decisions"]]
    assert all(c[0] == ["ACC"] for c in cells)
    assert all("REJ" in c[3][0] for c in cells)


def test_table6_rejected_rows_are_dashes():
    blocks = {tuple(b["pre"]): b for b in generate_table(6)["composition"]}
    for pre in ((True, False), (False, False)):
        assert blocks[pre]["implications"] == [None] * 4
    assert blocks[(False, True)]["implications"] == [[True, True], [True, False], [True, True], [True, False]]


def test_unknown_table():
    with pytest.raises(UnknownTable):
        generate_table(7)
