import pytest

from polyu.forms import TernaryForm
from polyu.polysum import CRITICAL_INTEGERS, MixedSum
from polyu.tables import (
    FIXTURE_FILES,
    escalation_rows,
    expand_closed_form,
    exceptional_rows,
    fixture,
)
from polyu.verify import ALL_TABLES, Verifier, residues


def test_fixture_examples():
    assert fixture("critical19").rows[-2:] == [60, 61]
    assert fixture("critical19").rows == list(CRITICAL_INTEGERS)
    assert len(fixture("eq3.1").rows) == 6
    rows = fixture("5.2").rows
    assert len(rows) == 14
    assert {"case": "5-8", "sum": "1,2|5,5", "exceptional": [15, 20]} in rows
    with pytest.raises(KeyError):
        fixture("9.9")


@pytest.mark.parametrize("tid", sorted(FIXTURE_FILES))
def test_notations_parse(tid):
    fx = fixture(tid)
    assert fx.table_id == tid and fx.title
    rows = fx.rows
    if tid in ("3.1", "4.1", "5.1"):
        for r in rows:
            MixedSum.parse(r["parent"])
    elif tid == "5.2":
        for r in rows:
            MixedSum.parse(r["sum"])
    elif tid == "eq3.1":
        for s in rows:
            MixedSum.parse(s)
    elif tid == "4.3":
        for r in rows:
            TernaryForm.parse(r["f"]), TernaryForm.parse(r["g"])
    elif tid == "intext":
        for group in ("certificates", "prec"):
            for r in rows[group]:
                TernaryForm.parse(r["f"]), TernaryForm.parse(r["g"])


def test_escalation_row_expansion():
    rows = {r.case: r for r in escalation_rows("4.1")}
    r = rows["4-23"]
    assert MixedSum.parse("2,2,3|1") not in r.candidates
    assert MixedSum.parse("1,2,6|1") in rows["4-9"].candidates
    assert rows["4-9"].non_universal == {MixedSum.parse("1,2|1,14")}
    t31 = {r.case: r for r in escalation_rows("3.1")}
    assert t31["3-1"].universal == {MixedSum.parse("1,1|1"), MixedSum.parse("1,1|2")}
    with pytest.raises(KeyError):
        list(escalation_rows("4.3"))


def test_closed_form_expansion():
    rule = {"r": [1, 4], "s_min": 1}
    assert expand_closed_form(rule, 1000) == [20, 45, 70, 95, 620]
    rows = {case: exp for case, _, exp in exceptional_rows(100)}
    assert rows["5-9"] == [20, 45, 70, 95]
    assert rows["5-3"] == [61]


def test_residues_reduce_mod_d():
    assert residues([(1, 2, 0), (-1, -2, 0)], 3) == {(1, 2, 0), (2, 1, 0)}


@pytest.mark.parametrize("tid", ["critical19", "eq3.1", "3.1", "4.1", "5.1", "5.2"])
def test_sum_tables_recompute(tid, small_catalogue):
    v = Verifier(bound=10_000, _catalogue=small_catalogue)
    checks = list(v.table(tid))
    assert checks
    assert [c.line() for c in checks if not c.passed] == []


@pytest.mark.parametrize("tid", ["4.3", "intext"])
def test_form_tables_recompute(tid):
    checks = list(Verifier(bound=10_000, form_bound=3000, conclusion_bound=2000).table(tid))
    assert checks
    assert [c.line() for c in checks if not c.passed] == []


def test_every_fixture_has_a_verifier():
    assert set(ALL_TABLES) == set(FIXTURE_FILES)
