import csv
import io

import pytest

from polyu.escalation import (
    ROOT,
    ROOT_REPORT,
    children,
    classify,
    escalate,
    full_catalogue,
    resolve_workers,
)
from polyu.polysum import IndeterminateError, MixedSum, TruantReport, Verdict, criterion_universal


def test_root_children():
    cands = escalate({ROOT: ROOT_REPORT})
    assert sorted(c.notation for c in cands) == ["1|", "|1"]
    assert children(MixedSum.parse("1|"), 2) == {MixedSum.parse(s) for s in
                                                 ("1,1|", "1,2|", "1|1", "1|2")}


def test_escalate_rejects_universal_parent():
    rep = TruantReport(Verdict.UNIVERSAL, None, 100, True)
    with pytest.raises(ValueError):
        escalate({MixedSum.parse("1,1|1"): rep})


def test_counts_per_arity(small_catalogue):
    runs = {r.arity: r for r in small_catalogue.runs}
    assert {k: len(r.candidates) for k, r in runs.items() if k >= 3} == {3: 42, 4: 564, 5: 708, 6: 11}
    assert len(runs[3].failures) == 36 and len(runs[4].failures) == 17
    assert runs[5].failures == {MixedSum.parse("1,2|5,5,5"): 20}
    assert small_catalogue.summary() == "3:6 4:547 5:707 6:11 total:1271"


def test_proper_universal_properties(small_catalogue):
    for run in small_catalogue.runs:
        assert run.proper_universal <= run.universal <= run.candidates
        for phi in run.proper_universal:
            assert not any(criterion_universal(s) for s in phi.leave_one_out())
        for phi, t in list(run.failures.items())[:20]:
            assert run.reports[phi].truant == t


def test_children_of_parents(small_catalogue):
    runs = {r.arity: r for r in small_catalogue.runs}
    for phi, parents in list(runs[4].parents.items())[:50]:
        for p in parents:
            assert p.is_subsum_of(phi)
            extra = phi.arity - p.arity
            assert extra == 1


def test_classify_splits():
    run = classify([MixedSum.parse(s) for s in ("1,1|1", "1,1|3", "1,2|5")], 1000)
    assert run.universal == {MixedSum.parse("1,1|1")}
    assert run.failures == {MixedSum.parse("1,1|3"): 6, MixedSum.parse("1,2|5"): 10}
    with pytest.raises(ValueError):
        classify([MixedSum.parse("1|"), MixedSum.parse("1,1|")], 1000)


def test_classify_flags_disagreement(monkeypatch):
    import polyu.escalation as esc

    def fake(phi, bound):
        return TruantReport(Verdict.INDETERMINATE, None, bound, False)

    monkeypatch.setattr(esc, "truant", fake)
    with pytest.raises(IndeterminateError):
        esc.classify([MixedSum.parse("1,1|1")], 1000)


def test_exports(small_catalogue):
    run = small_catalogue.runs[2]
    rows = list(csv.DictReader(io.StringIO(run.to_csv())))
    assert len(rows) == 42 and rows[0].keys() == {"notation", "arity", "verdict", "truant", "proper"}
    assert sum(r["proper"] == "1" for r in rows) == 6
    data = run.to_json()
    assert data["counts"]["proper_universal"] == 6 and len(data["sums"]) == 42
    assert small_catalogue.to_json()["total"] == 1271


def test_arity_cap():
    with pytest.raises(RuntimeError):
        full_catalogue(1000, max_arity=4)


def test_resolve_workers():
    assert resolve_workers(3) == 3 and resolve_workers("auto") >= 1
    with pytest.raises(ValueError):
        resolve_workers(0)


def test_parallel_matches_serial():
    cands = escalate({ROOT: ROOT_REPORT})
    cands = escalate({c: r for c, r in classify(cands, 1000).nonuniversal_reports().items()})
    frontier = classify(cands, 1000).nonuniversal_reports()
    ternary = list(escalate(frontier))
    a = classify(ternary, 2000, workers=1)
    b = classify(ternary, 2000, workers=2)
    assert a.reports == b.reports
