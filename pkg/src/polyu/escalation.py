"""Escalation of mixed sums and classification of the candidates.

Starting from the empty sum (truant 1), every non-universal sum of arity k-1
is extended by one square or octagonal coefficient no larger than its truant.
Children that already contain a universal sum of arity k-1 cannot be proper
and are dropped.  Each surviving candidate is classified by a bounded scan
cross-checked with the 19-integer criterion.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from .polysum import (
    IndeterminateError,
    MixedSum,
    TruantReport,
    Verdict,
    criterion_universal,
    truant,
)

#: escalation provably stops at arity six
MAX_ARITY = 6

ROOT = MixedSum()
ROOT_REPORT = TruantReport(Verdict.NON_UNIVERSAL, 1, 61, False)


@lru_cache(maxsize=None)
def _criterion(phi: MixedSum) -> bool:
    return criterion_universal(phi)


@dataclass(frozen=True)
class EscalationNode:
    sum: MixedSum
    parent: MixedSum | None
    report: TruantReport


def children(phi: MixedSum, t: int) -> set[MixedSum]:
    """Every sum obtained by inserting one coefficient ``1 <= c <= t``."""
    out = set()
    for c in range(1, t + 1):
        out.add(phi.with_square(c))
        out.add(phi.with_octagonal(c))
    return out


def escalate(parents: Mapping[MixedSum, TruantReport]) -> dict[MixedSum, tuple[MixedSum, ...]]:
    """Candidates of the next arity, each mapped to the parents producing it.

    Children with a universal leave-one-out subsum are not proper and are
    skipped, which is what the "considered already" bookkeeping amounts to.
    """
    found: dict[MixedSum, set[MixedSum]] = {}
    for phi, report in parents.items():
        if report.verdict is not Verdict.NON_UNIVERSAL:
            raise ValueError(f"cannot escalate {phi}: it has no truant")
        for child in children(phi, report.truant):
            found.setdefault(child, set()).add(phi)
    out = {}
    for child in sorted(found):
        if any(_criterion(sub) for sub in child.leave_one_out()):
            continue
        out[child] = tuple(sorted(found[child]))
    return out


def _truant_job(args: tuple[MixedSum, int]) -> TruantReport:
    phi, bound = args
    return truant(phi, bound)


def resolve_workers(workers: int | str | None) -> int:
    if workers in (None, "auto"):
        return max(1, os.cpu_count() or 1)
    n = int(workers)
    if n < 1:
        raise ValueError("workers must be positive")
    return n


def _reports(candidates: list[MixedSum], bound: int, workers: int) -> list[TruantReport]:
    if workers <= 1 or len(candidates) < 64:
        return [truant(phi, bound) for phi in candidates]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_truant_job, [(phi, bound) for phi in candidates],
                             chunksize=16))


@dataclass
class ClassificationRun:
    arity: int
    bound: int
    candidates: frozenset[MixedSum]
    universal: frozenset[MixedSum]
    proper_universal: frozenset[MixedSum]
    failures: dict[MixedSum, int]
    reports: dict[MixedSum, TruantReport] = field(repr=False)
    parents: dict[MixedSum, tuple[MixedSum, ...]] = field(default_factory=dict, repr=False)

    def nonuniversal_reports(self) -> dict[MixedSum, TruantReport]:
        return {phi: self.reports[phi] for phi in sorted(self.failures)}

    def rows(self) -> list[dict]:
        out = []
        for phi in sorted(self.candidates):
            rep = self.reports[phi]
            out.append({
                "notation": phi.notation,
                "arity": phi.arity,
                "verdict": rep.verdict.value,
                "truant": rep.truant if rep.truant is not None else "",
                "proper": phi in self.proper_universal,
            })
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, ["notation", "arity", "verdict", "truant", "proper"],
                                lineterminator="\n")
        writer.writeheader()
        for row in self.rows():
            writer.writerow({**row, "proper": int(row["proper"])})
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "arity": self.arity,
            "bound": self.bound,
            "counts": {
                "candidates": len(self.candidates),
                "universal": len(self.universal),
                "proper_universal": len(self.proper_universal),
                "non_universal": len(self.failures),
            },
            "sums": [
                {**phi.to_json(), "notation": phi.notation,
                 **self.reports[phi].to_json(),
                 "proper": phi in self.proper_universal}
                for phi in sorted(self.candidates)
            ],
        }


def classify(candidates: Iterable[MixedSum], bound: int, *, workers: int | str = 1,
             parents: Mapping[MixedSum, tuple[MixedSum, ...]] | None = None) -> ClassificationRun:
    """Split candidates into universal sums and failures with their truants.

    Raises ``IndeterminateError`` when the bounded scan and the 19-integer
    criterion disagree about any candidate.
    """
    cands = sorted(set(candidates))
    arities = {phi.arity for phi in cands}
    if len(arities) > 1:
        raise ValueError(f"candidates of mixed arity {sorted(arities)}")
    reports = dict(zip(cands, _reports(cands, bound, resolve_workers(workers))))
    universal, failures = set(), {}
    for phi, rep in reports.items():
        if rep.verdict is Verdict.INDETERMINATE:
            raise IndeterminateError(f"{phi}: no truant up to {bound} but criterion fails")
        if rep.verdict is Verdict.NON_UNIVERSAL and rep.criterion_passed:
            raise IndeterminateError(f"{phi}: criterion passes but {rep.truant} is missed")
        if rep.universal:
            universal.add(phi)
        else:
            failures[phi] = rep.truant
    proper = {phi for phi in universal
              if not any(_criterion(sub) for sub in phi.leave_one_out())}
    return ClassificationRun(
        arity=arities.pop() if arities else 0,
        bound=bound,
        candidates=frozenset(cands),
        universal=frozenset(universal),
        proper_universal=frozenset(proper),
        failures=failures,
        reports=reports,
        parents=dict(parents or {}),
    )


@dataclass
class Catalogue:
    bound: int
    runs: list[ClassificationRun]

    @property
    def total(self) -> int:
        return sum(len(r.proper_universal) for r in self.runs)

    def counts(self) -> dict[int, int]:
        return {r.arity: len(r.proper_universal) for r in self.runs}

    def summary(self) -> str:
        parts = [f"{k}:{v}" for k, v in self.counts().items() if v]
        return " ".join(parts + [f"total:{self.total}"])

    def proper_universal(self) -> list[MixedSum]:
        return sorted(phi for r in self.runs for phi in r.proper_universal)

    def to_json(self) -> dict:
        return {"bound": self.bound, "total": self.total,
                "counts": {str(k): v for k, v in self.counts().items()},
                "runs": [r.to_json() for r in self.runs]}


def full_catalogue(bound: int = 100_000, *, workers: int | str = 1,
                   max_arity: int = MAX_ARITY) -> Catalogue:
    """Escalate from the empty sum until no non-universal candidate is left."""
    runs: list[ClassificationRun] = []
    frontier = {ROOT: ROOT_REPORT}
    arity = 0
    while frontier:
        arity += 1
        if arity > max_arity:
            raise RuntimeError(
                f"escalation did not stop: {len(frontier)} non-universal sums of "
                f"arity {arity - 1} would produce arity-{arity} candidates, e.g. "
                + ", ".join(p.notation for p in sorted(frontier)[:5]))
        cands = escalate(frontier)
        run = classify(cands, bound, workers=workers, parents=cands)
        runs.append(run)
        frontier = run.nonuniversal_reports()
    return Catalogue(bound, runs)


def dump_catalogue(cat: Catalogue) -> str:
    return json.dumps(cat.to_json(), indent=1, sort_keys=True)
