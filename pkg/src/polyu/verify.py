"""Recompute every fixture row and compare with the embedded values."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator

from .escalation import Catalogue, full_catalogue
from .forms import (
    TernaryForm,
    good_partition,
    pme_check,
    pme_conclusion_counterexamples,
    primitive_eigenvectors,
    has_infinite_order,
    represented_set,
    siegel_identity_failures,
)
from .polysum import (
    CRITICAL_INTEGERS,
    IndeterminateError,
    MixedSum,
    exceptional_set,
    reduction_failures,
    truant,
)
from .tables import escalation_rows, exceptional_rows, fixture

ALL_TABLES = ("critical19", "eq3.1", "3.1", "4.1", "5.1", "4.3", "5.2", "intext")


@dataclass(frozen=True)
class RowCheck:
    table_id: str
    row: str
    passed: bool
    expected: Any = None
    actual: Any = None

    def line(self) -> str:
        head = f"{'PASS' if self.passed else 'FAIL'} {self.table_id} {self.row}"
        if self.passed:
            return head
        return f"{head}: expected {self.expected}, got {self.actual}"

    def to_json(self) -> dict:
        return {"table": self.table_id, "row": self.row, "passed": self.passed,
                "expected": _plain(self.expected), "actual": _plain(self.actual)}


def _plain(x: Any) -> Any:
    if isinstance(x, (set, frozenset, tuple, list)):
        items = [_plain(v) for v in x]
        return sorted(items) if isinstance(x, (set, frozenset)) else items
    if isinstance(x, MixedSum):
        return x.notation
    return x


def _check(table_id: str, row: str, expected: Any, actual: Any) -> RowCheck:
    return RowCheck(table_id, row, expected == actual, expected, actual)


def _notations(sums: Iterable[MixedSum]) -> list[str]:
    return [phi.notation for phi in sorted(sums)]


def residues(vectors: Iterable[Iterable[int]], d: int) -> set[tuple[int, ...]]:
    return {tuple(x % d for x in v) for v in vectors}


def _shape_member(n: int, p: int, parity: str, modulus: int, res: list[int]) -> bool:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e % 2 == (parity == "odd") and n % modulus in res


@dataclass
class Verifier:
    """Shared state for one verification run.

    ``bound`` drives truant scans, exceptional sets and the catalogue;
    ``form_bound`` drives represented-set and identity checks on ternary
    forms; ``conclusion_bound`` the infinite-order conclusion checks.
    """

    bound: int = 100_000
    workers: int | str = 1
    form_bound: int = 10_000
    conclusion_bound: int = 5_000
    _catalogue: Catalogue | None = field(default=None, repr=False)

    def catalogue(self) -> Catalogue:
        if self._catalogue is None:
            self._catalogue = full_catalogue(self.bound, workers=self.workers)
        return self._catalogue

    def run(self, tables: Iterable[str] = ALL_TABLES) -> list[RowCheck]:
        out: list[RowCheck] = []
        for t in tables:
            out.extend(self.table(t))
        return out

    def table(self, table_id: str) -> Iterator[RowCheck]:
        handlers: dict[str, Callable[[], Iterator[RowCheck]]] = {
            "critical19": self.critical19,
            "eq3.1": self.eq31,
            "3.1": lambda: self.escalation("3.1"),
            "4.1": lambda: self.escalation("4.1"),
            "5.1": lambda: self.escalation("5.1"),
            "4.3": self.table43,
            "5.2": self.table52,
            "intext": self.intext,
        }
        if table_id not in handlers:
            raise KeyError(f"unknown fixture {table_id!r}")
        return handlers[table_id]()

    # -- sums ---------------------------------------------------------------

    def critical19(self) -> Iterator[RowCheck]:
        yield _check("critical19", "integers", list(fixture("critical19").rows),
                     list(CRITICAL_INTEGERS))
        try:
            cat = self.catalogue()
        except IndeterminateError as exc:
            yield RowCheck("critical19", "criterion vs truant", False, "agreement", str(exc))
            return
        n = sum(len(r.candidates) for r in cat.runs)
        yield RowCheck("critical19", f"criterion vs truant on {n} candidates", True)

    def eq31(self) -> Iterator[RowCheck]:
        run = self.catalogue().runs[2]
        yield _check("eq3.1", "ternary universal sums", sorted(fixture("eq3.1").rows),
                     sorted(phi.notation for phi in run.proper_universal))

    def escalation(self, table_id: str) -> Iterator[RowCheck]:
        runs = {r.arity: r for r in self.catalogue().runs}
        union: dict[int, dict[str, set[MixedSum]]] = {}
        for row in escalation_rows(table_id):
            arity = row.parent.arity + 1
            run = runs[arity]
            got = truant(row.parent, self.bound)
            yield _check(table_id, f"{row.case} truant {row.parent}", row.truant, got.truant)
            stray = row.candidates - run.candidates
            failed = {phi for phi in row.candidates & run.candidates if phi in run.failures}
            yield _check(table_id, f"{row.case} non-universal",
                         (_notations(row.non_universal), []),
                         (_notations(failed), _notations(stray)))
            acc = union.setdefault(arity, {"candidates": set(), "universal": set()})
            acc["candidates"] |= row.candidates
            acc["universal"] |= row.universal
        for arity, acc in sorted(union.items()):
            run = runs[arity]
            yield _check(table_id, f"arity {arity} candidates",
                         _notations(acc["candidates"]), _notations(run.candidates))
            yield _check(table_id, f"arity {arity} proper universal",
                         _notations(acc["universal"]), _notations(run.proper_universal))

    def table52(self) -> Iterator[RowCheck]:
        for case, phi, expected in exceptional_rows(self.bound):
            yield _check("5.2", f"{case} E({phi})", expected, exceptional_set(phi, self.bound))

    # -- forms --------------------------------------------------------------

    def _bad_sets(self, table_id: str, label: str, f: TernaryForm, g: TernaryForm,
                  d: int, bad: dict[str, list]) -> Iterator[RowCheck]:
        for a, vecs in bad.items():
            cert = good_partition(f, g, d, int(a))
            yield _check(table_id, f"{label} B(d={d}, a={a})",
                         sorted(residues(vecs, d)), sorted(cert.bad))

    def _witness(self, table_id: str, label: str, f: TernaryForm, g: TernaryForm,
                 d: int, bad: dict[str, list], T, eig) -> Iterator[RowCheck]:
        for a in bad:
            res = pme_check(f, g, d, int(a), T)
            yield _check(table_id, f"{label} pme a={a}", [], res.failures())
        got = sorted(primitive_eigenvectors(tuple(map(tuple, T))).eigenvectors)
        yield _check(table_id, f"{label} eigenvectors", sorted(map(tuple, eig)), got)

    def table43(self) -> Iterator[RowCheck]:
        for row in fixture("4.3").rows:
            f, g = TernaryForm.parse(row["f"]), TernaryForm.parse(row["g"])
            label = row["case"] + (f" [{row['variant']}]" if row.get("variant") else "")
            yield from self._bad_sets("4.3", label, f, g, row["d"], row["bad"])
            if "T" in row:
                yield from self._witness("4.3", label, f, g, row["d"], row["bad"],
                                         row["T"], row["eigenvectors"])

    def intext(self) -> Iterator[RowCheck]:
        rows = fixture("intext").rows
        for c in rows["certificates"]:
            f, g = TernaryForm.parse(c["f"]), TernaryForm.parse(c["g"])
            label = c["case"] + (f" [{c['variant']}]" if c.get("variant") else "")
            yield from self._bad_sets("intext", label, f, g, c["d"], c["bad"])
            yield from self._witness("intext", label, f, g, c["d"], c["bad"], c["T"],
                                     c["eigenvectors"])
            for a in c["bad"]:
                missed = pme_conclusion_counterexamples(f, g, c["d"], int(a), c["T"],
                                                        self.conclusion_bound)
                yield _check("intext", f"{label} conclusion a={a} <= {self.conclusion_bound}",
                             [], missed)
        for p in rows["prec"]:
            f, g = TernaryForm.parse(p["f"]), TernaryForm.parse(p["g"])
            for a in p["a"]:
                cert = good_partition(f, g, p["d"], a)
                yield _check("intext", f"{p['case']} [{p['variant']}] {g} <_{p['d']},{a} {f}",
                             [], sorted(cert.bad))
        for e in rows["eigenvectors"]:
            T = tuple(map(tuple, e["T"]))
            yield _check("intext", f"{e['case']} T/{e['d']} infinite order", True,
                         has_infinite_order(T, e["d"]))
            yield _check("intext", f"{e['case']} T eigenvectors",
                         sorted(map(tuple, e["eigenvectors"])),
                         sorted(primitive_eigenvectors(T).eigenvectors))
        yield _check("intext", f"weighted genus identity n <= {self.form_bound}", [],
                     siegel_identity_failures(self.form_bound))
        for s in rows["shapes"]:
            f = TernaryForm.parse(s["form"])
            have = set(represented_set(f, self.form_bound))
            missing = [n for n in range(self.form_bound + 1) if n not in have]
            expected = [n for n in range(1, self.form_bound + 1)
                        if _shape_member(n, s["prime"], s["parity"], s["modulus"], s["residues"])]
            yield _check("intext", f"{s['case']} complement of Q({f}) is {s['missing']}",
                         expected, missing)
        for r in rows["reduction"]:
            for text in r["sums"]:
                phi = MixedSum.parse(text)
                yield _check("intext", f"{r['case']} reduction {phi}", [],
                             reduction_failures(phi))


def verify_tables(tables: Iterable[str] = ALL_TABLES, **kwargs) -> list[RowCheck]:
    return Verifier(**kwargs).run(tables)
