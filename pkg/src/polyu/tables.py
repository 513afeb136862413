"""Embedded regression fixtures and helpers to expand their rows.

Fixtures live in ``polyu/data/*.json``.  Each file is an object with keys
``table_id``, ``title``, ``notes`` and ``rows``; the row schema depends on
the table and is described in the README.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Any, Iterator

from .forms import TernaryForm
from .polysum import MixedSum

FIXTURE_FILES = {
    "3.1": "table3.1.json",
    "4.1": "table4.1.json",
    "4.3": "table4.3.json",
    "5.1": "table5.1.json",
    "5.2": "table5.2.json",
    "eq3.1": "eq3.1.json",
    "critical19": "critical19.json",
    "intext": "intext.json",
}

ESCALATION_TABLES = ("3.1", "4.1", "5.1")


@dataclass(frozen=True)
class PaperFixture:
    table_id: str
    title: str
    rows: Any
    notes: str = ""

    def __len__(self) -> int:
        return len(self.rows)


@lru_cache(maxsize=None)
def _load(name: str) -> dict:
    text = resources.files("polyu").joinpath("data").joinpath(name).read_text(encoding="utf-8")
    return json.loads(text)


def fixture(table_id: str) -> PaperFixture:
    """The embedded copy of a table, returned verbatim."""
    try:
        name = FIXTURE_FILES[table_id]
    except KeyError:
        raise KeyError(f"unknown fixture {table_id!r}; known: {', '.join(FIXTURE_FILES)}") from None
    data = _load(name)
    return PaperFixture(data["table_id"], data["title"], data["rows"], data.get("notes", ""))


def expand_ranges(ranges: list[list[int]]) -> list[int]:
    return [c for lo, hi in ranges for c in range(lo, hi + 1)]


def _children(parent: MixedSum, ranges: dict) -> set[MixedSum]:
    return ({parent.with_square(c) for c in expand_ranges(ranges.get("squares", []))}
            | {parent.with_octagonal(c) for c in expand_ranges(ranges.get("octagonals", []))})


def _values(parent: MixedSum, ranges: dict) -> set[MixedSum]:
    return ({parent.with_square(c) for c in ranges.get("squares", [])}
            | {parent.with_octagonal(c) for c in ranges.get("octagonals", [])})


@dataclass(frozen=True)
class EscalationRow:
    """One row of an escalation table, expanded into explicit sums."""

    table_id: str
    case: str
    parent: MixedSum
    truant: int
    candidates: frozenset[MixedSum]
    considered_already: frozenset[MixedSum]
    universal: frozenset[MixedSum]
    non_universal: frozenset[MixedSum]


def escalation_rows(table_id: str) -> Iterator[EscalationRow]:
    """Rows of Table 3.1, 4.1 or 5.1 with ranges turned into sums.

    Table 3.1 lists its universal children; the later tables list the
    non-universal exceptions, so the other set is the complement within the
    candidate range.  A row's candidates exclude its own "considered
    already" sums.
    """
    if table_id not in ESCALATION_TABLES:
        raise KeyError(f"{table_id!r} is not an escalation table")
    for row in fixture(table_id).rows:
        parent = MixedSum.parse(row["parent"])
        seen = _children(parent, row["considered_already"])
        cands = _children(parent, row["candidates"]) - seen
        if "universal" in row:
            uni = _children(parent, row["universal"])
            bad = cands - uni
        else:
            bad = _values(parent, row["non_universal"])
            uni = cands - bad
        yield EscalationRow(table_id, row["case"], parent, row["truant"], frozenset(cands),
                            frozenset(seen), frozenset(uni), frozenset(bad))


def expand_closed_form(rule: dict, bound: int) -> list[int]:
    """Members of ``{r * 25**s - 5}`` up to ``bound``."""
    lo, hi = rule["r"]
    out = set()
    s = rule.get("s_min", 1)
    while lo * 25 ** s - 5 <= bound:
        out.update(r * 25 ** s - 5 for r in range(lo, hi + 1) if r * 25 ** s - 5 <= bound)
        s += 1
    return sorted(out)


def exceptional_rows(bound: int) -> Iterator[tuple[str, MixedSum, list[int]]]:
    """(case, sum, expected exceptional set up to ``bound``) for Table 5.2."""
    for row in fixture("5.2").rows:
        if "closed_form" in row:
            expected = expand_closed_form(row["closed_form"], bound)
        else:
            expected = [n for n in row["exceptional"] if n <= bound]
        yield row["case"], MixedSum.parse(row["sum"]), expected


def form(text: str) -> TernaryForm:
    return TernaryForm.parse(text)
