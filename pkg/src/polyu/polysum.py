"""Mixed sums of generalized 4- and 8-gonal numbers.

A mixed sum ``[[a_1..a_u, b_1..b_v]]`` stands for

    a_1 P4(x_1) + ... + a_u P4(x_u) + b_1 P8(y_1) + ... + b_v P8(y_v)

with ``P4(x) = x^2`` and ``P8(y) = 3y^2 - 2y`` over all integers.  The textual
notation used throughout the package is ``"a_1,...,a_u|b_1,...,b_v"``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

#: integers whose representation decides universality
CRITICAL_INTEGERS: tuple[int, ...] = (
    1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 14, 15, 18, 20, 30, 60, 61)

#: contractual ceiling for coefficients and targets
MAX_VALUE = 2 ** 63

SQUARE = 4
OCTAGONAL = 8


class IndeterminateError(RuntimeError):
    """Bounded scan and the 19-integer criterion disagree."""


# --------------------------------------------------------------------------
# polygonal numbers


def polygonal_value(m: int, x: int) -> int:
    """Return the generalized m-gonal number ``((m-2)x^2 - (m-4)x) / 2``."""
    if m not in (SQUARE, OCTAGONAL):
        raise ValueError(f"only m in (4, 8) are supported, got m={m}")
    return ((m - 2) * x * x - (m - 4) * x) // 2


def _arguments_by_size(m: int):
    """Yield ``(x, P_m(x))`` in the order 0, 1, -1, 2, -2, ...

    The values are non-decreasing in |x| for both supported m, so callers
    may stop at the first |x| whose smaller value exceeds a bound.
    """
    yield 0, 0
    x = 1
    while True:
        yield x, polygonal_value(m, x)
        yield -x, polygonal_value(m, -x)
        x += 1


def polygonal_values_up_to(m: int, bound: int) -> list[int]:
    """All generalized m-gonal numbers in ``[0, bound]``, ascending."""
    if m not in (SQUARE, OCTAGONAL):
        raise ValueError(f"only m in (4, 8) are supported, got m={m}")
    if bound < 0:
        return []
    out = set()
    x = 0
    # P_m(x) <= P_m(-x) for x >= 0 and both are increasing in x
    while polygonal_value(m, x) <= bound:
        out.add(polygonal_value(m, x))
        if polygonal_value(m, -x) <= bound:
            out.add(polygonal_value(m, -x))
        x += 1
    return sorted(out)


# --------------------------------------------------------------------------
# MixedSum


def _check_coefficients(values: Iterable[int], what: str) -> tuple[int, ...]:
    out = []
    for c in values:
        if isinstance(c, bool) or not isinstance(c, int):
            raise TypeError(f"{what} coefficient {c!r} is not an integer")
        if c < 1 or c > MAX_VALUE:
            raise ValueError(f"{what} coefficient {c} out of range [1, 2^63]")
        out.append(c)
    return tuple(sorted(out))


@dataclass(frozen=True, order=True)
class MixedSum:
    """Canonical mixed sum: sorted square and octagonal coefficient tuples."""

    squares: tuple[int, ...] = ()
    octagonals: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "squares",
                           _check_coefficients(self.squares, "square"))
        object.__setattr__(self, "octagonals",
                           _check_coefficients(self.octagonals, "octagonal"))

    @classmethod
    def parse(cls, text: str) -> "MixedSum":
        """Parse ``"1,2,5|5,5"``; either side may be empty."""
        if text.count("|") != 1:
            raise ValueError(f"expected exactly one '|' in {text!r}")
        left, right = text.split("|")

        def ints(part: str) -> list[int]:
            part = part.strip()
            if not part:
                return []
            try:
                return [int(tok) for tok in part.split(",")]
            except ValueError:
                raise ValueError(f"bad coefficient list {part!r}") from None

        return cls(tuple(ints(left)), tuple(ints(right)))

    @classmethod
    def from_json(cls, data: dict) -> "MixedSum":
        return cls(tuple(data.get("squares", ())),
                   tuple(data.get("octagonals", ())))

    @property
    def arity(self) -> int:
        return len(self.squares) + len(self.octagonals)

    @property
    def notation(self) -> str:
        return (",".join(map(str, self.squares)) + "|"
                + ",".join(map(str, self.octagonals)))

    def terms(self) -> tuple[tuple[int, int], ...]:
        """``(m, coefficient)`` pairs, squares first."""
        return (tuple((SQUARE, c) for c in self.squares)
                + tuple((OCTAGONAL, c) for c in self.octagonals))

    def to_json(self) -> dict:
        return {"squares": list(self.squares),
                "octagonals": list(self.octagonals)}

    def with_square(self, c: int) -> "MixedSum":
        return MixedSum(self.squares + (c,), self.octagonals)

    def with_octagonal(self, c: int) -> "MixedSum":
        return MixedSum(self.squares, self.octagonals + (c,))

    def leave_one_out(self) -> list["MixedSum"]:
        """Distinct subsums obtained by dropping a single term."""
        subs = set()
        for i in range(len(self.squares)):
            subs.add(MixedSum(self.squares[:i] + self.squares[i + 1:],
                              self.octagonals))
        for j in range(len(self.octagonals)):
            subs.add(MixedSum(self.squares,
                              self.octagonals[:j] + self.octagonals[j + 1:]))
        return sorted(subs)

    def is_subsum_of(self, other: "MixedSum") -> bool:
        return (_submultiset(self.squares, other.squares)
                and _submultiset(self.octagonals, other.octagonals))

    def evaluate(self, xs: Sequence[int], ys: Sequence[int]) -> int:
        if len(xs) != len(self.squares) or len(ys) != len(self.octagonals):
            raise ValueError("argument count does not match the sum")
        return (sum(a * polygonal_value(SQUARE, x)
                    for a, x in zip(self.squares, xs))
                + sum(b * polygonal_value(OCTAGONAL, y)
                      for b, y in zip(self.octagonals, ys)))

    def __str__(self) -> str:
        return self.notation


def _submultiset(small: Sequence[int], big: Sequence[int]) -> bool:
    rest = list(big)
    for c in small:
        if c not in rest:
            return False
        rest.remove(c)
    return True


# --------------------------------------------------------------------------
# exact representation decision


class _Decider:
    """Depth-first representation search with a shared failure cache.

    Terms are processed by descending coefficient; candidate values of each
    term are tried from the largest down.  ``(term index, remainder)`` pairs
    proven unreachable are remembered; the cache only ever gains entries, so
    concurrent use from several threads is harmless.
    """

    def __init__(self, terms: Sequence[tuple[int, int]]) -> None:
        self.terms = tuple(sorted(terms, key=lambda t: (-t[1], t[0])))
        self._failed: set[tuple[int, int]] = set()
        self._values: dict[tuple[int, int], list[int]] = {}
        self._value_sets: dict[tuple[int, int], set[int]] = {}
        self._limit: dict[tuple[int, int], int] = {}

    def _ensure(self, term: tuple[int, int], n: int) -> None:
        if self._limit.get(term, -1) >= n:
            return
        m, c = term
        limit = max(n, 2 * self._limit.get(term, 0), 64)
        vals = [c * v for v in polygonal_values_up_to(m, limit // c)]
        self._values[term] = vals
        self._value_sets[term] = set(vals)
        self._limit[term] = limit

    def decide(self, n: int) -> bool:
        if n < 0:
            return False
        for term in self.terms:
            self._ensure(term, n)
        return self._search(0, n)

    def _search(self, i: int, rem: int) -> bool:
        terms = self.terms
        if i == len(terms):
            return rem == 0
        if rem == 0:
            return True
        if i == len(terms) - 1:
            return rem in self._value_sets[terms[i]]
        key = (i, rem)
        if key in self._failed:
            return False
        vals = self._values[terms[i]]
        hi = _bisect_right(vals, rem)
        for k in range(hi - 1, -1, -1):
            if self._search(i + 1, rem - vals[k]):
                return True
        self._failed.add(key)
        return False


def _bisect_right(vals: list[int], x: int) -> int:
    lo, hi = 0, len(vals)
    while lo < hi:
        mid = (lo + hi) // 2
        if vals[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    return lo


@lru_cache(maxsize=4096)
def _decider(terms: tuple[tuple[int, int], ...]) -> _Decider:
    return _Decider(terms)


def _check_target(n: int) -> None:
    if n > MAX_VALUE:
        raise ValueError(f"target {n} exceeds 2^63")


def is_represented(phi: MixedSum, n: int) -> bool:
    """True iff ``phi = n`` has an integer solution."""
    _check_target(n)
    if n < 0:
        return False
    if phi.arity == 0:
        return n == 0
    return _decider(tuple(sorted(phi.terms()))).decide(n)


def find_witness(phi: MixedSum, n: int) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Smallest solution ``(xs, ys)`` of ``phi = n``, or None.

    Solutions are ordered lexicographically by ``(|z|, z < 0)`` over the
    concatenated arguments, square part first; square arguments are taken
    non-negative.
    """
    _check_target(n)
    if not is_represented(phi, n):
        return None
    terms = phi.terms()
    suffix = [_decider(tuple(sorted(terms[i:]))) if i < len(terms) else None
              for i in range(len(terms) + 1)]

    def feasible(i: int, rem: int) -> bool:
        if i == len(terms):
            return rem == 0
        return suffix[i].decide(rem)

    args: list[int] = []
    rem = n
    for i, (m, c) in enumerate(terms):
        for x, val in _arguments_by_size(m):
            if m == SQUARE and x < 0:
                continue
            if m == SQUARE and c * val > rem:
                break
            if m == OCTAGONAL and c * polygonal_value(m, abs(x)) > rem:
                break
            if c * val <= rem and feasible(i + 1, rem - c * val):
                args.append(x)
                rem -= c * val
                break
        else:  # pragma: no cover - guarded by is_represented
            return None
    u = len(phi.squares)
    return tuple(args[:u]), tuple(args[u:])


# --------------------------------------------------------------------------
# bounded scans


def represented_mask(phi: MixedSum, bound: int) -> int:
    """Bit n of the result is set iff ``phi`` represents n, for n <= bound.

    Built as an iterated sumset over Python integers used as bitsets.
    """
    if bound < 0:
        return 0
    full = (1 << (bound + 1)) - 1
    cur = 1
    for m, c in phi.terms():
        nxt = 0
        for v in polygonal_values_up_to(m, bound // c):
            nxt |= cur << (c * v)
        cur = nxt & full
        if cur == full:
            break
    return cur


def unrepresented_upto(phi: MixedSum, bound: int) -> list[int]:
    missing = ~represented_mask(phi, bound) & ((1 << (bound + 1)) - 1)
    out = []
    while missing:
        low = missing & -missing
        out.append(low.bit_length() - 1)
        missing ^= low
    return out


def exceptional_set(phi: MixedSum, bound: int) -> list[int]:
    """Positive integers up to ``bound`` that ``phi`` misses."""
    return [n for n in unrepresented_upto(phi, bound) if n >= 1]


def criterion_universal(phi: MixedSum) -> bool:
    """Whether ``phi`` represents all nineteen critical integers."""
    return all(is_represented(phi, n) for n in CRITICAL_INTEGERS)


class Verdict(str, enum.Enum):
    UNIVERSAL = "Universal"
    NON_UNIVERSAL = "NonUniversal"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class TruantReport:
    verdict: Verdict
    truant: int | None
    searched_bound: int
    criterion_passed: bool

    def __post_init__(self) -> None:
        if (self.verdict is Verdict.NON_UNIVERSAL) != (self.truant is not None):
            raise ValueError("a truant is present exactly for NonUniversal")

    @property
    def universal(self) -> bool:
        return self.verdict is Verdict.UNIVERSAL

    def to_json(self) -> dict:
        return {"verdict": self.verdict.value, "truant": self.truant,
                "searched_bound": self.searched_bound,
                "criterion_passed": self.criterion_passed}


def truant(phi: MixedSum, bound: int) -> TruantReport:
    """Least positive integer missed by ``phi`` within ``[1, bound]``.

    If nothing up to ``bound`` is missed the verdict is Universal when the
    19-integer criterion agrees and Indeterminate otherwise.
    """
    if bound < 61:
        raise ValueError("bound must be at least 61")
    missing = ~represented_mask(phi, bound) & ((1 << (bound + 1)) - 2)
    if missing:
        t = (missing & -missing).bit_length() - 1
        return TruantReport(Verdict.NON_UNIVERSAL, t, bound,
                            criterion_universal(phi))
    passed = criterion_universal(phi)
    verdict = Verdict.UNIVERSAL if passed else Verdict.INDETERMINATE
    return TruantReport(verdict, None, bound, passed)


# --------------------------------------------------------------------------
# the congruence-condition reformulation


def core_equation_solvable(squares: Sequence[int], octagonals: Sequence[int],
                           target: int) -> bool:
    """Is ``3*sum(a x^2) + sum(b y^2) = target`` solvable with no y_j divisible by 3?"""
    if target < 0:
        return False
    terms = [(3 * a, False) for a in squares] + [(b, True) for b in octagonals]
    terms.sort(key=lambda t: -t[0])

    @lru_cache(maxsize=None)
    def go(i: int, rem: int) -> bool:
        if i == len(terms):
            return rem == 0
        c, coprime_to_3 = terms[i]
        y = 0
        while c * y * y <= rem:
            if not (coprime_to_3 and y % 3 == 0) and go(i + 1, rem - c * y * y):
                return True
            y += 1
        return False

    return go(0, target)


def core_equation_represents(phi: MixedSum, n: int) -> bool:
    """Decide ``phi = n`` through ``3N + sum(b) = 3 sum(a x^2) + sum(b y^2)``."""
    return core_equation_solvable(phi.squares, phi.octagonals,
                                  3 * n + sum(phi.octagonals))


@dataclass(frozen=True)
class ReductionPlan:
    """Small residues that must be checked before assuming ``4 ∤ 3N + sum(b)``."""

    beta_sum: int
    E: tuple[int, ...]
    nu: dict[int, int] = field(hash=False)

    def target(self, n: int) -> int:
        return 4 ** self.nu[n] * n


def reduction_plan(betas: Sequence[int]) -> ReductionPlan:
    if not betas:
        raise ValueError("reduction plan needs at least one octagonal term")
    s = sum(betas)
    E = tuple(n for n in range(1, s) if (n - s) % 3 == 0)
    nu = {}
    for n in E:
        k = 1
        while 4 ** k * n < s:
            k += 1
        nu[n] = k
    return ReductionPlan(s, E, nu)


def reduction_failures(phi: MixedSum, bound: int | None = None) -> list[int]:
    """Members n of E for which the scaled core equation has no solution.

    ``bound`` caps the search target ``4**nu(n) * n``; exceeding it is an error.
    """
    if not phi.octagonals:
        raise ValueError("reduction check needs at least one octagonal term")
    plan = reduction_plan(phi.octagonals)
    if bound is not None and plan.E and max(map(plan.target, plan.E)) > bound:
        raise ValueError(f"reduction targets of {phi} exceed bound {bound}")
    return [n for n in plan.E
            if not core_equation_solvable(phi.squares, phi.octagonals,
                                          plan.target(n))]


def reduction_check(phi: MixedSum, bound: int | None = None) -> bool:
    return not reduction_failures(phi, bound)
