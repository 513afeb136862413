"""Positive definite ternary quadratic forms and congruence certificates.

Vectors are rows; a form with Gram matrix M takes the value ``v M v^t``.  For
forms f, g and a modulus d, a transformation is an integral 3x3 matrix T with
``T^t M_f T = d^2 M_g``; a residue vector v (mod d) on which g takes the value
a (mod d) is *good* when some transformation carries it into the integers,
i.e. ``T v^t = 0 (mod d)``.  Whenever every such v is good, every integer
``n = a (mod d)`` represented by g is also represented by f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

import numpy as np

Vector = tuple[int, int, int]
Matrix = tuple[Vector, Vector, Vector]


def _as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    if len(rows) != 3 or any(len(r) != 3 for r in rows):
        raise ValueError("expected a 3x3 matrix")
    return tuple(tuple(int(x) for x in r) for r in rows)  # type: ignore[return-value]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(3))
                       for j in range(3)) for i in range(3))  # type: ignore[return-value]


def transpose(a: Matrix) -> Matrix:
    return tuple(tuple(a[j][i] for j in range(3)) for i in range(3))  # type: ignore[return-value]


def det3(a: Sequence[Sequence[int]]) -> int:
    return (a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]))


def _adjugate(a: Matrix) -> Matrix:
    c = [[0] * 3 for _ in range(3)]
    for i in range(3):
        for j in range(3):
            rows = [r for r in range(3) if r != i]
            cols = [k for k in range(3) if k != j]
            minor = (a[rows[0]][cols[0]] * a[rows[1]][cols[1]]
                     - a[rows[0]][cols[1]] * a[rows[1]][cols[0]])
            c[j][i] = (-1) ** (i + j) * minor
    return _as_matrix(c)


@dataclass(frozen=True)
class TernaryForm:
    """Positive definite integral ternary form given by its Gram matrix."""

    gram: Matrix

    def __post_init__(self) -> None:
        g = _as_matrix(self.gram)
        object.__setattr__(self, "gram", g)
        if any(g[i][j] != g[j][i] for i in range(3) for j in range(3)):
            raise ValueError(f"Gram matrix {g} is not symmetric")
        m1 = g[0][0]
        m2 = g[0][0] * g[1][1] - g[0][1] ** 2
        if m1 <= 0 or m2 <= 0 or det3(g) <= 0:
            raise ValueError(f"Gram matrix {g} is not positive definite")

    @classmethod
    def diagonal(cls, a: int, b: int, c: int) -> "TernaryForm":
        return cls(((a, 0, 0), (0, b, 0), (0, 0, c)))

    @classmethod
    def block(cls, binary: Sequence[Sequence[int]], c: int) -> "TernaryForm":
        """``binary ⊥ <c>``."""
        (p, q), (r, s) = binary
        return cls(((p, q, 0), (r, s, 0), (0, 0, c)))

    @classmethod
    def parse(cls, text: str) -> "TernaryForm":
        """Parse ``"diag:1,3,3"`` or ``"gram:4,1,0;1,7,0;0,0,27"``."""
        kind, _, body = text.partition(":")
        kind = kind.strip().lower()
        try:
            if kind == "diag":
                a, b, c = (int(t) for t in body.split(","))
                return cls.diagonal(a, b, c)
            if kind == "gram":
                rows = [[int(t) for t in row.split(",")]
                        for row in body.split(";")]
                return cls(_as_matrix(rows))
        except ValueError as exc:
            raise ValueError(f"cannot parse form {text!r}: {exc}") from None
        raise ValueError(f"form must start with 'diag:' or 'gram:', got {text!r}")

    @property
    def is_diagonal(self) -> bool:
        g = self.gram
        return all(g[i][j] == 0 for i in range(3) for j in range(3) if i != j)

    @property
    def notation(self) -> str:
        g = self.gram
        if self.is_diagonal:
            return f"diag:{g[0][0]},{g[1][1]},{g[2][2]}"
        return "gram:" + ";".join(",".join(map(str, r)) for r in g)

    @property
    def determinant(self) -> int:
        return det3(self.gram)

    def __call__(self, v: Sequence[int]) -> int:
        return eval_form(self, v)

    def bilinear(self, v: Sequence[int], w: Sequence[int]) -> int:
        g = self.gram
        return sum(v[i] * g[i][j] * w[j] for i in range(3) for j in range(3))

    def to_json(self) -> dict:
        return {"notation": self.notation, "gram": [list(r) for r in self.gram]}

    def __str__(self) -> str:
        return self.notation


def eval_form(f: TernaryForm, v: Sequence[int]) -> int:
    """``v M_f v^t``."""
    return f.bilinear(v, v)


# --------------------------------------------------------------------------
# enumeration


def _coordinate_bounds(f: TernaryForm, n: int) -> tuple[int, int]:
    """Box bounds for x_1 and x_2 on the ellipsoid ``f(v) <= n``.

    ``x_i^2 <= n (M^-1)_ii``; with integers this is ``x_i^2 det <= n adj_ii``.
    """
    adj = _adjugate(f.gram)
    det = f.determinant
    return (math.isqrt(n * adj[0][0] // det), math.isqrt(n * adj[1][1] // det))


def short_vectors(f: TernaryForm, n: int) -> list[Vector]:
    """All integer vectors v with ``f(v) = n``, sorted."""
    if n < 0:
        return []
    if n == 0:
        return [(0, 0, 0)]
    g = f.gram
    c = g[2][2]
    b1, b2 = 2 * g[0][2], 2 * g[1][2]
    bx, by = _coordinate_bounds(f, n)
    out = []
    for x in range(-bx, bx + 1):
        for y in range(-by, by + 1):
            # c z^2 + b z + a0 = n
            b = b1 * x + b2 * y
            a0 = g[0][0] * x * x + 2 * g[0][1] * x * y + g[1][1] * y * y
            disc = b * b - 4 * c * (a0 - n)
            if disc < 0:
                continue
            r = math.isqrt(disc)
            if r * r != disc:
                continue
            for num in {-b + r, -b - r}:
                if num % (2 * c) == 0:
                    out.append((x, y, num // (2 * c)))
    return sorted(out)


def rep_count(n: int, f: TernaryForm) -> int:
    """Number of integer vectors v with ``f(v) = n``."""
    return len(short_vectors(f, n))


def theta_series(f: TernaryForm, bound: int) -> np.ndarray:
    """Counts ``r(n, f)`` for ``0 <= n <= bound`` as an int64 array."""
    counts = np.zeros(bound + 1, dtype=np.int64)
    g = f.gram
    c = g[2][2]
    b1, b2 = 2 * g[0][2], 2 * g[1][2]
    bx, by = _coordinate_bounds(f, bound)
    for x in range(-bx, bx + 1):
        for y in range(-by, by + 1):
            b = b1 * x + b2 * y
            a0 = g[0][0] * x * x + 2 * g[0][1] * x * y + g[1][1] * y * y
            disc = b * b - 4 * c * (a0 - bound)
            if disc < 0:
                continue
            r = math.isqrt(disc)
            lo = -((b + r) // (2 * c)) - 1
            hi = (r - b) // (2 * c) + 1
            z = np.arange(lo, hi + 1, dtype=np.int64)
            vals = c * z * z + b * z + a0
            vals = vals[(vals >= 0) & (vals <= bound)]
            np.add.at(counts, vals, 1)
    return counts


@lru_cache(maxsize=256)
def _theta_cached(f: TernaryForm, bound: int) -> np.ndarray:
    arr = theta_series(f, bound)
    arr.setflags(write=False)
    return arr


def represented_set(f: TernaryForm, bound: int) -> list[int]:
    """``{n <= bound : r(n, f) > 0}``, including 0."""
    return [int(n) for n in np.flatnonzero(_theta_cached(f, bound))]


def represented_mask(f: TernaryForm, bound: int) -> np.ndarray:
    return _theta_cached(f, bound) > 0


# --------------------------------------------------------------------------
# congruence machinery


def congruence_classes(g: TernaryForm, d: int, a: int) -> frozenset[Vector]:
    """Residue vectors v in ``(Z/dZ)^3`` with ``g(v) = a (mod d)``."""
    if d < 1:
        raise ValueError("modulus must be positive")
    a %= d
    return frozenset(v for v in product(range(d), repeat=3)
                     if eval_form(g, v) % d == a)


def transformation_set(f: TernaryForm, g: TernaryForm, d: int) -> list[Matrix]:
    """All integral T with ``T^t M_f T = d^2 M_g``, sorted.

    Column j of T is an f-vector of length ``d^2 g_jj``; columns are matched
    pairwise on the off-diagonal inner products.
    """
    if d < 1:
        raise ValueError("modulus must be positive")
    d2 = d * d
    gg = g.gram
    cols = [np.array(short_vectors(f, d2 * gg[j][j]), dtype=np.int64).reshape(-1, 3)
            for j in range(3)]
    if any(len(c) == 0 for c in cols):
        return []
    M = np.array(f.gram, dtype=np.int64)

    def pairing(i: int, j: int) -> np.ndarray:
        return (cols[i] @ M @ cols[j].T) == d2 * gg[i][j]

    p01, p02, p12 = pairing(0, 1), pairing(0, 2), pairing(1, 2)
    out = []
    for i, j in zip(*np.nonzero(p01)):
        for k in np.flatnonzero(p02[i] & p12[j]):
            c0, c1, c2 = cols[0][i], cols[1][j], cols[2][k]
            out.append(tuple(tuple(int(col[r]) for col in (c0, c1, c2))
                             for r in range(3)))
    return sorted(out)


def is_transformation(f: TernaryForm, g: TernaryForm, d: int, T: Matrix) -> bool:
    lhs = matmul(matmul(transpose(T), f.gram), T)
    return all(lhs[i][j] == d * d * g.gram[i][j]
               for i in range(3) for j in range(3))


def carries_to_lattice(T: Matrix, v: Sequence[int], d: int) -> bool:
    """Whether ``(1/d) v T^t`` is integral."""
    return all(sum(T[i][k] * v[k] for k in range(3)) % d == 0 for i in range(3))


def negate(v: Sequence[int], d: int) -> Vector:
    return tuple((-x) % d for x in v)  # type: ignore[return-value]


@dataclass(frozen=True)
class CongruenceCertificate:
    f: TernaryForm
    g: TernaryForm
    d: int
    a: int
    R: frozenset[Vector]
    good: frozenset[Vector]
    bad: frozenset[Vector]
    transformations: int = 0
    witness: Matrix | None = None
    eigenvectors: tuple[Vector, ...] = field(default=())

    def bad_signed(self) -> list[Vector]:
        """Bad residues written with representatives in ``(-d/2, d/2]``."""
        return sorted(symmetric_residue(v, self.d) for v in self.bad)

    def to_json(self) -> dict:
        data = {
            "f": self.f.to_json(), "g": self.g.to_json(),
            "d": self.d, "a": self.a,
            "R_size": len(self.R), "good_size": len(self.good),
            "bad": [list(v) for v in self.bad_signed()],
            "transformations": self.transformations,
        }
        if self.witness is not None:
            data["witness"] = [list(r) for r in self.witness]
            data["eigenvectors"] = [list(v) for v in self.eigenvectors]
        return data


def symmetric_residue(v: Sequence[int], d: int) -> Vector:
    out = []
    for x in v:
        x %= d
        if 2 * x > d:
            x -= d
        out.append(x)
    return tuple(out)  # type: ignore[return-value]


def good_partition(f: TernaryForm, g: TernaryForm, d: int, a: int) -> CongruenceCertificate:
    """Split ``R(g, d, a)`` into vectors transported by some T and the rest."""
    R = congruence_classes(g, d, a)
    Ts = transformation_set(f, g, d)
    if not R:
        return CongruenceCertificate(f, g, d, a % d, R, R, frozenset(), len(Ts))
    order = sorted(R)
    V = np.array(order, dtype=np.int64)
    hit = np.zeros(len(order), dtype=bool)
    for T in Ts:
        hit |= np.all((V @ np.array(T, dtype=np.int64).T) % d == 0, axis=1)
        if hit.all():
            break
    good = frozenset(v for v, h in zip(order, hit) if h)
    return CongruenceCertificate(f, g, d, a % d, R, good, R - good, len(Ts))


def prec_check(f: TernaryForm, g: TernaryForm, d: int, a: int,
               verify_bound: int | None = None) -> bool:
    """True iff every vector of ``R(g, d, a)`` is good.

    With ``verify_bound`` the consequence (every n = a mod d represented by g
    is represented by f) is re-checked by enumeration up to that bound; a
    violation raises ``AssertionError``.
    """
    cert = good_partition(f, g, d, a)
    ok = not cert.bad
    if ok and verify_bound is not None:
        missing = progression_counterexamples(f, g, d, a, verify_bound)
        if missing:
            raise AssertionError(
                f"{g} <_{d},{a} {f} but {missing[0]} is represented by g only")
    return ok


def progression_counterexamples(f: TernaryForm, g: TernaryForm, d: int, a: int,
                                bound: int, excluded: Iterable[int] = ()) -> list[int]:
    """n <= bound, n = a (mod d), represented by g but not f, outside ``excluded``."""
    qf = represented_mask(f, bound)
    qg = represented_mask(g, bound)
    skip = set(excluded)
    return [n for n in range(a % d, bound + 1, d)
            if qg[n] and not qf[n] and n not in skip]


# --------------------------------------------------------------------------
# transformations of infinite order


def char_poly(T: Matrix) -> tuple[int, int, int, int]:
    """Coefficients of ``det(xI - T) = x^3 + c2 x^2 + c1 x + c0``."""
    tr = T[0][0] + T[1][1] + T[2][2]
    m2 = sum(T[i][i] * T[j][j] - T[i][j] * T[j][i]
             for i in range(3) for j in range(i + 1, 3))
    return 1, -tr, m2, -det3(T)


def integer_eigenvalues(T: Matrix) -> list[int]:
    _, c2, c1, c0 = char_poly(T)

    def p(x: int) -> int:
        return x ** 3 + c2 * x * x + c1 * x + c0

    if c0 == 0:
        candidates = {0}
        # remaining quadratic x^2 + c2 x + c1
        disc = c2 * c2 - 4 * c1
        if disc >= 0 and math.isqrt(disc) ** 2 == disc:
            r = math.isqrt(disc)
            candidates |= {(-c2 + r) // 2, (-c2 - r) // 2}
    else:
        candidates = set()
        for k in range(1, math.isqrt(abs(c0)) + 1):
            if c0 % k == 0:
                candidates |= {k, -k, c0 // k, -(c0 // k)}
    return sorted(x for x in candidates if p(x) == 0)


def rational_kernel(A: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    """Basis of the right kernel of A over Q, by exact row reduction."""
    rows = [[Fraction(x) for x in r] for r in A]
    n = len(rows[0])
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        lead = rows[r][c]
        rows[r] = [x / lead for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                k = rows[i][c]
                rows[i] = [x - k * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        v = [Fraction(0)] * n
        v[free] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -rows[i][free]
        basis.append(v)
    return basis


def primitive(v: Sequence[Fraction]) -> Vector:
    """Integral primitive multiple of v with positive leading entry."""
    den = math.lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = math.gcd(*ints)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)  # type: ignore[return-value]


@dataclass(frozen=True)
class Eigendata:
    eigenvectors: tuple[Vector, ...]
    degenerate: tuple[int, ...]


def primitive_eigenvectors(T: Matrix) -> Eigendata:
    """Sign-paired primitive integral eigenvectors of one-dimensional eigenspaces.

    Eigenvalues whose eigenspace has dimension two or more are reported in
    ``degenerate``: such spaces hold infinitely many primitive vectors.
    """
    vecs: list[Vector] = []
    degenerate = []
    for lam in integer_eigenvalues(T):
        A = [[T[i][j] - (lam if i == j else 0) for j in range(3)] for i in range(3)]
        basis = rational_kernel(A)
        if len(basis) == 1:
            z = primitive(basis[0])
            vecs += [z, tuple(-x for x in z)]  # type: ignore[list-item]
        elif len(basis) > 1:
            degenerate.append(lam)
    return Eigendata(tuple(sorted(vecs)), tuple(degenerate))


#: finite-order rational 3x3 matrices have order 1, 2, 3, 4 or 6
MAX_FINITE_ORDER = 24


def has_infinite_order(T: Matrix, d: int) -> bool:
    """Whether ``T / d`` has infinite order, tested on powers 1..24."""
    scaled_identity = d
    P = T
    for _ in range(MAX_FINITE_ORDER):
        if all(P[i][j] == (scaled_identity if i == j else 0)
               for i in range(3) for j in range(3)):
            return False
        P = matmul(P, T)
        scaled_identity *= d
    return True


@dataclass(frozen=True)
class PmeResult:
    infinite_order: bool
    isometry: bool
    bad_transported: bool
    bad: frozenset[Vector]
    eigenvectors: tuple[Vector, ...]
    degenerate_eigenvalues: tuple[int, ...]

    @property
    def verdict(self) -> bool:
        return self.infinite_order and self.isometry and self.bad_transported

    def failures(self) -> list[str]:
        out = []
        if not self.infinite_order:
            out.append("(i) T/d has finite order")
        if not self.isometry:
            out.append("(ii) T^t M_g T != d^2 M_g")
        if not self.bad_transported:
            out.append("(iii) some bad residue is not carried into Z^3")
        return out

    def __bool__(self) -> bool:
        return self.verdict


def pme_check(f: TernaryForm, g: TernaryForm, d: int, a: int, T: Matrix) -> PmeResult:
    """Check the three hypotheses that let T transport the bad residues."""
    T = _as_matrix(T)
    bad = good_partition(f, g, d, a).bad
    eig = primitive_eigenvectors(T)
    return PmeResult(
        infinite_order=has_infinite_order(T, d),
        isometry=is_transformation(g, g, d, T),
        bad_transported=all(carries_to_lattice(T, v, d) for v in bad),
        bad=bad,
        eigenvectors=eig.eigenvectors,
        degenerate_eigenvalues=eig.degenerate,
    )


def pme_exclusions(g: TernaryForm, T: Matrix, bound: int) -> set[int]:
    """``{g(z) s^2}`` up to ``bound`` over the primitive eigenvectors z of T."""
    out = set()
    for z in primitive_eigenvectors(_as_matrix(T)).eigenvectors:
        gz = eval_form(g, z)
        s = 0
        while gz * s * s <= bound:
            out.add(gz * s * s)
            s += 1
    return out


def pme_conclusion_counterexamples(f: TernaryForm, g: TernaryForm, d: int, a: int,
                                   T: Matrix, bound: int) -> list[int]:
    return progression_counterexamples(f, g, d, a, bound,
                                       excluded=pme_exclusions(g, T, bound))


def pme_conclusion_check(f: TernaryForm, g: TernaryForm, d: int, a: int,
                         T: Matrix, bound: int) -> bool:
    """Every n <= bound, n = a (mod d), in Q(g) but outside ``{g(z) s^2}`` lies in Q(f)."""
    return not pme_conclusion_counterexamples(f, g, d, a, T, bound)


# --------------------------------------------------------------------------
# the weighted genus identity for <1,27,27>

SIEGEL_FORMS = {
    "big": TernaryForm.diagonal(1, 3, 3),
    "g": TernaryForm.diagonal(1, 27, 27),
    "M2": TernaryForm(((4, 1, 0), (1, 7, 0), (0, 0, 27))),
    "M3": TernaryForm(((7, -3, 2), (-3, 9, 3), (2, 3, 16))),
}


def siegel_identity_failures(bound: int) -> list[int]:
    """n = 1 (mod 3), n <= bound, with r(n,<1,3,3>) - r(n,<1,27,27>) != 4 r(n,M2) + 4 r(n,M3)."""
    th = {k: _theta_cached(f, bound) for k, f in SIEGEL_FORMS.items()}
    lhs = th["big"] - th["g"]
    rhs = 4 * th["M2"] + 4 * th["M3"]
    idx = np.arange(1, bound + 1, 3)
    return [int(n) for n in idx[lhs[idx] != rhs[idx]]]


def siegel_identity_check(bound: int) -> bool:
    return not siegel_identity_failures(bound)
