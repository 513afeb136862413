"""Naive reference implementations used only by the tests.

They share no code with the package: values come from direct formula
evaluation over generous argument ranges, and form enumeration uses an
eigenvalue box rather than the adjugate bounds.
"""

from itertools import product
from math import isqrt

import numpy as np


def p4(x):
    return x * x


def p8(x):
    return 3 * x * x - 2 * x


def naive_values(m, bound):
    f = p4 if m == 4 else p8
    r = isqrt(bound) + 2
    return sorted({f(x) for x in range(-r, r + 1) if f(x) <= bound})


def brute_represented(squares, octagonals, n):
    """Try every argument tuple in a box; exponential, keep it small."""
    r = isqrt(n) + 1
    rng = range(-r, r + 1)
    for xs in product(rng, repeat=len(squares)):
        s = sum(a * p4(x) for a, x in zip(squares, xs))
        if s > n:
            continue
        for ys in product(rng, repeat=len(octagonals)):
            if s + sum(b * p8(y) for b, y in zip(octagonals, ys)) == n:
                return True
    return False


def brute_missing(squares, octagonals, bound):
    """Positive integers up to bound missed, by sumset of naive value lists."""
    reach = {0}
    for c, m in [(a, 4) for a in squares] + [(b, 8) for b in octagonals]:
        vals = [c * v for v in naive_values(m, bound // c)]
        reach = {s + v for s in reach for v in vals if s + v <= bound}
    return [n for n in range(1, bound + 1) if n not in reach]


def brute_rep_count(gram, n):
    """Triple loop over the box |v_i| <= sqrt(n / lambda_min)."""
    M = np.array(gram, dtype=float)
    lam = np.linalg.eigvalsh(M).min()
    r = int((n / lam) ** 0.5) + 1
    G = [list(map(int, row)) for row in gram]
    count = 0
    for v in product(range(-r, r + 1), repeat=3):
        if sum(v[i] * G[i][j] * v[j] for i in range(3) for j in range(3)) == n:
            count += 1
    return count
