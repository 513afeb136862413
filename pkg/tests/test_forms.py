from itertools import permutations, product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_rep_count
from polyu.forms import (
    SIEGEL_FORMS,
    TernaryForm,
    carries_to_lattice,
    congruence_classes,
    eval_form,
    good_partition,
    has_infinite_order,
    integer_eigenvalues,
    matmul,
    pme_check,
    pme_conclusion_check,
    prec_check,
    primitive_eigenvectors,
    rep_count,
    represented_set,
    short_vectors,
    siegel_identity_check,
    siegel_identity_failures,
    theta_series,
    transformation_set,
    transpose,
)

D133 = TernaryForm.diagonal(1, 3, 3)
G = TernaryForm.diagonal(1, 27, 27)
M2 = TernaryForm(((4, 1, 0), (1, 7, 0), (0, 0, 27)))
M3 = TernaryForm(((7, -3, 2), (-3, 9, 3), (2, 3, 16)))
T_415 = ((5, 0, 0), (0, 4, -3), (0, 3, 4))

SAMPLE = [
    TernaryForm.diagonal(1, 1, 1), D133, M2, M3,
    TernaryForm(((2, 1, 0), (1, 3, 1), (0, 1, 4))),
    TernaryForm(((5, -2, 2), (-2, 8, 1), (2, 1, 8))),
]


def test_parse_and_validation():
    assert TernaryForm.parse("diag:1,3,3") == D133
    assert TernaryForm.parse("gram:4,1,0;1,7,0;0,0,27") == M2
    assert TernaryForm.parse(M3.notation) == M3
    assert TernaryForm.block(((2, 1), (1, 5)), 27).gram[2] == (0, 0, 27)
    with pytest.raises(ValueError):
        TernaryForm(((1, 1, 0), (0, 1, 0), (0, 0, 1)))
    with pytest.raises(ValueError):
        TernaryForm(((1, 2, 0), (2, 1, 0), (0, 0, 1)))
    with pytest.raises(ValueError):
        TernaryForm.parse("foo:1,2,3")


def test_eval_form_examples():
    assert eval_form(D133, (1, 1, 1)) == 7
    assert eval_form(D133, (0, 0, 0)) == 0
    assert eval_form(M2, (1, 0, 0)) == 4


def test_rep_count_examples():
    for f in SAMPLE:
        assert rep_count(0, f) == 1
    assert rep_count(4, D133) == 10
    assert rep_count(4, G) == 2
    assert [rep_count(n, SAMPLE[0]) for n in (1, 2, 3)] == [6, 12, 8]


@pytest.mark.parametrize("f", SAMPLE, ids=lambda f: f.notation)
def test_rep_count_matches_triple_loop(f):
    for n in range(0, 60):
        assert rep_count(n, f) == brute_rep_count(f.gram, n)


@pytest.mark.parametrize("f", SAMPLE, ids=lambda f: f.notation)
def test_theta_series_matches_short_vectors(f):
    th = theta_series(f, 300)
    assert [int(x) for x in th] == [rep_count(n, f) for n in range(301)]
    for v in short_vectors(f, 37):
        assert f(v) == 37


unimodular = st.sampled_from([
    ((1, 0, 0), (0, 1, 0), (0, 0, 1)),
    ((1, 1, 0), (0, 1, 0), (0, 0, 1)),
    ((1, 0, -2), (0, 1, 1), (0, 0, 1)),
    ((0, 1, 0), (1, 0, 0), (0, 0, -1)),
    ((2, 1, 0), (1, 1, 0), (0, 3, 1)),
])


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(SAMPLE), unimodular, unimodular)
def test_theta_invariant_under_change_of_basis(f, U, V):
    W = matmul(U, V)
    h = TernaryForm(matmul(matmul(transpose(W), f.gram), W))
    assert np.array_equal(theta_series(f, 200), theta_series(h, 200))


def test_represented_set_shapes():
    def complement(f, b):
        have = set(represented_set(f, b))
        return [n for n in range(b + 1) if n not in have]

    assert complement(TernaryForm.diagonal(1, 1, 1), 30) == [7, 15, 23, 28]
    assert complement(TernaryForm.diagonal(1, 1, 2), 30) == [14, 30]
    assert complement(TernaryForm.diagonal(1, 2, 5), 60) == [10, 15, 35, 40, 60]


def test_congruence_classes_examples():
    assert congruence_classes(M3, 1, 0) == {(0, 0, 0)}
    even = congruence_classes(TernaryForm.diagonal(1, 1, 1), 2, 0)
    assert even == {v for v in product(range(2), repeat=3) if sum(v) % 2 == 0}
    assert len(even) == 4
    assert (1, 0, 0) in congruence_classes(G, 5, 1)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(SAMPLE), st.integers(2, 7), st.integers(0, 6),
       st.tuples(*[st.integers(-3, 3)] * 3))
def test_classes_are_residues(g, d, a, w):
    a %= d
    for v in sorted(congruence_classes(g, d, a))[:5]:
        lifted = tuple(x + d * y for x, y in zip(v, w))
        assert g(lifted) % d == a


def test_signed_permutations():
    I3 = TernaryForm.diagonal(1, 1, 1)
    Ts = set(transformation_set(I3, I3, 1))
    expected = set()
    for p in permutations(range(3)):
        for signs in product((1, -1), repeat=3):
            expected.add(tuple(tuple(signs[i] if p[i] == j else 0 for j in range(3))
                               for i in range(3)))
    assert len(Ts) == 48 and Ts == expected


@pytest.mark.parametrize("f,g,d", [(M3, G, 5), (TernaryForm.diagonal(2, 3, 4),
                                                  TernaryForm.diagonal(1, 2, 12), 3)])
def test_transformation_set_closed_under_automorphisms(f, g, d):
    Ts = set(transformation_set(f, g, d))
    assert Ts
    for T in Ts:
        assert matmul(matmul(transpose(T), f.gram), T) == tuple(
            tuple(d * d * x for x in row) for row in g.gram)
    for U in transformation_set(f, f, 1):
        for T in list(Ts)[:10]:
            assert matmul(U, T) in Ts


def test_good_partition_examples():
    cert = good_partition(M3, G, 5, 1)
    assert cert.bad == {(1, 0, 0), (4, 0, 0)}
    assert cert.bad_signed() == [(-1, 0, 0), (1, 0, 0)]
    assert cert.R == cert.good | cert.bad
    g418 = TernaryForm(((5, 1, 0), (1, 5, 0), (0, 0, 6)))
    bad = good_partition(TernaryForm.diagonal(2, 3, 24), g418, 3, 2).bad
    assert bad == {(1, 2, 0), (2, 1, 0)}
    assert not good_partition(TernaryForm.diagonal(2, 3, 4), TernaryForm.diagonal(1, 2, 12), 3, 0).bad


def test_prec_check_examples():
    f = TernaryForm(((3, 0, 0), (0, 9, 3), (0, 3, 4)))
    g = TernaryForm.diagonal(27, 1, 27)
    for r in (2, 6, 7, 8, 10):
        assert prec_check(f, g, 11, r, verify_bound=3000)
    h = TernaryForm(((2, 1, -1), (1, 5, 1), (-1, 1, 11)))
    assert prec_check(TernaryForm.diagonal(2, 3, 15), h, 2, 0)
    for f in SAMPLE:
        assert prec_check(f, f, 1, 0)
    assert not prec_check(M3, G, 5, 1)


def test_pme_examples():
    res = pme_check(M3, G, 5, 1, T_415)
    assert res and res.eigenvectors == ((-1, 0, 0), (1, 0, 0))
    f516 = TernaryForm(((5, -2, 2), (-2, 8, 1), (2, 1, 8)))
    g516 = TernaryForm(((2, 1, 0), (1, 5, 0), (0, 0, 27)))
    res = pme_check(f516, g516, 13, 1, ((9, 20, 0), (-8, 1, 0), (0, 0, 13)))
    assert res.verdict and set(res.eigenvectors) == {(0, 0, 1), (0, 0, -1)}
    bad = pme_check(M3, G, 5, 1, ((5, 0, 0), (0, 5, 0), (0, 0, 5)))
    assert not bad and "(i) T/d has finite order" in bad.failures()


def test_infinite_order_and_eigenvectors():
    assert not has_infinite_order(((0, -1, 0), (1, 0, 0), (0, 0, 1)), 1)
    assert has_infinite_order(T_415, 5)
    assert integer_eigenvalues(T_415) == [5]
    tau = ((2, 2, 3), (-1, -1, 3), (-1, 2, 0))
    assert has_infinite_order(tau, 3)
    assert set(primitive_eigenvectors(tau).eigenvectors) == {(0, 3, -2), (0, -3, 2)}
    assert carries_to_lattice(T_415, (1, 0, 0), 5)
    assert not carries_to_lattice(T_415, (0, 1, 0), 5)


def test_pme_conclusion():
    assert pme_conclusion_check(M3, G, 5, 1, T_415, 2000)
    I3 = TernaryForm.diagonal(1, 1, 1)
    assert pme_conclusion_check(I3, I3, 1, 0, ((2, 0, 0), (0, 2, 0), (0, 0, 2)), 500)


def test_siegel_identity_small_cases():
    th = {k: theta_series(f, 10) for k, f in SIEGEL_FORMS.items()}
    assert (th["big"][4], th["g"][4], th["M2"][4], th["M3"][4]) == (10, 2, 2, 0)
    assert (th["big"][1], th["g"][1]) == (2, 2)
    assert siegel_identity_check(2000)
    assert siegel_identity_failures(2000) == []
