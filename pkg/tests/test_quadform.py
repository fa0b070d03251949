from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from k3rm import linalg as la
from k3rm.errors import Degenerate, ShapeMismatch
from k3rm.numfield import NumberField
from k3rm.quadform import (
    KBilinearForm, QBilinearForm, det_square_class, diagonalize, direct_sum, fixture, inertia,
    signature, verify_isometry,
)


@st.composite
def sym_matrices(draw, nmin=1, nmax=6, lo=-5, hi=5):
    n = draw(st.integers(nmin, nmax))
    G = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            G[i][j] = G[j][i] = Fraction(draw(st.integers(lo, hi)))
    return G


@st.composite
def invertible(draw, n):
    while True:
        B = [[Fraction(draw(st.integers(-2, 2))) for _ in range(n)] for _ in range(n)]
        if la.det(B) != 0:
            return B


def numpy_signature(G):
    ev = np.linalg.eigvalsh(np.array([[float(x) for x in r] for r in G]))
    return int((ev > 1e-9).sum()), int((ev < -1e-9).sum())


@given(sym_matrices())
def test_diagonalize_is_a_congruence(G):
    diag, B = diagonalize(QBilinearForm(G))
    assert la.congruence(G, B) == [[diag[i] if i == j else 0 for j in range(len(G))] for i in range(len(G))]


@given(sym_matrices())
def test_signature_matches_eigenvalues(G):
    assume(la.det(G) != 0)
    assert signature(QBilinearForm(G)) == numpy_signature(G)


@given(sym_matrices(nmax=5), st.data())
def test_sylvester_stability(G, data):
    assume(la.det(G) != 0)
    B = data.draw(invertible(len(G)))
    f = QBilinearForm(G)
    g = QBilinearForm(la.congruence(G, B))
    assert signature(f) == signature(g)
    assert det_square_class(f) == det_square_class(g)


@given(sym_matrices(nmax=4), sym_matrices(nmax=4))
def test_signature_additive(G1, G2):
    assume(la.det(G1) != 0 and la.det(G2) != 0)
    f1, f2 = QBilinearForm(G1), QBilinearForm(G2)
    p1, q1 = signature(f1)
    p2, q2 = signature(f2)
    assert signature(direct_sum(f1, f2)) == (p1 + p2, q1 + q2)


@given(sym_matrices(nmax=5))
def test_inertia_counts_kernel(G):
    p, q, z = inertia(QBilinearForm(G))
    assert p + q + z == len(G)
    assert z == len(G) - la.rank(G)


def test_examples():
    assert signature(fixture("LambdaK3")) == (3, 19)
    assert det_square_class(fixture("U2")) == -1
    assert fixture("U2").det() == -4
    assert det_square_class(QBilinearForm.diagonal(-2, -2)) == 1
    assert det_square_class(QBilinearForm.diagonal(1, 1, 1, 1)) == 1
    psi = QBilinearForm.diagonal(1, -1, 1, -1, 1, 1)
    assert signature(psi) == (4, 2)
    s = direct_sum(QBilinearForm.diagonal(1, -1), QBilinearForm.diagonal(1, 1))
    assert s == QBilinearForm.diagonal(1, -1, 1, 1)
    big = direct_sum(*([fixture("U")] * 3 + [fixture("E8minus")] * 2))
    assert big.dim == 22 and det_square_class(big) == -1
    assert direct_sum().dim == 0


def test_zero_diagonal_pivot():
    diag, B = diagonalize(QBilinearForm([[0, 2], [2, 0]]))
    assert sorted(diag) == [-1, 4]


def test_field_form_signature(Q2):
    r2 = Q2.gen
    phi = KBilinearForm([[1 - r2, 0, 0], [0, 1 - r2, 0], [0, 0, 1]], Q2.embedding(1))
    assert signature(phi, Q2.embedding(1)) == (1, 2)
    assert signature(phi, Q2.embedding(0)) == (3, 0)
    assert KBilinearForm.from_json(phi.to_json()) == phi


def test_field_form_against_numeric(Q2):
    r2 = Q2.gen
    G = [[r2, 1, 0], [1, 2 - r2, r2], [0, r2, -1]]
    phi = KBilinearForm(G, field=Q2)
    for e in Q2.embeddings():
        num = [[Q2(x).approx(e) for x in row] for row in G]
        assert signature(phi, e) == numpy_signature(num)


def test_isometry_witnesses():
    U2 = fixture("U2")
    target = QBilinearForm.diagonal(2, -2)
    # x1 = y1 + y2, x2 = (y1 - y2) / 2
    B = [[1, 1], [Fraction(1, 2), Fraction(-1, 2)]]
    assert verify_isometry(U2, target, B)
    assert verify_isometry(target, target, la.identity(2))
    assert not verify_isometry(QBilinearForm.diagonal(1, 1), QBilinearForm.diagonal(1, 2), [[1, 0], [0, 1]])
    assert not verify_isometry(target, target, [[1, 1], [1, 1]])
    with pytest.raises(ShapeMismatch):
        verify_isometry(target, target, [[1, 0]])


def test_degenerate():
    with pytest.raises(Degenerate):
        signature(QBilinearForm([[1, 1], [1, 1]]))
    with pytest.raises(Degenerate):
        det_square_class(QBilinearForm([[0]]))
    with pytest.raises(ValueError):
        QBilinearForm([[1, 2], [3, 4]])


def test_serialization():
    f = QBilinearForm([[Fraction(1, 3), 2], [2, -1]])
    assert QBilinearForm.from_json(f.to_json()) == f
    assert f.to_json()[0][0] == "1/3"
