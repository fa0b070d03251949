import os
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from k3rm import kernels, linalg as la
from k3rm import _pure

try:
    from k3rm import _speedups
except ImportError:  # pragma: no cover - depends on the build
    _speedups = None

needs_ext = pytest.mark.skipif(_speedups is None, reason="compiled extension not built")


@st.composite
def grams(draw):
    d = draw(st.integers(1, 5))
    G = [[Fraction(0)] * d for _ in range(d)]
    for i in range(d):
        for j in range(i, d):
            G[i][j] = G[j][i] = Fraction(draw(st.integers(-3, 3)), draw(st.integers(1, 3)))
    return G


rational_matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.fractions(-5, 5, max_denominator=4), min_size=n, max_size=n),
                       min_size=n, max_size=n))


@needs_ext
@given(st.integers(0, 255), st.integers(0, 255))
def test_reorder_sign_parity(a, b):
    assert _speedups.reorder_sign(a, b) == _pure.reorder_sign(a, b)


@needs_ext
@pytest.mark.parametrize("d", range(0, 6))
def test_orthogonal_table_parity(d):
    assert _speedups.orthogonal_table(d) == _pure.orthogonal_table(d)


@needs_ext
@given(grams(), st.data())
def test_general_product_parity(G, data):
    d = len(G)
    a = data.draw(st.integers(0, 2**d - 1))
    b = data.draw(st.integers(0, 2**d - 1))
    assert _speedups.general_product(a, b, G, {}) == _pure.general_product(a, b, G, {})


@needs_ext
@given(rational_matrices)
def test_rref_and_det_parity(M):
    assert _speedups.rref_rational([list(r) for r in M]) == _pure.rref_rational([list(r) for r in M])
    assert _speedups.det_rational([list(r) for r in M]) == _pure.det_rational([list(r) for r in M])


@given(rational_matrices)
def test_det_against_cofactor_expansion(M):
    def cofactor(A):
        if len(A) == 1:
            return A[0][0]
        return sum((-1) ** j * A[0][j] * cofactor([r[:j] + r[j + 1:] for r in A[1:]]) for j in range(len(A)))

    assert _pure.det_rational([list(r) for r in M]) == cofactor(M)
    assert la.det(M) == cofactor(M)


@given(rational_matrices)
def test_rref_is_reduced(M):
    R, piv = _pure.rref_rational([list(r) for r in M])
    for i, p in enumerate(piv):
        assert R[i][p] == 1
        assert all(R[k][p] == 0 for k in range(len(R)) if k != i)
    assert len(piv) == la.rank(M)


def test_backend_selection():
    assert kernels.BACKEND in ("python", "cython")
    assert kernels.backend("python") is _pure
    with pytest.raises(ValueError):
        kernels.backend("fortran")
    env = dict(os.environ, K3RM_PURE="1")
    out = subprocess.run([sys.executable, "-c", "import k3rm.kernels as k; print(k.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
