"""Exit criteria, one test each, with wall-clock budgets.

Every test records a PASS/FAIL line; the terminal summary prints them, and
running this file directly prints them too.
"""

import functools
import random
import sys
import time
from fractions import Fraction

import pytest

from k3rm import linalg as la
from k3rm.cliffordks import CliffordAlgebra, default_seed, kuga_satake_J, riemann_form
from k3rm.cores import embed_cores_in_clifford
from k3rm.numfield import NumberField, is_totally_positive, square_class
from k3rm.quadform import QBilinearForm, det_square_class, diagonalize, signature
from k3rm.rmhodge import (
    PeriodData, build_double_cover_example, construct_period, construct_rm_structure,
    det_identity_check, distinguished_embedding, embedding_signatures, is_polarization,
    recover_F_bilinear, sample_coefficients, simplicity_check, structure_trace_form,
    twist_det_check, twist_polarization,
)
from k3rm.spinbranch import decompose_sl2k, sl2k_irrep, spin_branching, wedge2
from k3rm.zlattice import (
    IntegerLattice, invariant_factors, is_primitive_embedding, smith_normal_form,
)

pytestmark = pytest.mark.acceptance

RESULTS: dict[int, str] = {}

FIELD_POLYS = {"Q(sqrt2)": [-2, 0, 1], "Q(sqrt5)": [-5, 0, 1], "cubic": [1, -3, 0, 1]}


def criterion(number: int, title: str, budget: float | None = None):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            start = time.perf_counter()
            try:
                fn(*args, **kwargs)
            except BaseException as exc:
                took = time.perf_counter() - start
                RESULTS[number] = f"criterion {number:2d} FAIL  {title} ({took:.2f}s): {type(exc).__name__}"
                raise
            took = time.perf_counter() - start
            limit = f" < {budget:g}s" if budget else ""
            if budget is not None and took >= budget:
                RESULTS[number] = f"criterion {number:2d} FAIL  {title} ({took:.2f}s, budget {budget:g}s)"
                pytest.fail(f"took {took:.2f}s, budget {budget}s")
            RESULTS[number] = f"criterion {number:2d} PASS  {title} ({took:.2f}s{limit})"
        return run
    return wrap


# shared sample ------------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def _field(name):
    return NumberField.from_poly(FIELD_POLYS[name])


def _unimodular(d, rng):
    up = [[Fraction(int(i == j) + (rng.randint(-1, 1) if j > i else 0)) for j in range(d)] for i in range(d)]
    low = [[Fraction(int(i == j) + (rng.randint(-1, 1) if j < i else 0)) for j in range(d)] for i in range(d)]
    return la.matmul(up, low)


@functools.lru_cache(maxsize=None)
def sample():
    """50 structures: 3 fields, m in {3, 4}, random signs, random change of coordinates."""
    rng = random.Random(20240501)
    out = []
    names = list(FIELD_POLYS)
    for k in range(50):
        F = _field(names[k % 3])
        m = 3 + (k // 3) % 2
        eps = F.embedding(rng.randrange(F.degree))
        a = sample_coefficients(eps, m, rng, equal_negatives=bool(k % 2))
        S = construct_rm_structure(F, m, a, eps)
        out.append((S.transform(_unimodular(S.d, rng)), eps))
    return tuple(out)


# criteria ------------------------------------------------------------------------------------

@criterion(1, "trace form round trip on 50 structures", 10)
def test_criterion_01_trace_form_round_trip():
    S_list = sample()
    assert len(S_list) == 50
    assert {S.field.degree for S, _ in S_list} == {2, 3}
    assert {S.m for S, _ in S_list} == {3, 4}
    for S, _ in S_list:
        phi, fb = recover_F_bilinear(S)
        assert structure_trace_form(S, phi, fb) == S.psi


@criterion(2, "determinant square classes of psi and psi_a", 10)
def test_criterion_02_determinant_classes():
    rng = random.Random(5)
    for S, _ in sample():
        assert det_identity_check(S)["ok"]
        while True:
            a = S.field([rng.randint(-4, 4) for _ in range(S.n)])
            if not a.is_zero():
                break
        res = twist_det_check(S, a)
        assert res["ok"]
        assert res["det_twist_class"] == square_class(a.norm() ** S.m * S.psi.det())


def _between_roots(F):
    """Rational strictly between the two smallest roots of the minimal polynomial."""
    (lo0, hi0), (lo1, hi1) = F.root_interval(0), F.root_interval(1)
    while hi0 >= lo1:
        lo0, hi0 = F.refine_root(0)
        lo1, hi1 = F.refine_root(1)
    return (hi0 + lo1) / 2


@criterion(3, "psi_a polarizes iff a totally positive (20 elements per field)")
def test_criterion_03_polarization_equivalence():
    rng = random.Random(3)
    mismatches = 0
    for name in FIELD_POLYS:
        F = _field(name)
        eps = F.embedding(F.degree - 1)
        S = construct_rm_structure(F, 3, sample_coefficients(eps, 3, rng), eps)
        P = construct_period(S, eps)
        c = _between_roots(F)
        elements = []
        for k in range(10):
            b = F([rng.randint(-3, 3) for _ in range(F.degree)]) or F.one
            elements.append((b * b + Fraction(1, k + 1), True))  # totally positive
            bad = -(b * b) if k % 2 else (b * b + 1) * (F.gen - c)  # negative somewhere
            elements.append((bad, False))
        for a, tp in elements:
            assert is_totally_positive(a) == tp
            tw = twist_polarization(S, a)
            mismatches += is_polarization(tw.psi, S, P) != is_totally_positive(a)
    assert mismatches == 0


@criterion(4, "det class of psi_a, a = d + sqrt d, changes for d in {2,3,5,7,10}")
def test_criterion_04_norm_obstruction():
    for d in (2, 3, 5, 7, 10):
        F = NumberField.quadratic(d)
        eps = F.embedding(1)
        S = construct_rm_structure(F, 3, sample_coefficients(eps, 3, random.Random(d)), eps)
        a = d + F.gen
        assert a.norm() == d * (d - 1)
        changed = det_square_class(twist_polarization(S, a).psi) != det_square_class(S.psi)
        assert changed == (square_class(d * (d - 1)) != 1)
        assert changed


@criterion(5, "double cover examples d = 5, 13", 1)
def test_criterion_05_double_cover():
    for d in (5, 13):
        S = build_double_cover_example(d)
        A = S.action(S.field.gen)
        G = S.psi.matrix()
        assert la.matmul(A, A) == [[Fraction(d if i == j else 0) for j in range(6)] for i in range(6)]
        assert la.matmul(la.transpose(A), G) == la.matmul(G, A)
        assert sorted(embedding_signatures(S)) == [(1, 2), (3, 0)]
        # psi is minus the cup product form
        minus = QBilinearForm([[-x for x in r] for r in G])
        target = QBilinearForm.diagonal(1, 1, -1, -1, -1, -1)
        assert signature(minus) == signature(target)
        assert det_square_class(minus) == det_square_class(target)


@criterion(6, "one place with (m-2,2), the others (m,0)")
def test_criterion_06_eigenspace_signatures():
    structures = [S for S, _ in sample()] + [build_double_cover_example(d) for d in (5, 13)]
    for S in structures:
        eps = distinguished_embedding(S)
        P = construct_period(S, eps)
        P.check(S.psi)
        sigs = embedding_signatures(S)
        assert sigs.count((S.m - 2, 2)) == 1
        assert sigs.count((S.m, 0)) == S.n - 1


def _rational_periods(d, count, rng):
    out = []
    while len(out) < count:
        pos = [rng.choice([1, 2, 3, 5]) for _ in range(d - 2)]
        neg = rng.choice([1, 2, 3])
        psi = QBilinearForm(la.congruence(QBilinearForm.diagonal(*pos, -neg, -neg).matrix(),
                                          _unimodular(d, rng)))
        diag, B = diagonalize(psi)
        cols = la.transpose(B)
        negs = [i for i, c in enumerate(diag) if c < 0]
        x, y = cols[negs[0]], cols[negs[1]]
        r = diag[negs[0]] / diag[negs[1]]
        t = Fraction(int(r.numerator ** 0.5), int(r.denominator ** 0.5))
        if t * t != r:
            continue
        out.append((psi, PeriodData.make(psi, x, [t * c for c in y])))
    return out


@criterion(7, "Kuga-Satake J and Riemann form on 12 periods, d in {3,4,6}", 60)
def test_criterion_07_kuga_satake():
    rng = random.Random(7)
    periods = _rational_periods(3, 4, rng) + _rational_periods(4, 4, rng)
    for S, eps in sample()[:8]:
        if S.d == 6:
            periods.append((S.psi, construct_period(S, eps)))
        if sum(1 for psi, _ in periods if psi.dim == 6) == 4:
            break
    assert len(periods) >= 10
    assert {psi.dim for psi, _ in periods} == {3, 4, 6}
    for psi, P in periods:
        A = CliffordAlgebra(psi)
        K = kuga_satake_J(A, P)
        assert K.J * K.J == -1
        assert A.even_dim == 2 ** (psi.dim - 1) == len(A.masks(even=True))
        R = riemann_form(K, *default_seed(A))
        assert R.sign in (1, -1)
        assert all(R.checks.values())


@criterion(8, "spin branching for all nm <= 12", 5)
def test_criterion_08_spin_branching():
    for m in range(2, 13):
        for n in range(1, 13):
            if 2 <= n * m <= 12:
                assert spin_branching(m, n).ok
    assert spin_branching(3, 2).dims == (8, 2, 4)
    assert spin_branching(3, 3).dims == (16, 2, 8)
    assert spin_branching(2, 2).dims == (4, 1, 4)


@criterion(9, "second exterior power of two copies of V1 x V1")
def test_criterion_09_wedge_two():
    W = sl2k_irrep((1, 1)) * 2
    parts = dict(decompose_sl2k(wedge2(W)))
    assert parts == {(2, 0): 3, (0, 2): 3, (0, 0): 1, (2, 2): 1}
    assert wedge2(W).dim == 28
    assert parts[(0, 0)] == 1


@criterion(10, "corestriction embeds in the even Clifford algebra", 30)
def test_criterion_10_corestriction():
    F = NumberField.quadratic(2)
    r2 = F.gen
    S = construct_rm_structure(F, 3, [1 - r2, 1 - r2, 1], F.embedding(1))
    E = embed_cores_in_clifford(S)
    assert E.cores.Z.r ** 2 == E.cores.dim == 16
    assert E.clifford.even_dim == 32
    assert all(E.checks.values())
    C, imgs, k = E.clifford, E.images, E.cores.constants
    pairs = 0
    for a in range(16):
        for b in range(16):
            rhs = C.scalar(0)
            for c, x in enumerate(k[a][b]):
                if x:
                    rhs = rhs + imgs[c] * x
            assert imgs[a] * imgs[b] == rhs
            pairs += 1
    assert pairs == 256
    unit = C.scalar(0)
    for c, x in enumerate(E.cores.unit):
        if x:
            unit = unit + imgs[c] * x
    assert unit == C.one
    M = [[Fraction(img.coefficient(mm)) for mm in C.masks(even=True)] for img in imgs]
    assert la.rank(M) == 16


def _divisor_oracle(M):
    from itertools import combinations
    from math import gcd

    out, prev = [], 1
    for k in range(1, 5):
        g = 0
        for rows in combinations(range(4), k):
            for cols in combinations(range(4), k):
                g = gcd(g, int(la.det([[Fraction(M[i][j]) for j in cols] for i in rows])))
        if g == 0:
            return out + [0] * (4 - k + 1)
        out.append(g // prev)
        prev = g
    return out


@criterion(11, "lattice suite")
def test_criterion_11_lattices():
    L = IntegerLattice.fixture("LambdaK3")
    assert L.is_even and L.is_unimodular and L.signature() == (3, 19)
    rng = random.Random(11)
    for _ in range(100):
        M = [[rng.randint(-9, 9) for _ in range(4)] for _ in range(4)]
        U, D, V = smith_normal_form(M)
        assert la.matmul(la.matmul(U, M), V) == D
        assert invariant_factors(M) == _divisor_oracle(M)
    assert not is_primitive_embedding([[1, 0], [0, 2]], IntegerLattice.fixture("U2"), IntegerLattice.fixture("U"))


@criterion(12, "simplicity on crafted periods")
def test_criterion_12_simplicity():
    psi = QBilinearForm.diagonal(1, -1, -1, 1)
    res = simplicity_check(psi, PeriodData.make(psi, [0, 1, 0, 0], [0, 0, 1, 0]))
    assert not res.simple and la.rank([list(v) for v in res.kernel]) == 2
    F = NumberField.quadratic(2)
    psi3 = QBilinearForm.diagonal(1, -1, -1)
    P = PeriodData.make(psi3, [1, F.gen, 0], [0, 0, 1], F.embedding(1))
    assert simplicity_check(psi3, P).simple


def summary_lines() -> list[str]:
    lines = [RESULTS[k] for k in sorted(RESULTS)]
    missing = [k for k in range(1, 13) if k not in RESULTS]
    lines += [f"criterion {k:2d} NOT RUN" for k in missing]
    return lines


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
