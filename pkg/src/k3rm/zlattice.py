"""Integer lattices: Smith normal form, primitivity, orthogonal complements."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Sequence

from . import fixtures
from .errors import Degenerate, GramMismatch, ShapeMismatch
from .quadform import QBilinearForm, signature

IntMatrix = list  # list[list[int]]


def _as_int_matrix(M: Sequence[Sequence]) -> IntMatrix:
    out = []
    for row in M:
        r = []
        for x in row:
            q = Fraction(x)
            if q.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            r.append(int(q))
        out.append(r)
    return out


def _identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _matmul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    if not A:
        return []
    Bt = list(zip(*B)) if B else []
    if not Bt:
        return [[] for _ in A]
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def _transpose(M: IntMatrix) -> IntMatrix:
    return [list(c) for c in zip(*M)] if M else []


def smith_normal_form(M: Sequence[Sequence]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """``(U, D, V)`` with ``D = U M V`` diagonal, ``d_1 | d_2 | ...``, ``U``, ``V`` unimodular.

    Pivots on the entry of least absolute value; invariant factors are
    non-negative.
    """
    A = _as_int_matrix(M)
    rows = len(A)
    cols = len(A[0]) if rows else 0
    U = _identity(rows)
    V = _identity(cols)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for R in A:
            R[i], R[j] = R[j], R[i]
        for R in V:
            R[i], R[j] = R[j], R[i]

    def add_row(dst, src, k):  # row_dst += k row_src
        A[dst] = [x + k * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + k * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, k):
        for R in A:
            R[dst] += k * R[src]
        for R in V:
            R[dst] += k * R[src]

    t = 0
    while t < min(rows, cols):
        nz = [(abs(A[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            p = A[t][t]
            for i in range(t + 1, rows):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        done = False
            if not done:
                # a remainder smaller than the pivot survived; move it to the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, rows) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, cols) if A[t][j]]
                _, i, j = min(cand)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            # divisibility: the pivot must divide the remaining block
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, A, V


def invariant_factors(M: Sequence[Sequence]) -> list[int]:
    _, D, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def _det_int(M: IntMatrix) -> int:
    from .linalg import det

    return int(det([[Fraction(x) for x in r] for r in M]))


@dataclass(frozen=True)
class IntegerLattice:
    gram: tuple

    def __init__(self, gram: Sequence[Sequence]):
        G = _as_int_matrix(gram)
        n = len(G)
        if any(len(r) != n for r in G) or any(G[i][j] != G[j][i] for i in range(n) for j in range(n)):
            raise ValueError("Gram matrix must be square and symmetric")
        object.__setattr__(self, "gram", tuple(tuple(r) for r in G))

    @classmethod
    def fixture(cls, name: str) -> IntegerLattice:
        return cls(fixtures.named(name))

    @property
    def rank(self) -> int:
        return len(self.gram)

    def matrix(self) -> IntMatrix:
        return [list(r) for r in self.gram]

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def det(self) -> int:
        return _det_int(self.matrix()) if self.rank else 1

    @property
    def is_unimodular(self) -> bool:
        return abs(self.det()) == 1

    def signature(self) -> tuple[int, int]:
        return signature(QBilinearForm(self.gram))

    def form(self) -> QBilinearForm:
        return QBilinearForm(self.gram)

    def sublattice_gram(self, B: Sequence[Sequence]) -> IntMatrix:
        """``B G B^T`` for basis rows ``B``."""
        B = _as_int_matrix(B)
        return _matmul(_matmul(B, self.matrix()), _transpose(B))

    def to_json(self) -> list[list[int]]:
        return self.matrix()


def discriminant_group_order(L: IntegerLattice) -> int:
    """``|det G|``, computed as the product of the invariant factors."""
    if L.rank == 0:
        return 1
    f = invariant_factors(L.matrix())
    if any(x == 0 for x in f):
        raise Degenerate("lattice is degenerate")
    out = 1
    for x in f:
        out *= x
    return out


def is_primitive_sublattice(B: Sequence[Sequence]) -> bool:
    """Rows of ``B`` span a saturated sublattice (all invariant factors 1)."""
    B = _as_int_matrix(B)
    if not B:
        return True
    f = invariant_factors(B)
    return len(f) == len(B) and all(x == 1 for x in f)


def is_primitive_embedding(B: Sequence[Sequence], T: IntegerLattice,
                           L: IntegerLattice | None = None) -> bool:
    """``B`` (rows = images of a basis of ``T``) embeds ``T`` primitively into ``L`` (``Lambda_K3`` by default).

    Raises :class:`GramMismatch` when ``B G_L B^T != G_T``.
    """
    L = L or IntegerLattice.fixture("LambdaK3")
    B = _as_int_matrix(B)
    if len(B) != T.rank or any(len(r) != L.rank for r in B):
        raise ShapeMismatch(f"B must be {T.rank} x {L.rank}")
    if L.sublattice_gram(B) != T.matrix():
        raise GramMismatch("B G B^T differs from the Gram matrix of T")
    return is_primitive_sublattice(B)


def orthogonal_complement(L: IntegerLattice, S: Sequence[Sequence]) -> IntMatrix:
    """Basis rows of ``{v in Z^r : S G v = 0}``; saturated by construction."""
    S = _as_int_matrix(S)
    r = L.rank
    if not S:
        return _identity(r)
    M = _matmul(S, L.matrix())
    _, D, V = smith_normal_form(M)
    k = sum(1 for i in range(min(len(D), r)) if D[i][i] != 0)
    Vt = _transpose(V)
    return [Vt[j] for j in range(k, r)]


def search_primitive_embedding(T: IntegerLattice, L: IntegerLattice, box: int = 2,
                               coords: Sequence[int] | None = None,
                               max_candidates: int = 2_000_000) -> IntMatrix | None:
    """Best-effort search for a primitive embedding with entries in ``[-box, box]``.

    Only the coordinates in ``coords`` (all by default) may be nonzero. A
    ``None`` result says nothing about existence.
    """
    coords = list(range(L.rank)) if coords is None else list(coords)
    total = (2 * box + 1) ** len(coords)
    if total > max_candidates:
        raise ValueError(f"{total} candidate vectors exceed the cap {max_candidates}; restrict coords")
    G = L.matrix()
    Gt = T.matrix()
    sub = [[G[i][j] for j in coords] for i in coords]
    norms = {Gt[i][i] for i in range(T.rank)}
    cands: dict[int, list[tuple]] = {n: [] for n in norms}
    for v in product(range(-box, box + 1), repeat=len(coords)):
        if not any(v):
            continue
        Gv = [sum(a * b for a, b in zip(row, v)) for row in sub]
        n = sum(a * b for a, b in zip(v, Gv))
        if n in cands:
            cands[n].append((v, Gv))

    def dfs(chosen: list[tuple]) -> list[tuple] | None:
        k = len(chosen)
        if k == T.rank:
            return chosen
        for v, Gv in cands[Gt[k][k]]:
            if all(sum(a * b for a, b in zip(w, Gv)) == Gt[i][k] for i, (w, _) in enumerate(chosen)):
                rows = [c[0] for c in chosen] + [v]
                if not is_primitive_sublattice(rows):
                    continue
                got = dfs(chosen + [(v, Gv)])
                if got is not None:
                    return got
        return None

    found = dfs([])
    if found is None:
        return None
    out = []
    for v, _ in found:
        row = [0] * L.rank
        for c, x in zip(coords, v):
            row[c] = x
        out.append(row)
    return out
