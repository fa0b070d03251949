"""Dense exact linear algebra over Q or a number field.

Matrices are lists of rows. Entries may be ``Fraction``/``int`` or
``FieldElement``; the only requirements are ring operations, division by a
nonzero entry and ``== 0``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from . import kernels

Matrix = list  # list[list[entry]]


def zeros(r: int, c: int, zero=Fraction(0)) -> Matrix:
    return [[zero] * c for _ in range(r)]


def identity(n: int, one=Fraction(1), zero=Fraction(0)) -> Matrix:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def shape(M: Sequence[Sequence]) -> tuple[int, int]:
    return len(M), (len(M[0]) if M else 0)


def transpose(M: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*M)] if M else []


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    if not A:
        return []
    if len(A[0]) != len(B):
        raise ValueError(f"shape mismatch {shape(A)} @ {shape(B)}")
    Bt = transpose(B)
    out = []
    for row in A:
        nz = [(k, a) for k, a in enumerate(row) if a != 0]
        out_row = []
        for col in Bt:
            acc = 0
            for k, a in nz:
                b = col[k]
                if b != 0:
                    acc = a * b + acc
            out_row.append(acc if not isinstance(acc, int) else Fraction(acc))
        out.append(out_row)
    return out


def matvec(A: Sequence[Sequence], v: Sequence) -> list:
    out = []
    for row in A:
        acc = 0
        for a, x in zip(row, v):
            if a != 0 and x != 0:
                acc = a * x + acc
        out.append(acc if not isinstance(acc, int) else Fraction(acc))
    return out


def dot(u: Sequence, v: Sequence):
    acc = 0
    for a, b in zip(u, v):
        if a != 0 and b != 0:
            acc = a * b + acc
    return acc if not isinstance(acc, int) else Fraction(acc)


def bilinear(G: Sequence[Sequence], u: Sequence, v: Sequence):
    """``u^T G v``."""
    return dot(u, matvec(G, v))


def congruence(G: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    """``B^T G B``."""
    return matmul(transpose(B), matmul(G, B))


def block_diag(*blocks: Sequence[Sequence], zero=Fraction(0)) -> Matrix:
    n = sum(len(b) for b in blocks)
    out = zeros(n, n, zero)
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return out


def is_symmetric(M: Sequence[Sequence]) -> bool:
    n = len(M)
    return all(len(r) == n for r in M) and all(
        M[i][j] == M[j][i] for i in range(n) for j in range(i + 1, n))


def _all_rational(M) -> bool:
    return all(isinstance(x, (int, Fraction)) for row in M for x in row)


def rref(M: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    if M and _all_rational(M):
        return kernels.rref_rational([list(r) for r in M])
    A = [list(r) for r in M]
    rows, cols = shape(A)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
    return A, pivots


def rank(M: Sequence[Sequence]) -> int:
    if not M or not M[0]:
        return 0
    return len(rref(M)[1])


def nullspace(M: Sequence[Sequence], ncols: int | None = None, one=None) -> list[list]:
    """Basis of ``{v : M v = 0}`` as a list of vectors."""
    if not M:
        n = ncols or 0
        zero = Fraction(0) if one is None else one * 0
        unit = Fraction(1) if one is None else one
        return [[unit if i == j else zero for i in range(n)] for j in range(n)]
    R, piv = rref(M)
    n = len(M[0])
    sample = next((x for row in R for x in row), Fraction(0))
    unit = one if one is not None else (sample * 0 + 1)
    zero = unit * 0
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = unit
        for i, pc in enumerate(piv):
            v[pc] = -R[i][f]
        basis.append(v)
    return basis


def det(M: Sequence[Sequence]):
    n = len(M)
    if n == 0:
        return Fraction(1)
    if _all_rational(M):
        return kernels.det_rational([list(r) for r in M])
    A = [list(r) for r in M]
    sign = 1
    acc = None
    for c in range(n):
        p = next((i for i in range(c, n) if A[i][c] != 0), None)
        if p is None:
            return A[0][0] * 0
        if p != c:
            A[c], A[p] = A[p], A[c]
            sign = -sign
        piv = A[c][c]
        acc = piv if acc is None else acc * piv
        inv = 1 / piv
        for i in range(c + 1, n):
            if A[i][c] != 0:
                f = A[i][c] * inv
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return acc if sign == 1 else -acc


def inverse(M: Sequence[Sequence]) -> Matrix:
    n = len(M)
    sample = M[0][0]
    one = sample * 0 + 1
    zero = sample * 0
    aug = [list(M[i]) + [one if i == j else zero for j in range(n)] for i in range(n)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


def solve(M: Sequence[Sequence], b: Sequence) -> list:
    """Unique solution of ``M x = b`` for square invertible ``M``."""
    n = len(M)
    aug = [list(M[i]) + [b[i]] for i in range(n)]
    R, piv = rref(aug)
    if piv != list(range(n)):
        raise ZeroDivisionError("system is singular")
    return [R[i][n] for i in range(n)]


def rational_expand(rows: Sequence[Sequence], degree: int) -> Matrix:
    """Split number-field rows into ``degree`` rational rows each.

    Row ``r`` with entries ``sum_k c_k alpha^k`` becomes the rows of
    coefficient ``k`` for each ``k``; their common rational kernel is the
    rational kernel of the original system.
    """
    out = []
    for row in rows:
        for k in range(degree):
            out.append([x.coeffs[k] if hasattr(x, "coeffs") else (Fraction(x) if k == 0 else Fraction(0))
                        for x in row])
    return out
