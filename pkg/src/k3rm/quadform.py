"""Symmetric bilinear forms over Q and over a number field with a real place."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import fixtures
from . import linalg as la
from .errors import Degenerate, ShapeMismatch
from .numfield import (
    Embedding,
    FieldElement,
    NumberField,
    format_rational,
    parse_rational,
    sign_at,
    square_class,
)


def _freeze(M) -> tuple:
    return tuple(tuple(row) for row in M)


@dataclass(frozen=True)
class QBilinearForm:
    gram: tuple

    def __init__(self, gram: Sequence[Sequence]):
        G = _freeze([parse_rational(x) if not isinstance(x, Fraction) else x for x in row] for row in gram)
        if not la.is_symmetric(G):
            raise ValueError("Gram matrix is not symmetric")
        object.__setattr__(self, "gram", G)

    @property
    def dim(self) -> int:
        return len(self.gram)

    def matrix(self) -> list[list[Fraction]]:
        return [list(r) for r in self.gram]

    def det(self) -> Fraction:
        return la.det(self.matrix())

    @property
    def is_nondegenerate(self) -> bool:
        return self.det() != 0

    def __call__(self, u, v):
        return la.bilinear(self.matrix(), u, v)

    def scaled(self, c) -> QBilinearForm:
        return QBilinearForm([[c * x for x in row] for row in self.gram])

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in row] for row in self.gram]

    @classmethod
    def from_json(cls, data) -> QBilinearForm:
        return cls(data)

    @classmethod
    def diagonal(cls, *entries) -> QBilinearForm:
        return cls(la.block_diag(*[[[parse_rational(e)]] for e in entries]))


@dataclass(frozen=True)
class KBilinearForm:
    """Form with entries in a number field; ``embedding`` is the designated real place."""

    gram: tuple
    embedding: Embedding | None = None

    def __init__(self, gram: Sequence[Sequence], embedding: Embedding | None = None,
                 field: NumberField | None = None):
        F = field or (embedding.field if embedding is not None else None)
        if F is None:
            F = next((x.field for row in gram for x in row if isinstance(x, FieldElement)), None)
        if F is None:
            raise ValueError("cannot infer the coefficient field")
        G = _freeze([F(x) for x in row] for row in gram)
        if not la.is_symmetric(G):
            raise ValueError("Gram matrix is not symmetric")
        object.__setattr__(self, "gram", G)
        object.__setattr__(self, "embedding", embedding)

    @property
    def field(self) -> NumberField:
        return self.gram[0][0].field if self.gram else self.embedding.field

    @property
    def dim(self) -> int:
        return len(self.gram)

    def matrix(self) -> list[list[FieldElement]]:
        return [list(r) for r in self.gram]

    def det(self) -> FieldElement:
        return self.field(la.det(self.matrix())) if self.gram else self.field.one

    def at(self, emb: Embedding) -> KBilinearForm:
        return KBilinearForm(self.gram, emb)

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "embedding": self.embedding.root_index if self.embedding else None,
            "gram": [[x.to_json() for x in row] for row in self.gram],
        }

    @classmethod
    def from_json(cls, data) -> KBilinearForm:
        F = NumberField.from_json(data["field"], attest_irreducible=True)
        emb = F.embedding(data["embedding"]) if data.get("embedding") is not None else None
        return cls([[F(x) for x in row] for row in data["gram"]], emb, field=F)


Form = QBilinearForm | KBilinearForm


def _height(x) -> int:
    if isinstance(x, FieldElement):
        return x.height()
    x = Fraction(x)
    return max(abs(x.numerator), x.denominator)


def diagonalize(form: Form, *, with_basis: bool = True) -> tuple[list, list[list] | None]:
    """Symmetric Gaussian congruence.

    Returns ``(diag, B)`` with ``B^T G B = diag(diag)`` and ``B`` invertible.
    Pivots on the largest-height nonzero diagonal entry; when the remaining
    diagonal is zero but an off-diagonal coupling ``g_ij`` survives, ``b_i``
    is replaced by ``b_i + b_j``. ``with_basis=False`` skips ``B`` and
    returns ``None`` in its place.
    """
    A = form.matrix()
    n = len(A)
    if n == 0:
        return [], []
    sample = A[0][0]
    one = sample * 0 + 1
    zero = sample * 0
    B = la.identity(n, one, zero) if with_basis else []

    def swap(i, j):
        A[i], A[j] = A[j], A[i]
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in B:
            row[i], row[j] = row[j], row[i]

    def add_to(i, j, c):
        # b_i <- b_i + c b_j
        for row in B:
            row[i] = row[i] + c * row[j]
        A[i] = [x + c * y for x, y in zip(A[i], A[j])]
        for row in A:
            row[i] = row[i] + c * row[j]

    for k in range(n):
        cands = [i for i in range(k, n) if A[i][i] != 0]
        if not cands:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if A[i][j] != 0), None)
            if pair is None:
                break
            add_to(pair[0], pair[1], one)
            cands = [pair[0]]
        p = max(cands, key=lambda i: _height(A[i][i]))
        if p != k:
            swap(k, p)
        piv = A[k][k]
        for j in range(k + 1, n):
            if A[k][j] != 0:
                add_to(j, k, -(A[k][j] / piv))
    return [A[i][i] for i in range(n)], (B if with_basis else None)


def _sign(x, emb: Embedding | None) -> int:
    if isinstance(x, FieldElement):
        if emb is None:
            raise ValueError("an embedding is needed to take signs of field elements")
        return sign_at(x, emb)
    return (x > 0) - (x < 0)


def signature(form: Form, emb: Embedding | None = None) -> tuple[int, int]:
    """``(p, q)``: numbers of positive and negative squares."""
    if emb is None and isinstance(form, KBilinearForm):
        emb = form.embedding
    diag, _ = diagonalize(form)
    signs = [_sign(x, emb) for x in diag]
    if 0 in signs:
        raise Degenerate("form is degenerate")
    return signs.count(1), signs.count(-1)


def inertia(form: Form, emb: Embedding | None = None) -> tuple[int, int, int]:
    """``(p, q, z)`` including the radical dimension; never raises on degenerate input."""
    if emb is None and isinstance(form, KBilinearForm):
        emb = form.embedding
    diag, _ = diagonalize(form, with_basis=False)
    signs = [_sign(x, emb) for x in diag]
    return signs.count(1), signs.count(-1), signs.count(0)


def det_square_class(form: QBilinearForm) -> int:
    d = form.det()
    if d == 0:
        raise Degenerate("zero determinant")
    return square_class(d)


def direct_sum(*forms: Form) -> Form:
    if not forms:
        return QBilinearForm([])
    if all(isinstance(f, QBilinearForm) for f in forms):
        return QBilinearForm(la.block_diag(*[f.matrix() for f in forms]))
    fields = {f.field for f in forms if isinstance(f, KBilinearForm)}
    if len(fields) != 1:
        raise ShapeMismatch("forms over different coefficient fields")
    F = fields.pop()
    emb = next((f.embedding for f in forms if isinstance(f, KBilinearForm) and f.embedding), None)
    blocks = [[[F(x) for x in row] for row in f.matrix()] for f in forms]
    return KBilinearForm(la.block_diag(*blocks, zero=F.zero), emb, field=F)


def verify_isometry(f1: Form, f2: Form, B: Sequence[Sequence]) -> bool:
    """True iff ``B^T G1 B == G2`` and ``B`` is invertible."""
    n1, n2 = f1.dim, f2.dim
    if len(B) != n1 or any(len(r) != n2 for r in B):
        raise ShapeMismatch(f"B must be {n1}x{n2}")
    if n1 != n2:
        return False
    if la.det([list(r) for r in B]) == 0:
        return False
    lhs = la.congruence(f1.matrix(), [list(r) for r in B])
    return all(lhs[i][j] == f2.gram[i][j] for i in range(n2) for j in range(n2))


def fixture(name: str) -> QBilinearForm:
    """Named Gram matrices: ``U``, ``U2``, ``E8minus``, ``LambdaK3``, ``minus2``, ..."""
    return QBilinearForm(fixtures.named(name))
