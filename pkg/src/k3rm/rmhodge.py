"""K3-type Hodge structures with real multiplication by a totally real field.

Coordinates: an :class:`RMStructure` lives on ``V = Q^d`` with ``F`` acting
through rational matrices ``rho[i] = rho(alpha^i)``. Structures built from
diagonal data use the layout ``F^m = Q^(nm)`` where coordinate ``k*n + i``
is the ``alpha^i`` part of the ``k``-th entry.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from itertools import product
from typing import Sequence

from . import linalg as la
from . import poly as P
from .errors import (
    BadSignPattern,
    DegenerateTraceForm,
    InvalidPeriod,
    InvalidStructure,
    NoNegativePlane,
    NotCompatible,
    NotSquarefree,
    NotSumOfTwoSquares,
    NotTotallyReal,
    RankTooSmall,
    ShapeMismatch,
    ZeroElement,
)
from .numfield import (
    Embedding,
    FieldElement,
    NumberField,
    discriminant_det,
    field_discriminant,
    format_rational,
    is_totally_positive,
    parse_rational,
    sign_at,
    square_class,
)
from .quadform import KBilinearForm, QBilinearForm, diagonalize, inertia, signature


def _qmat(M) -> list[list[Fraction]]:
    return [[parse_rational(x) for x in row] for row in M]


def _lift(M, F: NumberField) -> list[list[FieldElement]]:
    return [[F.scalar(x) for x in row] for row in M]


@dataclass(frozen=True, eq=False)
class RMStructure:
    """``(V, psi)`` with a self-adjoint action of ``F``; ``d = n*m``."""

    field: NumberField
    m: int
    rho: tuple
    psi: QBilinearForm
    phi: KBilinearForm | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "rho", tuple(tuple(tuple(r) for r in _qmat(M)) for M in self.rho))
        self.validate()

    def __eq__(self, other) -> bool:
        return (isinstance(other, RMStructure) and self.field == other.field and self.m == other.m
                and self.rho == other.rho and self.psi == other.psi)

    def __hash__(self) -> int:
        return hash((self.field, self.m, self.psi))

    @property
    def n(self) -> int:
        return self.field.degree

    @property
    def d(self) -> int:
        return self.psi.dim

    def validate(self) -> None:
        n, d = self.n, self.d
        if d != n * self.m:
            raise InvalidStructure(f"dim V = {d} but n*m = {n * self.m}")
        if len(self.rho) != n or any(len(M) != d for M in self.rho):
            raise InvalidStructure("need one d x d matrix per power-basis element")
        if [list(r) for r in self.rho[0]] != la.identity(d):
            raise InvalidStructure("rho(1) must be the identity")
        A = self.action(self.field.gen)
        # p(rho(alpha)) = 0 plus consistency of the powers
        power = la.identity(d)
        acc = la.zeros(d, d)
        for k, c in enumerate(self.field.min_poly):
            if k < n and [list(r) for r in self.rho[k]] != power:
                raise InvalidStructure(f"rho(alpha)^{k} != rho(alpha^{k})")
            if c:
                acc = [[x + c * y for x, y in zip(r1, r2)] for r1, r2 in zip(acc, power)]
            power = la.matmul(power, A) if k < n else power
        if any(x != 0 for row in acc for x in row):
            raise InvalidStructure("rho(alpha) is not annihilated by the minimal polynomial")
        G = self.psi.matrix()
        for M in self.rho:
            M = [list(r) for r in M]
            if la.matmul(la.transpose(M), G) != la.matmul(G, M):
                raise InvalidStructure("F does not act self-adjointly")
        if self.psi.det() == 0:
            raise InvalidStructure("psi is degenerate")

    def action(self, a) -> list[list[Fraction]]:
        """Matrix of ``rho(a)``."""
        a = self.field(a)
        d = self.d
        out = la.zeros(d, d)
        for c, M in zip(a.coeffs, self.rho):
            if c:
                out = [[x + c * y for x, y in zip(r1, r2)] for r1, r2 in zip(out, M)]
        return out

    def transform(self, B: Sequence[Sequence]) -> RMStructure:
        """Same structure in new coordinates ``v = B v'``."""
        B = _qmat(B)
        Binv = la.inverse(B)
        rho = [la.matmul(Binv, la.matmul([list(r) for r in M], B)) for M in self.rho]
        return RMStructure(self.field, self.m, rho, QBilinearForm(la.congruence(self.psi.matrix(), B)))

    def with_psi(self, psi: QBilinearForm) -> RMStructure:
        return RMStructure(self.field, self.m, self.rho, psi)

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "m": self.m,
            "action": [[[format_rational(x) for x in row] for row in M] for M in self.rho],
            "psi": self.psi.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> RMStructure:
        F = NumberField.from_json(data["field"], attest_irreducible=True)
        return cls(F, int(data["m"]), _qmat_list(data["action"]), QBilinearForm(data["psi"]))


def _qmat_list(ms):
    return [_qmat(M) for M in ms]


@dataclass(frozen=True, eq=False)
class PeriodData:
    """``omega = x + i y`` with ``psi(x,x) = psi(y,y) = s < 0`` and ``psi(x,y) = 0``.

    ``x`` and ``y`` have entries in ``K``; ``embedding`` is the real place of
    ``K`` at which ``s`` is negative.
    """

    embedding: Embedding
    x: tuple
    y: tuple
    s: FieldElement

    @property
    def K(self) -> NumberField:
        return self.embedding.field

    @classmethod
    def make(cls, psi: QBilinearForm, x, y, embedding: Embedding | None = None) -> PeriodData:
        """Build and validate a period; ``embedding`` defaults to the only place of ``Q``."""
        if embedding is None:
            embedding = NumberField.rationals().embedding(0)
        K = embedding.field
        x = tuple(K(c) for c in x)
        y = tuple(K(c) for c in y)
        G = psi.matrix()
        s = K(la.bilinear(G, x, x))
        P_ = cls(embedding, x, y, s)
        P_.check(psi)
        return P_

    def check(self, psi: QBilinearForm) -> None:
        G = psi.matrix()
        if len(self.x) != len(G) or len(self.y) != len(G):
            raise InvalidPeriod("period vectors have the wrong length")
        sxx = la.bilinear(G, self.x, self.x)
        syy = la.bilinear(G, self.y, self.y)
        sxy = la.bilinear(G, self.x, self.y)
        if sxx != self.s or syy != self.s:
            raise InvalidPeriod("psi(x,x) and psi(y,y) must both equal s")
        if sxy != 0:
            raise InvalidPeriod("psi(x,y) must vanish")
        if sign_at(self.s, self.embedding) != -1:
            raise InvalidPeriod("s must be negative at the designated place")
        if la.rank([list(self.x), list(self.y)]) != 2:
            raise InvalidPeriod("x and y are dependent")

    def to_json(self) -> dict:
        return {
            "field": self.K.to_json(),
            "embedding": self.embedding.root_index,
            "x": [self.K(c).to_json() for c in self.x],
            "y": [self.K(c).to_json() for c in self.y],
            "s": self.s.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict, psi: QBilinearForm | None = None) -> PeriodData:
        K = NumberField.from_json(data["field"], attest_irreducible=True)
        emb = K.embedding(int(data["embedding"]))
        x = tuple(K(c) for c in data["x"])
        y = tuple(K(c) for c in data["y"])
        P_ = cls(emb, x, y, K(data["s"]))
        if psi is not None:
            P_.check(psi)
        return P_


# construction -----------------------------------------------------------------

def check_sign_pattern(a: Sequence[FieldElement], eps: Embedding) -> None:
    F = eps.field
    if not F.is_totally_real:
        raise NotTotallyReal("real multiplication needs a totally real field")
    neg = 0
    for k, ak in enumerate(a):
        for sigma in F.embeddings():
            s = sign_at(ak, sigma)
            if s == 0:
                raise BadSignPattern(k, sigma.root_index, f"a_{k} vanishes")
            if sigma.root_index != eps.root_index and s != 1:
                raise BadSignPattern(k, sigma.root_index)
            if sigma.root_index == eps.root_index and s == -1:
                neg += 1
                if neg > 2:
                    raise BadSignPattern(k, sigma.root_index, "more than two entries negative at eps")
    if neg != 2:
        bad = next(k for k, ak in enumerate(a) if sign_at(ak, eps) == 1)
        raise BadSignPattern(bad, eps.root_index, f"need exactly two entries negative at eps, found {neg}")


def diagonal_layout(F: NumberField, m: int) -> list[list[list[Fraction]]]:
    """``rho`` for ``F^m`` in the block coordinates."""
    blocks = [b.mult_matrix() for b in F.power_basis()]
    return [la.block_diag(*([B] * m)) for B in blocks]


def construct_rm_structure(F: NumberField, m: int, a: Sequence, eps: Embedding) -> RMStructure:
    """``psi = tr(Phi)`` for ``Phi = sum_k a_k x_k y_k`` on ``F^m``."""
    if m < 3:
        raise RankTooSmall(f"m = {m}: K3 type structures with real multiplication need m >= 3")
    if len(a) != m:
        raise ShapeMismatch(f"need {m} coefficients, got {len(a)}")
    a = [F(x) for x in a]
    check_sign_pattern(a, eps)
    phi = KBilinearForm([[a[i] if i == j else F.zero for j in range(m)] for i in range(m)], eps, field=F)
    psi = trace_form(phi)
    S = RMStructure(F, m, diagonal_layout(F, m), psi, phi)
    p, q = signature(psi)
    if (p, q) != (S.d - 2, 2):
        raise InvalidStructure(f"signature {(p, q)}")
    return S


def admissible_element(eps: Embedding, negative: bool, rng: random.Random | None = None,
                       box: int = 3, tries: int = 2000) -> FieldElement:
    """Small element with sign ``-`` (``negative``) or ``+`` at ``eps`` and ``+`` elsewhere."""
    F = eps.field
    rng = rng or random.Random(0)
    want = -1 if negative else 1
    for _ in range(tries):
        c = [rng.randint(-box, box) for _ in range(F.degree)]
        b = F(c)
        if b.is_zero():
            continue
        if sign_at(b, eps) != want:
            continue
        if all(sign_at(b, s) == 1 for s in F.embeddings() if s.root_index != eps.root_index):
            return b
    raise ValueError("no admissible element found in the search box")


def sample_coefficients(eps: Embedding, m: int, rng: random.Random | None = None,
                        equal_negatives: bool = True) -> list[FieldElement]:
    """Admissible ``a`` for :func:`construct_rm_structure`; ``a_1 = a_2`` by default."""
    rng = rng or random.Random(0)
    b1 = admissible_element(eps, True, rng)
    b2 = b1 if equal_negatives else admissible_element(eps, True, rng)
    rest = [admissible_element(eps, False, rng) for _ in range(m - 2)]
    return [b1, b2] + rest


# trace form and its inverse -------------------------------------------------------

def _fbasis_images(rho: Sequence, fbasis: Sequence[Sequence]) -> list[list[Fraction]]:
    """Columns ``rho(alpha^i) v_k`` in the order ``k*n + i``."""
    return [la.matvec([list(r) for r in M], v) for v in fbasis for M in rho]


def trace_form(phi: KBilinearForm, fbasis: Sequence[Sequence] | None = None,
               rho: Sequence | None = None) -> QBilinearForm:
    """``psi(v, w) = tr(Phi(v, w))``.

    Without ``fbasis`` the result is in the block coordinates of ``F^m``. With
    an ``F``-basis ``v_k`` of ``V`` (and the action ``rho``) the Gram of
    ``Phi`` is read in that basis and ``psi`` is returned in the original
    coordinates.
    """
    F = phi.field
    n, m = F.degree, phi.dim
    G = la.zeros(n * m, n * m)
    for k in range(m):
        for l in range(m):
            c = phi.gram[k][l]
            if c.is_zero():
                continue
            # tr(c alpha^(i+j)) from tr(c alpha^e), e < 2n-1
            ext = _extended_traces(c, 2 * n - 1)
            for i in range(n):
                for j in range(n):
                    G[k * n + i][l * n + j] = ext[i + j]
    if fbasis is None:
        return QBilinearForm(G)
    Pm = la.transpose(_fbasis_images(rho, fbasis))
    Pinv = la.inverse(Pm)
    return QBilinearForm(la.congruence(G, Pinv))


def _extended_traces(c: FieldElement, count: int) -> list[Fraction]:
    out = []
    cur = c
    g = c.field.gen
    for _ in range(count):
        out.append(cur.trace())
        cur = cur * g
    return out


def f_basis(S: RMStructure) -> list[list[Fraction]]:
    """Greedy ``F``-basis of ``V`` drawn from the standard vectors."""
    d = S.d
    chosen: list[list[Fraction]] = []
    span: list[list[Fraction]] = []
    for j in range(d):
        e = [Fraction(int(i == j)) for i in range(d)]
        if span and la.rank(span + [e]) == len(span):
            continue
        chosen.append(e)
        span.extend(la.matvec([list(r) for r in M], e) for M in S.rho)
        if len(chosen) == S.m:
            break
    if la.rank(span) != d:
        raise InvalidStructure("V is not free over F")
    return chosen


def recover_F_bilinear(S: RMStructure) -> tuple[KBilinearForm, list[list[Fraction]]]:
    """The ``F``-bilinear ``Phi`` with ``tr(Phi) = psi``, and the ``F``-basis it is written in.

    ``Phi(v_k, v_l)`` is the unique ``phi`` with ``tr(alpha^i phi) = psi(alpha^i v_k, v_l)``.
    """
    F = S.field
    n = F.degree
    T = F.trace_gram
    if la.det(T) == 0:
        raise DegenerateTraceForm("trace form of F is degenerate")
    basis = f_basis(S)
    G = S.psi.matrix()
    rho = [[list(r) for r in M] for M in S.rho]
    gram = []
    for vk in basis:
        row = []
        moved = [la.matvec(M, vk) for M in rho]
        for vl in basis:
            rhs = [la.bilinear(G, moved[i], vl) for i in range(n)]
            row.append(F(la.solve(T, rhs)))
        gram.append(row)
    return KBilinearForm(gram, field=F), basis


def structure_trace_form(S: RMStructure, phi: KBilinearForm, fbasis) -> QBilinearForm:
    return trace_form(phi, fbasis, S.rho)


# eigenspaces -------------------------------------------------------------------

def eigenspace(S: RMStructure, sigma: Embedding) -> list[list[FieldElement]]:
    """Basis over ``F`` of the ``sigma``-eigenspace ``{v : rho(a) v = sigma(a) v}``.

    The eigenvalue ``sigma(alpha)`` is represented by ``alpha`` itself, read at
    the place ``sigma``.
    """
    F = S.field
    A = _lift(S.action(F.gen), F)
    M = [[A[i][j] - (F.gen if i == j else F.zero) for j in range(S.d)] for i in range(S.d)]
    ker = la.nullspace(M, S.d, one=F.one)
    if len(ker) != S.m:
        raise InvalidStructure(f"eigenspace has dimension {len(ker)}, expected {S.m}")
    return ker


def eigenspace_signature(S: RMStructure, sigma: Embedding) -> tuple[int, int]:
    F = S.field
    N = eigenspace(S, sigma)
    G = _lift(S.psi.matrix(), F)
    H = [[la.bilinear(G, u, v) for v in N] for u in N]
    return signature(KBilinearForm(H, sigma, field=F))


def embedding_signatures(S: RMStructure) -> list[tuple[int, int]]:
    return [eigenspace_signature(S, s) for s in S.field.embeddings()]


def distinguished_embedding(S: RMStructure) -> Embedding:
    """The unique place with eigenspace signature ``(m-2, 2)``."""
    hits = [s for s in S.field.embeddings() if eigenspace_signature(S, s) == (S.m - 2, 2)]
    if len(hits) != 1:
        raise InvalidStructure(f"{len(hits)} places with signature (m-2, 2)")
    return hits[0]


# double cover example --------------------------------------------------------------

def _is_squarefree(d: int) -> bool:
    p = 2
    while p * p <= d:
        if d % (p * p) == 0:
            return False
        p += 1
    return True


def two_squares(d: int) -> tuple[int, int]:
    """``(e, c)`` with ``e^2 + c^2 = d``, ``e >= 1`` smallest."""
    e = 1
    while e * e <= d:
        c2 = d - e * e
        c = int(c2 ** 0.5)
        while c * c > c2:
            c -= 1
        while (c + 1) ** 2 <= c2:
            c += 1
        if c * c == c2 and c > 0:
            return e, c
        e += 1
    raise NotSumOfTwoSquares(f"{d} is not a sum of two nonzero squares")


def traceless_block(e: int, c: int, r: int) -> list[list[Fraction]]:
    return [[Fraction(e), Fraction(c * r)], [Fraction(c), Fraction(-e)]]


def build_double_cover_example(d: int, ec: tuple[int, int] | None = None) -> RMStructure:
    """``Q(sqrt d)`` acting on ``Q^6`` with ``psi = diag(1,-1) + diag(1,-1) + diag(1,1)``."""
    if d <= 1 or d % 2 == 0:
        raise NotSumOfTwoSquares(f"d = {d} must be odd and > 1")
    if not _is_squarefree(d):
        raise NotSquarefree(f"{d} is not squarefree")
    e, c = ec if ec is not None else two_squares(d)
    if e * e + c * c != d:
        raise NotSumOfTwoSquares(f"{e}^2 + {c}^2 != {d}")
    dp = (d - 1) // 2
    rs = (-1, -1, 1)
    G = la.block_diag(*[[[Fraction(1), Fraction(0)], [Fraction(0), Fraction(r)]] for r in rs])
    blocks = [traceless_block(dp + 1, dp, -1), traceless_block(dp + 1, dp, -1), traceless_block(e, c, 1)]
    a = la.block_diag(*blocks)
    F = NumberField.quadratic(d)
    S = RMStructure(F, 3, [la.identity(6), a], QBilinearForm(G))
    return S


# periods -------------------------------------------------------------------------

def _decimal_roots(F: NumberField, digits: int) -> list[Decimal]:
    out = []
    tol = Fraction(1, 10 ** (digits + 5))
    for e in F.embeddings():
        lo, hi = e.interval()
        while hi - lo > tol:
            lo, hi = F.refine_root(e.root_index)
        mid = (lo + hi) / 2
        out.append(Decimal(mid.numerator) / Decimal(mid.denominator))
    return out


def sqrt_in_field(r: FieldElement, digits: int = 60) -> FieldElement | None:
    """A square root of ``r`` inside its own field, or ``None``.

    Candidates come from the conjugates ``+-sqrt(sigma(r))`` solved through
    the Vandermonde system at high precision; only an exact ``t*t == r``
    check is trusted. For an integral generator, ``den(r) * t`` is an
    algebraic integer, so the coordinates of ``t`` have denominators dividing
    ``den(r) * disc``; candidates are rounded on that grid with precision
    scaled to its size.
    """
    F = r.field
    if r.is_zero():
        return F.zero
    if not F.is_totally_real:
        raise NotTotallyReal("square roots are searched through real embeddings")
    if any(sign_at(r, s) < 0 for s in F.embeddings()):
        return None
    n = F.degree
    if n == 1:
        q = r.coeffs[0]
        rn, rd = _isqrt(q.numerator), _isqrt(q.denominator)
        return F.scalar(Fraction(rn, rd)) if rn is not None and rd is not None else None
    grid = None
    if all(c.denominator == 1 for c in F.min_poly):
        den = 1
        for c in r.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        grid = den * abs(int(discriminant_det(F)))
        height = max(max(abs(c.numerator), c.denominator) for c in r.coeffs)
        spread = max(abs(c) for c in F.min_poly) + 1
        digits = max(digits, 30 + len(str(grid)) + len(str(height)) + n * len(str(spread)))
    with localcontext() as ctx:
        ctx.prec = digits + 10
        roots = _decimal_roots(F, digits)
        vals = [sum((Decimal(c.numerator) / Decimal(c.denominator)) * x ** i
                    for i, c in enumerate(r.coeffs)) for x in roots]
        sq = [v.sqrt() if v > 0 else Decimal(0) for v in vals]
        V = [[x ** i for i in range(n)] for x in roots]
        for signs in product((1, -1), repeat=n - 1):
            rhs = [sq[0]] + [s * v for s, v in zip(signs, sq[1:])]
            sol = _decimal_solve(V, rhs)
            if grid:
                t = F([Fraction(int((c * grid).to_integral_value()), grid) for c in sol])
            else:
                t = F([Fraction(str(c)).limit_denominator(10 ** 18) for c in sol])
            if t * t == r:
                return t
    return None


def _isqrt(k: int) -> int | None:
    if k < 0:
        return None
    s = int(k ** 0.5)
    while s * s > k:
        s -= 1
    while (s + 1) ** 2 <= k:
        s += 1
    return s if s * s == k else None


def _decimal_solve(A, b):
    n = len(A)
    M = [list(A[i]) + [b[i]] for i in range(n)]
    for c in range(n):
        p = max(range(c, n), key=lambda i: abs(M[i][c]))
        M[c], M[p] = M[p], M[c]
        for i in range(n):
            if i != c:
                f = M[i][c] / M[c][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return [M[i][n] / M[i][i] for i in range(n)]


@dataclass(frozen=True)
class QuadraticLayer:
    """``L = F(sqrt r)`` as an absolute field, with ``alpha`` and ``sqrt r`` expressed in ``L``."""

    L: NumberField
    embedding: Embedding
    alpha: FieldElement
    root: FieldElement

    def image(self, a: FieldElement) -> FieldElement:
        out = self.L.zero
        for c in reversed(a.coeffs):
            out = out * self.alpha + c
        return out


def adjoin_square_root(r: FieldElement, eps: Embedding) -> QuadraticLayer:
    """Primitive element ``gamma = sqrt(r) + k alpha`` of ``F(sqrt r)`` for a non-square ``r``.

    The designated place of ``L`` restricts to ``eps`` on ``F`` and makes
    ``sqrt r`` positive.
    """
    F = r.field
    n = F.degree
    if sqrt_in_field(r) is not None:
        # F[Y]/(Y^2 - r) would split, and the irreducibility attested below would be false
        raise ValueError("r is a square in its field; no quadratic layer needed")

    def mul(u, v):
        return (u[0] * v[0] + u[1] * v[1] * r, u[0] * v[1] + u[1] * v[0])

    def coords(u):
        return list(u[0].coeffs) + list(u[1].coeffs)

    for k in range(0, 50):
        gamma = (F.gen * k, F.one)
        pw = [(F.one, F.zero)]
        for _ in range(2 * n):
            pw.append(mul(pw[-1], gamma))
        cols = [coords(u) for u in pw]
        M = la.transpose(cols[:2 * n])
        if la.det(M) == 0:
            continue
        c = la.solve(M, cols[2 * n])
        mu = [-x for x in c] + [Fraction(1)]
        if len(P.gcd(mu, P.deriv(mu))) > 1:
            continue
        L = NumberField.from_poly(mu, attest_irreducible=True, name="gamma")
        alpha_L = L(la.solve(M, coords((F.gen, F.zero))))
        root_L = L(la.solve(M, coords((F.zero, F.one))))
        emb = _matching_place(L, alpha_L, root_L, eps)
        return QuadraticLayer(L, emb, alpha_L, root_L)
    raise RuntimeError("no primitive element found")


def _matching_place(L: NumberField, alpha_L: FieldElement, root_L: FieldElement,
                    eps: Embedding) -> Embedding:
    F = eps.field
    for tau in L.embeddings():
        if sign_at(root_L, tau) != 1:
            continue
        if F.degree == 1 or _restricts_to(tau, alpha_L, eps):
            return tau
    raise RuntimeError("no place of L above eps with positive square root")


def _restricts_to(tau: Embedding, alpha_L: FieldElement, eps: Embedding) -> bool:
    lo_e, hi_e = eps.interval()
    poly = P.strip(alpha_L.coeffs)
    for _ in range(512):
        lo, hi = tau.interval()
        a, b = P.interval_eval(poly, lo, hi) if lo != hi else (P.evaluate(poly, lo),) * 2
        if lo_e <= a and b <= hi_e:
            return True
        if b < lo_e or a > hi_e:
            return False
        tau.field.refine_root(tau.root_index)
    raise RuntimeError("place matching did not converge")


def construct_period(S: RMStructure, eps: Embedding) -> PeriodData:
    """A period spanning a negative plane of the ``eps``-eigenspace.

    Coordinates lie in ``F`` when the two negative diagonal entries of the
    restricted form have a square ratio, and otherwise in ``F(sqrt ratio)``.
    """
    F = S.field
    N = eigenspace(S, eps)
    G = _lift(S.psi.matrix(), F)
    H = [[la.bilinear(G, u, v) for v in N] for u in N]
    diag, B = diagonalize(KBilinearForm(H, eps, field=F))
    neg = [i for i, c in enumerate(diag) if sign_at(c, eps) == -1]
    if len(neg) < 2:
        raise NoNegativePlane(f"eps-eigenspace has {len(neg)} negative directions")
    i1, i2 = neg[:2]
    Nt = la.transpose(N)  # columns are eigenvectors
    u1 = la.matvec(Nt, [B[r][i1] for r in range(len(B))])
    u2 = la.matvec(Nt, [B[r][i2] for r in range(len(B))])
    c1, c2 = diag[i1], diag[i2]
    ratio = c1 / c2
    t = sqrt_in_field(ratio)
    if t is not None:
        x = [F(v) for v in u1]
        y = [t * v for v in u2]
        P_ = PeriodData(eps, tuple(x), tuple(y), c1)
    else:
        layer = adjoin_square_root(ratio, eps)
        x = [layer.image(F(v)) for v in u1]
        y = [layer.root * layer.image(F(v)) for v in u2]
        P_ = PeriodData(layer.embedding, tuple(x), tuple(y), layer.image(c1))
    P_.check(S.psi)
    return P_


# simplicity -----------------------------------------------------------------------

@dataclass(frozen=True)
class SimplicityResult:
    """``simple`` iff no nonzero rational ``v`` is ``psi``-orthogonal to ``x`` and ``y``."""

    kernel: tuple

    @property
    def simple(self) -> bool:
        return not self.kernel

    def to_json(self) -> dict:
        return {"simple": self.simple,
                "kernel": [[format_rational(c) for c in v] for v in self.kernel]}


def simplicity_check(psi: QBilinearForm | RMStructure, P_: PeriodData) -> SimplicityResult:
    if isinstance(psi, RMStructure):
        psi = psi.psi
    K = P_.K
    G = _lift(psi.matrix(), K)
    rows = [la.matvec(la.transpose(G), list(P_.x)), la.matvec(la.transpose(G), list(P_.y))]
    Q = la.rational_expand(rows, K.degree)
    ker = la.nullspace(Q, psi.dim)
    return SimplicityResult(tuple(tuple(v) for v in ker))


# twisting and polarizations -------------------------------------------------------------

@dataclass(frozen=True)
class TwistedForm:
    psi: QBilinearForm
    a: FieldElement
    polarization: bool


def twist_polarization(S: RMStructure, a) -> TwistedForm:
    """``psi_a(v, w) = psi(a v, w)``; flagged as a polarization iff ``a`` is totally positive."""
    a = S.field(a)
    if a.is_zero():
        raise ZeroElement("twist by zero")
    A = S.action(a)
    Ga = la.matmul(la.transpose(A), S.psi.matrix())
    return TwistedForm(QBilinearForm(Ga), a, is_totally_positive(a))


def is_polarization(psi2: QBilinearForm, S: RMStructure, P_: PeriodData) -> bool:
    """``psi2`` is negative definite on the period plane and positive definite on its complement.

    The complement ``V_0`` is the ``psi``-orthogonal of the plane. Raises
    :class:`NotCompatible` when ``psi2`` is not self-adjoint for ``F``, not
    rotation invariant on the plane, or couples the plane with ``V_0``.
    """
    G2 = psi2.matrix()
    for M in S.rho:
        M = [list(r) for r in M]
        if la.matmul(la.transpose(M), G2) != la.matmul(G2, M):
            raise NotCompatible("F does not act self-adjointly for the form")
    K, emb = P_.K, P_.embedding
    x, y = list(P_.x), list(P_.y)
    G2K = _lift(G2, K)
    GK = _lift(S.psi.matrix(), K)
    pxx, pyy, pxy = (la.bilinear(G2K, x, x), la.bilinear(G2K, y, y), la.bilinear(G2K, x, y))
    if pxx != pyy or pxy != 0:
        raise NotCompatible("form is not invariant under rotation of the period plane")
    rows = [la.matvec(GK, x), la.matvec(GK, y)]
    V0 = la.nullspace(rows, S.d, one=K.one)
    for v in V0:
        if la.bilinear(G2K, x, v) != 0 or la.bilinear(G2K, y, v) != 0:
            raise NotCompatible("period plane is not orthogonal to its complement")
    plane = inertia(KBilinearForm([[pxx, pxy], [pxy, pyy]], emb, field=K))
    H0 = [[la.bilinear(G2K, u, v) for v in V0] for u in V0]
    rest = inertia(KBilinearForm(H0, emb, field=K)) if V0 else (0, 0, 0)
    return plane == (0, 2, 0) and rest == (S.d - 2, 0, 0)


# determinant identities ---------------------------------------------------------------

def det_identity_check(S: RMStructure) -> dict:
    """Square classes of ``det psi`` and ``D_F^m N(det Phi)``."""
    phi, _ = recover_F_bilinear(S)
    lhs = square_class(S.psi.det())
    DF = field_discriminant(S.field)
    nd = phi.det().norm()
    rhs = square_class(Fraction(DF) ** S.m * nd)
    return {"det_psi_class": lhs, "predicted_class": rhs, "ok": lhs == rhs}


def twist_det_check(S: RMStructure, a) -> dict:
    a = S.field(a)
    tw = twist_polarization(S, a)
    lhs = square_class(tw.psi.det())
    rhs = square_class(a.norm() ** S.m * S.psi.det())
    return {"det_twist_class": lhs, "predicted_class": rhs, "ok": lhs == rhs}
