"""Clifford algebras of a symmetric bilinear form and the Kuga-Satake complex structure.

Monomials are bitmasks over the generators ``e_0 .. e_{d-1}``; ``e_S`` is the
product of the generators in ``S`` in increasing order. Coefficients may be
rationals or elements of a number field; the Gram matrix itself stays rational
when possible so that monomial products are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import kernels
from . import linalg as la
from .errors import AlgebraMismatch, BadSeed, InvalidPeriod, NotOnCircle, NoValidSign
from .numfield import Embedding, FieldElement, NumberField, format_rational, parse_rational
from .quadform import KBilinearForm, QBilinearForm, diagonalize, inertia
from .rmhodge import PeriodData


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _is_zero(c) -> bool:
    return c == 0


class CliffordAlgebra:
    """``C(psi)``: generators ``e_i`` with ``e_i e_j + e_j e_i = 2 g_ij``."""

    def __init__(self, gram: Sequence[Sequence]):
        if isinstance(gram, (QBilinearForm, KBilinearForm)):
            gram = gram.matrix()
        self.gram = [[x if isinstance(x, FieldElement) else parse_rational(x) for x in row] for row in gram]
        if not la.is_symmetric(self.gram):
            raise ValueError("Gram matrix is not symmetric")
        self.d = len(self.gram)
        if self.d > 20:
            raise ValueError("at most 20 generators are supported")
        self.orthogonal = all(self.gram[i][j] == 0 for i in range(self.d) for j in range(self.d) if i != j)
        self._memo: dict = {}
        self._products: dict = {}
        self._reversal: dict = {}
        self._tau: dict | None = None

    @property
    def dim(self) -> int:
        return 1 << self.d

    @property
    def even_dim(self) -> int:
        return 1 << (self.d - 1) if self.d else 1

    def masks(self, even: bool = False) -> list[int]:
        return [s for s in range(self.dim) if not even or _popcount(s) % 2 == 0]

    def __eq__(self, other) -> bool:
        return isinstance(other, CliffordAlgebra) and self.gram == other.gram

    def __hash__(self) -> int:
        return hash(self.d)

    # monomial arithmetic
    def monomial_product(self, a: int, b: int) -> dict:
        key = (a, b)
        hit = self._products.get(key)
        if hit is not None:
            return hit
        if self.orthogonal:
            c = kernels.reorder_sign(a, b)
            common = a & b
            i = 0
            coeff = Fraction(c)
            while common:
                if common & 1:
                    coeff = coeff * self.gram[i][i]
                common >>= 1
                i += 1
            out = {} if coeff == 0 else {a ^ b: coeff}
        else:
            out = kernels.general_product(a, b, self.gram, self._memo)
        self._products[key] = out
        return out

    # element constructors
    def element(self, terms: Mapping[int, object]) -> CliffordElement:
        return CliffordElement(self, {m: c for m, c in terms.items() if not _is_zero(c)})

    def scalar(self, c) -> CliffordElement:
        return self.element({0: c})

    @property
    def one(self) -> CliffordElement:
        return self.scalar(Fraction(1))

    def generator(self, i: int) -> CliffordElement:
        return self.element({1 << i: Fraction(1)})

    def monomial(self, mask: int) -> CliffordElement:
        return self.element({mask: Fraction(1)})

    def vector(self, v: Sequence) -> CliffordElement:
        if len(v) != self.d:
            raise AlgebraMismatch(f"vector of length {len(v)} in an algebra with {self.d} generators")
        return self.element({1 << i: c for i, c in enumerate(v)})

    def multiply(self, u: CliffordElement, v: CliffordElement) -> CliffordElement:
        if u.algebra is not self or v.algebra is not self:
            if u.algebra != self or v.algebra != self:
                raise AlgebraMismatch("elements of different Clifford algebras")
        out: dict = {}
        for a, ca in u.terms.items():
            for b, cb in v.terms.items():
                cab = ca * cb
                for m, c in self.monomial_product(a, b).items():
                    out[m] = out.get(m, 0) + c * cab
        return self.element(out)

    def reversal_monomial(self, mask: int) -> CliffordElement:
        """``e_{i_k} ... e_{i_1}`` for ``e_S = e_{i_1} ... e_{i_k}``."""
        hit = self._reversal.get(mask)
        if hit is not None:
            return hit
        k = _popcount(mask)
        if self.orthogonal or k < 2:
            sign = -1 if (k * (k - 1) // 2) % 2 else 1
            out = self.element({mask: Fraction(sign)})
        else:
            out = self.one
            for i in reversed([i for i in range(self.d) if mask >> i & 1]):
                out = out * self.generator(i)
        self._reversal[mask] = out
        return out

    def reversal(self, u: CliffordElement) -> CliffordElement:
        out = self.scalar(0)
        for m, c in u.terms.items():
            out = out + self.reversal_monomial(m) * c
        return out

    def left_matrix(self, u: CliffordElement, even: bool = True) -> list[list]:
        """Matrix of ``c -> u c`` on the (even) monomial basis; column ``j`` is the image of basis ``j``."""
        basis = self.masks(even)
        index = {m: i for i, m in enumerate(basis)}
        n = len(basis)
        M = [[0] * n for _ in range(n)]
        for j, b in enumerate(basis):
            img = u * self.monomial(b)
            for m, c in img.terms.items():
                if m not in index:
                    raise ValueError("element does not preserve the chosen subspace")
                M[index[m]][j] = c
        return M

    def _tau_table(self) -> dict:
        if self._tau is None:
            even = self.masks(True)
            table = {}
            for s in even:
                t = Fraction(0)
                for b in even:
                    t += self.monomial_product(s, b).get(b, 0)
                table[s] = t
            self._tau = table
        return self._tau

    def tau(self, u: CliffordElement):
        """Trace of left multiplication by an even ``u`` on ``C^+``."""
        table = self._tau_table()
        acc = 0
        for m, c in u.terms.items():
            if _popcount(m) % 2:
                raise ValueError("tau is defined on the even part")
            t = table[m]
            if t:
                acc = c * t + acc
        return acc


@dataclass(frozen=True, eq=False)
class CliffordElement:
    algebra: CliffordAlgebra
    terms: dict

    def _wrap(self, other) -> CliffordElement:
        if isinstance(other, CliffordElement):
            return other
        return self.algebra.scalar(other)

    def __add__(self, other):
        o = self._wrap(other)
        if o.algebra != self.algebra:
            raise AlgebraMismatch("elements of different Clifford algebras")
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out.get(m, 0) + c
        return self.algebra.element(out)

    __radd__ = __add__

    def __neg__(self):
        return self.algebra.element({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        if isinstance(other, CliffordElement):
            return self.algebra.multiply(self, other)
        return self.algebra.element({m: c * other for m, c in self.terms.items()})

    def __rmul__(self, other):
        return self.algebra.element({m: other * c for m, c in self.terms.items()})

    def __truediv__(self, other):
        return self * (1 / other) if isinstance(other, FieldElement) else self * (Fraction(1) / other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CliffordElement):
            other = self.algebra.scalar(other)
        diff = self - other
        return not diff.terms

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.terms)))

    def is_even(self) -> bool:
        return all(_popcount(m) % 2 == 0 for m in self.terms)

    def coefficient(self, mask: int):
        return self.terms.get(mask, 0)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            idx = "".join(str(i + 1) for i in range(self.algebra.d) if m >> i & 1)
            parts.append(f"({self.terms[m]!r})*e{idx}" if m else f"({self.terms[m]!r})")
        return " + ".join(parts)

    def to_json(self) -> dict:
        out = {}
        for m in sorted(self.terms):
            c = self.terms[m]
            out[str(m)] = c.to_json() if isinstance(c, FieldElement) else format_rational(c)
        return out

    @classmethod
    def from_json(cls, algebra: CliffordAlgebra, data: Mapping, field: NumberField | None = None):
        terms = {int(k): (field(v) if field is not None else parse_rational(v)) for k, v in data.items()}
        return algebra.element(terms)


def clifford_multiply(u: CliffordElement, v: CliffordElement) -> CliffordElement:
    return u.algebra.multiply(u, v)


# Kuga-Satake ---------------------------------------------------------------------

@dataclass(eq=False)
class KSStructure:
    algebra: CliffordAlgebra
    J: CliffordElement
    period: PeriodData
    riemann_seed: tuple | None = None
    E: list | None = field(default=None, repr=False)

    @property
    def embedding(self) -> Embedding:
        return self.period.embedding

    def J_matrix(self) -> list[list]:
        return self.algebra.left_matrix(self.J)


def kuga_satake_J(A: CliffordAlgebra, P: PeriodData) -> KSStructure:
    """``J = x y / (-s)``: left multiplication by it is a complex structure on ``C^+``."""
    if any(isinstance(x, FieldElement) for row in A.gram for x in row):
        raise InvalidPeriod("the Clifford algebra must be built on the rational form psi")
    P.check(QBilinearForm(A.gram))
    xs, ys, s = list(P.x), list(P.y), P.s
    if P.K.degree == 1:
        xs, ys, s = [c.rational() for c in xs], [c.rational() for c in ys], s.rational()
    J = (A.vector(xs) * A.vector(ys)) * (1 / (-s))
    if J * J != -1:
        raise InvalidPeriod("J^2 != -1")
    return KSStructure(A, J, P)


def _circle_point(a, b):
    a, b = parse_rational(a) if not isinstance(a, FieldElement) else a, \
        parse_rational(b) if not isinstance(b, FieldElement) else b
    if a * a + b * b != 1:
        raise NotOnCircle(f"{a}^2 + {b}^2 != 1")
    return a, b


def weight_one_action(K: KSStructure, a, b) -> list[list]:
    """Matrix of ``c -> a c + b J c`` on ``C^+`` for ``a + b i`` on the unit circle."""
    a, b = _circle_point(a, b)
    LJ = K.J_matrix()
    n = len(LJ)
    return [[(a if i == j else 0) + b * LJ[i][j] for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class RiemannForm:
    gram: tuple
    sign: int
    checks: dict

    def to_json(self) -> dict:
        return {"sign": self.sign, "checks": dict(self.checks),
                "gram": [[format_rational(x) for x in row] for row in self.gram]}


def _seed_plane_ok(G, e1, e2) -> bool:
    # same sign as the period plane, which is negative for psi
    p11, p22, p12 = la.bilinear(G, e1, e1), la.bilinear(G, e2, e2), la.bilinear(G, e1, e2)
    return p12 == 0 and p11 < 0 and p22 < 0


def default_seed(A: CliffordAlgebra) -> tuple[list[Fraction], list[Fraction]]:
    """Two rational ``psi``-orthogonal vectors spanning a negative plane."""
    diag, B = diagonalize(QBilinearForm(A.gram))
    neg = [i for i, c in enumerate(diag) if c < 0]
    if len(neg) < 2:
        raise BadSeed("psi has no negative plane")
    cols = la.transpose(B)
    return cols[neg[0]], cols[neg[1]]


def riemann_form(K: KSStructure, e1: Sequence | None = None, e2: Sequence | None = None,
                 sign: int | None = None) -> RiemannForm:
    """``E(u, v) = sign * tau(e1 e2 iota(u) v)`` on ``C^+``, returned only once verified.

    ``e1, e2`` must be rational, ``psi``-orthogonal and span a plane on
    which ``psi`` is negative definite, like the period plane; with a
    positive seed plane no sign makes ``E(., J.)`` definite.
    The checks are: ``E`` alternating, ``E(J., J.) = E`` and ``E(., J.)``
    symmetric positive definite at the designated place.
    """
    A = K.algebra
    G = A.gram
    if e1 is None or e2 is None:
        e1, e2 = default_seed(A)
    e1 = [parse_rational(c) for c in e1]
    e2 = [parse_rational(c) for c in e2]
    if len(e1) != A.d or len(e2) != A.d or not _seed_plane_ok(G, e1, e2):
        raise BadSeed("seed vectors must be psi-orthogonal with psi(e1,e1) < 0 and psi(e2,e2) < 0")
    alpha = A.vector(e1) * A.vector(e2)
    basis = A.masks(even=True)
    rev = [A.reversal_monomial(m) for m in basis]
    left = [alpha * r for r in rev]
    n = len(basis)
    E = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            E[i][j] = A.tau(left[i] * A.monomial(basis[j]))
    emb = K.embedding
    signs = (sign,) if sign is not None else (1, -1)
    base, (p, q, z) = _verify(E, K.J_matrix(), emb.field, emb)
    tried = {}
    for s in signs:
        # negating E keeps every check except definiteness, where p and q swap
        checks = dict(base, positive_definite=base["symmetric"] and
                      (p if s == 1 else q, z) == (len(E), 0))
        tried[s] = checks
        if all(checks.values()):
            Es = [[s * x for x in row] for row in E]
            K.riemann_seed = (tuple(e1), tuple(e2))
            K.E = Es
            return RiemannForm(tuple(tuple(r) for r in Es), s, checks)
    raise NoValidSign(f"no sign passes: {tried}")


def _verify(E, LJ, KF: NumberField, emb: Embedding) -> tuple[dict, tuple[int, int, int]]:
    """Sign-independent checks on ``E`` plus the inertia of ``E(., J.)``."""
    n = len(E)
    alternating = all(E[i][i] == 0 and E[i][j] == -E[j][i] for i in range(n) for j in range(i, n))
    LK = [[KF(x) for x in row] for row in LJ]
    EJ = la.matmul(E, LK)  # E stays rational; only L_J carries field entries
    invariant = la.matmul(la.transpose(LK), EJ) == [[KF(x) for x in row] for row in E]
    sym = la.is_symmetric(EJ)
    pqz = inertia(KBilinearForm(EJ, emb, field=KF)) if sym else (0, 0, n)
    return {"alternating": alternating, "J_invariant": invariant, "symmetric": sym}, pqz


def eigenvalue_balance(K: KSStructure) -> tuple[int, int]:
    """Dimensions of the ``+i`` and ``-i`` eigenspaces of ``L_J`` on ``C^+ (x) C``.

    ``L_J^2 = -1`` makes ``(1 -+ i L_J)/2`` complementary projectors; their
    ranks equal ``n/2 +- tr(L_J)/(2i)`` and ``tr(L_J)`` is real, hence zero.
    """
    LJ = K.J_matrix()
    n = len(LJ)
    KF = K.embedding.field
    sq = la.matmul([[KF(x) for x in r] for r in LJ], [[KF(x) for x in r] for r in LJ])
    if any(sq[i][j] != (-1 if i == j else 0) for i in range(n) for j in range(n)):
        raise InvalidPeriod("L_J does not square to -1")
    tr = sum((KF(LJ[i][i]) for i in range(n)), KF.zero)
    if tr != 0:
        raise InvalidPeriod("L_J has nonzero trace")
    return n // 2, n // 2
