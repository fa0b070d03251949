"""Corestriction from a real quadratic field to ``Q`` and its embedding in ``C^+(psi)``.

For ``F`` quadratic with conjugation ``g``, ``Z = R (x)_F R_g`` has basis
``b_i (x) b_j``; the Galois involution is ``theta(sum z_ij b_i(x)b_j) =
sum g(z_ij) b_j(x)b_i`` and the corestriction is its fixed algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .cliffordks import CliffordAlgebra, CliffordElement
from .errors import NotAssociative, NotQuadratic, NotQuadraticField, VerificationFailed
from .numfield import FieldElement, NumberField, format_rational
from .rmhodge import RMStructure, recover_F_bilinear

MAX_DIM = 8


def conjugate(a: FieldElement) -> FieldElement:
    """Nontrivial automorphism of a quadratic field: ``g(a) = tr(a) - a``."""
    return a.field.scalar(a.trace()) - a


def _require_quadratic(F: NumberField, exc=NotQuadratic) -> None:
    if F.degree != 2:
        raise exc(f"field of degree {F.degree} is not quadratic")


# F (x)_Q F ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TensorFF:
    """Element ``sum c_ab alpha^a (x) alpha^b`` of ``F (x)_Q F`` (``a, b`` in {0, 1})."""

    field: NumberField
    c: tuple  # ((c00, c01), (c10, c11))

    def __add__(self, o: TensorFF) -> TensorFF:
        return TensorFF(self.field, tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.c, o.c)))

    def __sub__(self, o: TensorFF) -> TensorFF:
        return TensorFF(self.field, tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(self.c, o.c)))

    def __mul__(self, o: TensorFF) -> TensorFF:
        F = self.field
        pw = F.power_basis()
        out = [[Fraction(0)] * 2 for _ in range(2)]
        for a in range(2):
            for b in range(2):
                if not self.c[a][b]:
                    continue
                for a2 in range(2):
                    for b2 in range(2):
                        k = self.c[a][b] * o.c[a2][b2]
                        if not k:
                            continue
                        left = (pw[a] * pw[a2]).coeffs
                        right = (pw[b] * pw[b2]).coeffs
                        for i in range(2):
                            for j in range(2):
                                out[i][j] += k * left[i] * right[j]
        return TensorFF(F, tuple(tuple(r) for r in out))

    def __eq__(self, o) -> bool:
        return isinstance(o, TensorFF) and self.c == o.c

    @classmethod
    def pure(cls, x: FieldElement, y: FieldElement) -> TensorFF:
        return cls(x.field, tuple(tuple(x.coeffs[a] * y.coeffs[b] for b in range(2)) for a in range(2)))

    def to_json(self) -> list:
        return [[format_rational(x) for x in r] for r in self.c]


def splitting_idempotents(F: NumberField) -> tuple[TensorFF, TensorFF]:
    """``pi_pm = (1 (x) 1 +- delta (x) delta / delta^2) / 2`` with ``delta = alpha - g(alpha)``.

    For ``F = Q(sqrt d)``, ``delta = 2 sqrt d`` and this is ``(1 (x) 1 +- sqrt d (x) sqrt d / d) / 2``.
    ``pi_plus`` is the one with ``(a (x) 1) pi = (1 (x) a) pi``.
    """
    _require_quadratic(F)
    delta = F.gen - conjugate(F.gen)
    dd = (delta * delta).rational()
    one = TensorFF.pure(F.one, F.one)
    dt = TensorFF.pure(delta, delta)
    half = Fraction(1, 2)
    scale = lambda t, k: TensorFF(F, tuple(tuple(k * x for x in r) for r in t.c))  # noqa: E731
    plus = scale(one + scale(dt, 1 / dd), half)
    minus = scale(one - scale(dt, 1 / dd), half)
    return plus, minus


# F-algebras --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class FAlgebra:
    """Structure constants ``b_i b_k = sum_p c[i][k][p] b_p`` over ``F``; ``unit`` in coordinates."""

    field: NumberField
    constants: tuple
    unit: tuple

    @property
    def dim(self) -> int:
        return len(self.unit)

    def mul(self, u: Sequence, v: Sequence) -> list:
        r = self.dim
        F = self.field
        out = [F.zero] * r
        for i, ui in enumerate(u):
            if ui.is_zero():
                continue
            for k, vk in enumerate(v):
                if vk.is_zero():
                    continue
                w = ui * vk
                for p, c in enumerate(self.constants[i][k]):
                    if not c.is_zero():
                        out[p] = out[p] + w * c
        return out

    def basis_vector(self, i: int) -> list:
        F = self.field
        return [F.one if j == i else F.zero for j in range(self.dim)]

    def check(self) -> None:
        r = self.dim
        for i in range(r):
            bi = self.basis_vector(i)
            if self.mul(list(self.unit), bi) != bi or self.mul(bi, list(self.unit)) != bi:
                raise NotAssociative("unit is not a two-sided identity")
            for j in range(r):
                bij = self.mul(bi, self.basis_vector(j))
                for k in range(r):
                    bk = self.basis_vector(k)
                    if self.mul(bij, bk) != self.mul(bi, self.mul(self.basis_vector(j), bk)):
                        raise NotAssociative(f"(b{i} b{j}) b{k} != b{i} (b{j} b{k})")

    @classmethod
    def field_itself(cls, F: NumberField) -> FAlgebra:
        return cls(F, (((F.one,),),), (F.one,))

    @classmethod
    def matrix_algebra(cls, F: NumberField, k: int) -> FAlgebra:
        """``M_k(F)`` on matrix units ``E_ab`` indexed ``a*k + b``."""
        r = k * k
        consts = []
        for i in range(r):
            a, b = divmod(i, k)
            row = []
            for j in range(r):
                c, e = divmod(j, k)
                vec = [F.zero] * r
                if b == c:
                    vec[a * k + e] = F.one
                row.append(tuple(vec))
            consts.append(tuple(row))
        unit = tuple(F.one if divmod(i, k)[0] == divmod(i, k)[1] else F.zero for i in range(r))
        return cls(F, tuple(consts), unit)

    @classmethod
    def even_clifford(cls, gram: Sequence[Sequence], F: NumberField) -> tuple[FAlgebra, CliffordAlgebra, list[int]]:
        """``C^+_F`` of an ``F``-valued Gram matrix on its even monomials."""
        A = CliffordAlgebra([[F(x) for x in row] for row in gram])
        basis = A.masks(even=True)
        index = {m: i for i, m in enumerate(basis)}
        r = len(basis)
        consts = []
        for a in basis:
            row = []
            for b in basis:
                vec = [F.zero] * r
                for mm, c in A.monomial_product(a, b).items():
                    vec[index[mm]] = vec[index[mm]] + F(c)
                row.append(tuple(vec))
            consts.append(tuple(row))
        unit = tuple(F.one if m == 0 else F.zero for m in basis)
        return cls(F, tuple(consts), unit), A, basis


# twisted tensor and corestriction ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TwistedTensor:
    """``Z = R (x)_F R_g``; elements are ``r x r`` arrays over ``F``."""

    R: FAlgebra

    @property
    def field(self) -> NumberField:
        return self.R.field

    @property
    def r(self) -> int:
        return self.R.dim

    def mul(self, z: Sequence[Sequence], w: Sequence[Sequence]) -> list[list]:
        F, r, c = self.field, self.r, self.R.constants
        out = [[F.zero] * r for _ in range(r)]
        for i in range(r):
            for j in range(r):
                if z[i][j].is_zero():
                    continue
                for k in range(r):
                    for l in range(r):
                        if w[k][l].is_zero():
                            continue
                        zw = z[i][j] * w[k][l]
                        left = c[i][k]
                        right = c[j][l]
                        for p in range(r):
                            if left[p].is_zero():
                                continue
                            lp = zw * left[p]
                            for q in range(r):
                                if not right[q].is_zero():
                                    out[p][q] = out[p][q] + lp * conjugate(right[q])
        return out

    def galois(self, z: Sequence[Sequence]) -> list[list]:
        r = self.r
        return [[conjugate(z[j][i]) for j in range(r)] for i in range(r)]

    def unit(self) -> list[list]:
        u = self.R.unit
        return [[u[i] * conjugate(u[j]) for j in range(self.r)] for i in range(self.r)]

    def basis(self) -> list[list[list]]:
        """Q-basis ``alpha^e b_i (x) b_j`` in coordinate order."""
        F, r = self.field, self.r
        out = []
        for i in range(r):
            for j in range(r):
                for e in F.power_basis():
                    z = [[F.zero] * r for _ in range(r)]
                    z[i][j] = e
                    out.append(z)
        return out

    def coords(self, z: Sequence[Sequence]) -> list[Fraction]:
        return [c for row in z for x in row for c in x.coeffs]

    def from_coords(self, v: Sequence) -> list[list]:
        F, r, n = self.field, self.r, self.field.degree
        return [[F(list(v[(i * r + j) * n:(i * r + j + 1) * n])) for j in range(r)] for i in range(r)]

    def diagonal(self, u: Sequence) -> list[list]:
        """``u (x) u``: coordinates ``u_i g(u_j)``."""
        return [[ui * conjugate(uj) for uj in u] for ui in u]


@dataclass(frozen=True, eq=False)
class Corestriction:
    Z: TwistedTensor
    basis: tuple  # fixed elements as r x r arrays
    constants: tuple  # rational, basis_a basis_b = sum_c k[a][b][c] basis_c
    unit: tuple  # rational coordinates of 1
    _pivots: tuple
    _pivot_inverse: tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    def express(self, z: Sequence[Sequence]) -> list[Fraction]:
        """Rational coordinates of a fixed element ``z`` in :attr:`basis`."""
        v = self.Z.coords(z)
        sub = [v[p] for p in self._pivots]
        coeffs = la.matvec([list(r) for r in self._pivot_inverse], sub)
        back = [Fraction(0)] * len(v)
        for c, b in zip(coeffs, self.basis):
            if c:
                for k, x in enumerate(self.Z.coords(b)):
                    back[k] += c * x
        if back != v:
            raise VerificationFailed("element is not in the fixed algebra")
        return coeffs

    def element(self, coeffs: Sequence) -> list[list]:
        F, r = self.Z.field, self.Z.r
        out = [[F.zero] * r for _ in range(r)]
        for c, b in zip(coeffs, self.basis):
            if c:
                out = [[x + c * y for x, y in zip(ro, rb)] for ro, rb in zip(out, b)]
        return out

    def to_json(self) -> dict:
        return {"dim": self.dim,
                "constants": [[[format_rational(x) for x in v] for v in row] for row in self.constants],
                "unit": [format_rational(x) for x in self.unit]}


def build_corestriction(R: FAlgebra, check: bool = True) -> Corestriction:
    """Fixed algebra of the Galois involution on ``R (x)_F R_g``; dimension ``(dim_F R)^2``."""
    _require_quadratic(R.field)
    if R.dim > MAX_DIM:
        raise ValueError(f"dim_F R = {R.dim} exceeds the cap {MAX_DIM}")
    if check:
        R.check()
    Z = TwistedTensor(R)
    qbasis = Z.basis()
    # theta - id as a rational matrix, columns = images of the Q-basis
    cols = [[a - b for a, b in zip(Z.coords(Z.galois(z)), Z.coords(z))] for z in qbasis]
    ker = la.nullspace(la.transpose(cols), len(qbasis))
    fixed = [Z.from_coords(_combine(qbasis, v, Z)) for v in ker]
    B = [Z.coords(f) for f in fixed]
    # coordinates on which the fixed basis is independent
    _, piv_rows = la.rref(B)
    sub = [[B[a][p] for a in range(len(B))] for p in piv_rows]
    inv = la.inverse(sub)
    core = Corestriction(Z, tuple(fixed), (), (), tuple(piv_rows), tuple(tuple(r) for r in inv))
    consts = []
    for fa in fixed:
        row = []
        for fb in fixed:
            row.append(tuple(core.express(Z.mul(fa, fb))))
        consts.append(tuple(row))
    unit = core.express(Z.unit())
    return Corestriction(Z, tuple(fixed), tuple(consts), tuple(unit), tuple(piv_rows),
                         tuple(tuple(r) for r in inv))


def _combine(qbasis, v, Z: TwistedTensor) -> list[Fraction]:
    out = [Fraction(0)] * len(qbasis)
    for c, z in zip(v, qbasis):
        if c:
            for k, x in enumerate(Z.coords(z)):
                out[k] += c * x
    return out


def check_galois_involution(Z: TwistedTensor) -> bool:
    """``theta`` is multiplicative and an involution on all pairs of the Q-basis."""
    qb = Z.basis()
    for z in qb:
        if Z.galois(Z.galois(z)) != z:
            return False
    for z in qb:
        for w in qb:
            if Z.galois(Z.mul(z, w)) != Z.mul(Z.galois(z), Z.galois(w)):
                return False
    return True


# embedding into C^+(psi) ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CoresEmbedding:
    cores: Corestriction
    clifford: CliffordAlgebra
    images: tuple  # CliffordElement per cores basis element, rational coefficients
    checks: dict

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {"cores_dim": self.cores.dim, "clifford_even_dim": self.clifford.even_dim,
                "checks": dict(self.checks),
                "images": [img.to_json() for img in self.images]}


def embed_cores_in_clifford(S: RMStructure) -> CoresEmbedding:
    """Map ``cores(C^+_F(Phi))`` into ``C^+(psi)`` through ``V (x) F = V_e + V_g``.

    ``b_i (x) b_j`` goes to ``iota_e(b_i) iota_g(b_j)`` where ``iota_e`` and
    ``iota_g`` send the ``F``-basis vector ``v_k`` to its projections on the
    two eigenspaces of ``F``. The result is checked to be a unital injective
    homomorphism with rational image.
    """
    F = S.field
    _require_quadratic(F, NotQuadraticField)
    phi, fbasis = recover_F_bilinear(S)
    R, AF, even_masks = FAlgebra.even_clifford(phi.matrix(), F)
    core = build_corestriction(R, check=False)
    C = CliffordAlgebra(S.psi)
    delta = F.gen - conjugate(F.gen)
    D = S.action(delta)
    inv = 1 / delta

    def project(v, sign):
        Dv = la.matvec(D, v)
        return [(F.scalar(x) + sign * inv * y) * Fraction(1, 2) for x, y in zip(v, Dv)]

    ve = [C.vector(project(v, 1)) for v in fbasis]
    vg = [C.vector(project(v, -1)) for v in fbasis]

    def mono(vs, mask):
        out = C.scalar(F.one)
        for k in range(len(vs)):
            if mask >> k & 1:
                out = out * vs[k]
        return out

    img_e = [mono(ve, m) for m in even_masks]
    img_g = [mono(vg, m) for m in even_masks]
    r = R.dim

    def image(z) -> CliffordElement:
        out = C.scalar(F.zero)
        for i in range(r):
            for j in range(r):
                if not z[i][j].is_zero():
                    out = out + (img_e[i] * img_g[j]) * z[i][j]
        return _rationalize(C, out)

    images = [image(b) for b in core.basis]
    checks = {}
    checks["rational_image"] = all(img is not None for img in images)
    if not checks["rational_image"]:
        raise VerificationFailed("image is not Galois invariant")
    checks["even_image"] = all(img.is_even() for img in images)
    unit_img = _combine_images(C, images, core.unit)
    checks["unital"] = unit_img == C.one
    hom = True
    for a in range(core.dim):
        for b in range(core.dim):
            lhs = _combine_images(C, images, core.constants[a][b])
            if lhs != images[a] * images[b]:
                hom = False
                break
        if not hom:
            break
    checks["homomorphism"] = hom
    masks = C.masks(even=True)
    M = [[img.coefficient(mm) for mm in masks] for img in images]
    M = [[Fraction(x) for x in row] for row in M]
    checks["injective"] = la.rank(M) == core.dim
    if not all(checks.values()):
        raise VerificationFailed(f"embedding checks failed: {checks}")
    return CoresEmbedding(core, C, tuple(images), checks)


def _rationalize(C: CliffordAlgebra, u: CliffordElement) -> CliffordElement | None:
    out = {}
    for m, c in u.terms.items():
        if isinstance(c, FieldElement):
            if not c.is_rational:
                return None
            c = c.rational()
        out[m] = Fraction(c)
    return C.element(out)


def _combine_images(C: CliffordAlgebra, images, coeffs) -> CliffordElement:
    out = C.scalar(Fraction(0))
    for c, img in zip(coeffs, images):
        if c:
            out = out + img * c
    return out


def diagonal_is_unit(core: Corestriction, u: Sequence) -> bool:
    """``u (x) u`` is fixed and invertible in the corestriction for invertible ``u``."""
    Z = core.Z
    zu = Z.diagonal(list(u))
    coords = core.express(zu)  # raises if not fixed
    # invert via the left-regular matrix over Q
    L = [[Fraction(0)] * core.dim for _ in range(core.dim)]
    for b in range(core.dim):
        for c_idx in range(core.dim):
            acc = Fraction(0)
            for a, ca in enumerate(coords):
                if ca:
                    acc += ca * core.constants[a][b][c_idx]
            L[c_idx][b] = acc
    return la.det(L) != 0
