"""Exact arithmetic in number fields given by a monic minimal polynomial.

Elements live in the power basis ``1, alpha, ..., alpha^(n-1)`` and real
embeddings are pinned down by rational isolating intervals, so every sign
decision is exact.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import poly as P
from .errors import (
    FactorizationLimit,
    FieldMismatch,
    IrreducibilityUnverified,
    NonSquarefree,
    NotMonic,
    NotTotallyReal,
    Reducible,
    SingularBasis,
)

SIGN_REFINE_CAP = 256
TRIAL_DIVISION_BOUND = 10**6

Interval = tuple  # (Fraction, Fraction)


def parse_rational(x) -> Fraction:
    """Accept ints, Fractions and ``"num/den"`` strings."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"not an exact rational: {x!r}")


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def isolate_real_roots(p: Sequence) -> list[Interval]:
    """Disjoint rational intervals, each holding exactly one real root of ``p``.

    Rational roots that are hit exactly come back as degenerate ``[r, r]``
    intervals; the others are refined to width at most one with integer
    endpoints where possible.
    """
    p = P.strip(parse_rational(c) for c in p)
    if len(p) < 2:
        raise ValueError("need a polynomial of degree >= 1")
    if len(P.gcd(p, P.deriv(p))) > 1:
        raise NonSquarefree(f"gcd(p, p') != 1 for p = {p}")
    seq = P.sturm_sequence(p)
    bound = Fraction(P.cauchy_bound(p))
    found: list[list[Fraction]] = []
    stack = [(-bound, bound)]
    while stack:
        a, b = stack.pop()
        k = P.count_roots(seq, a, b)
        if k == 0:
            continue
        if k == 1 and b - a <= 1:
            if P.evaluate(p, b) == 0:
                found.append([b, b])
            else:
                found.append([a, b])
            continue
        mid = Fraction((a + b) // 2) if b - a > 1 else (a + b) / 2
        if not a < mid < b:
            mid = (a + b) / 2
        if P.evaluate(p, mid) == 0:
            delta = (b - a) / 4
            while P.count_roots(seq, mid - delta, mid + delta) != 1:
                delta /= 2
            found.append([mid, mid])
            stack.append((a, mid - delta))
            stack.append((mid + delta, b))
        else:
            stack.append((a, mid))
            stack.append((mid, b))
    found.sort()
    # half-open bookkeeping can leave shared endpoints; shrink until disjoint
    for _ in range(SIGN_REFINE_CAP):
        clash = False
        for i in range(len(found) - 1):
            if found[i][1] >= found[i + 1][0]:
                clash = True
                found[i] = list(_bisect_once(p, found[i]))
                found[i + 1] = list(_bisect_once(p, found[i + 1]))
        if not clash:
            break
    return [(lo, hi) for lo, hi in found]


def _bisect_once(p: Sequence, iv) -> Interval:
    lo, hi = iv
    if lo == hi:
        return lo, hi
    mid = (lo + hi) / 2
    vm = P.evaluate(p, mid)
    if vm == 0:
        return mid, mid
    vlo = P.evaluate(p, lo)
    if vlo == 0:
        # root sits on the left end only when lo is itself the root
        return lo, lo
    if (vlo > 0) != (vm > 0):
        return lo, mid
    return mid, hi


def _has_irreducibility_certificate(p: Sequence) -> bool:
    return len(p) - 1 <= 3 and not P.rational_roots(p)


@dataclass(frozen=True, eq=False)
class NumberField:
    """``Q[X]/(p)`` for a monic irreducible ``p`` with isolated real roots.

    Construct with :meth:`from_poly`; the raw constructor trusts its input.
    """

    min_poly: tuple
    real_roots: tuple
    name: str = "alpha"
    _refined: dict = field(default_factory=dict, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    @classmethod
    def from_poly(cls, coeffs: Iterable, *, attest_irreducible: bool = False,
                  totally_real: bool | None = None, name: str = "alpha") -> NumberField:
        p = P.strip(parse_rational(c) for c in coeffs)
        if len(p) < 2:
            raise ValueError("minimal polynomial must have degree >= 1")
        if p[-1] != 1:
            raise NotMonic(f"leading coefficient {p[-1]} != 1")
        roots = isolate_real_roots(p)
        if len(p) - 1 >= 2:
            if P.rational_roots(p):
                raise Reducible(f"{p} has a rational root")
            if not attest_irreducible and not _has_irreducibility_certificate(p):
                raise IrreducibilityUnverified(
                    "degree >= 4: pass attest_irreducible=True to vouch for irreducibility")
        n = len(p) - 1
        if totally_real is True and len(roots) != n:
            raise NotTotallyReal(f"{len(roots)} real roots for degree {n}")
        return cls(tuple(p), tuple(roots), name)

    @classmethod
    def quadratic(cls, d: int) -> NumberField:
        """``Q(sqrt d)`` for a non-square integer ``d``."""
        return cls.from_poly([-d, 0, 1], name=f"sqrt{d}")

    @classmethod
    def rationals(cls) -> NumberField:
        return cls.from_poly([0, 1], name="1")

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    @property
    def is_totally_real(self) -> bool:
        return len(self.real_roots) == self.degree

    def embeddings(self) -> list[Embedding]:
        return [Embedding(self, i) for i in range(len(self.real_roots))]

    def embedding(self, i: int) -> Embedding:
        if not 0 <= i < len(self.real_roots):
            raise IndexError(f"no real embedding {i}")
        return Embedding(self, i)

    # element constructors
    def __call__(self, coeffs) -> FieldElement:
        if isinstance(coeffs, FieldElement):
            if coeffs.field is not self and coeffs.field != self:
                raise FieldMismatch("element from another field")
            return coeffs
        if isinstance(coeffs, (int, Fraction, str)):
            return self.scalar(parse_rational(coeffs))
        c = [parse_rational(x) for x in coeffs]
        if len(c) > self.degree:
            return FieldElement(self, tuple(P.strip(c))).reduce_full()
        c += [Fraction(0)] * (self.degree - len(c))
        return FieldElement(self, tuple(c))

    def scalar(self, q) -> FieldElement:
        c = [Fraction(0)] * self.degree
        c[0] = Fraction(q)
        return FieldElement(self, tuple(c))

    @cached_property
    def zero(self) -> FieldElement:
        return self.scalar(0)

    @cached_property
    def one(self) -> FieldElement:
        return self.scalar(1)

    @cached_property
    def gen(self) -> FieldElement:
        if self.degree == 1:
            return self.scalar(-self.min_poly[0])
        c = [Fraction(0)] * self.degree
        c[1] = Fraction(1)
        return FieldElement(self, tuple(c))

    def power_basis(self) -> list[FieldElement]:
        out = [self.one]
        for _ in range(1, self.degree):
            out.append(out[-1] * self.gen)
        return out

    @cached_property
    def _reduction(self) -> list[list[Fraction]]:
        """Power-basis coordinates of alpha^k for k = n .. 2n-2."""
        n = self.degree
        cur = [-c for c in self.min_poly[:-1]]
        table = [cur]
        for _ in range(n, 2 * n - 2):
            top = cur[-1]
            nxt = [Fraction(0)] + cur[:-1]
            nxt = [a + top * b for a, b in zip(nxt, table[0])]
            table.append(nxt)
            cur = nxt
        return table

    @cached_property
    def trace_vector(self) -> tuple:
        """``tr(alpha^i)`` for the power basis, via the multiplication matrices."""
        return tuple(b.trace() for b in self.power_basis())

    @cached_property
    def trace_gram(self) -> list[list[Fraction]]:
        basis = self.power_basis()
        return [[(u * v).trace() for v in basis] for u in basis]

    # root refinement shared by all embeddings of this field
    def root_interval(self, i: int) -> Interval:
        with self._lock:
            return self._refined.get(i, self.real_roots[i])

    def refine_root(self, i: int) -> Interval:
        lo, hi = self.root_interval(i)
        new = _bisect_once(self.min_poly, (lo, hi))
        with self._lock:
            self._refined[i] = new
        return new

    def __eq__(self, other) -> bool:
        return isinstance(other, NumberField) and self.min_poly == other.min_poly

    def __hash__(self) -> int:
        return hash(self.min_poly)

    def __repr__(self) -> str:
        return f"NumberField({[format_rational(c) for c in self.min_poly]})"

    def to_json(self) -> dict:
        return {
            "min_poly": [format_rational(c) for c in self.min_poly],
            "roots": [[format_rational(lo), format_rational(hi)] for lo, hi in self.real_roots],
        }

    @classmethod
    def from_json(cls, data: dict, **kw) -> NumberField:
        F = cls.from_poly(data["min_poly"], **kw)
        if "roots" in data:
            given = [(parse_rational(lo), parse_rational(hi)) for lo, hi in data["roots"]]
            if len(given) != len(F.real_roots):
                raise ValueError("root count disagrees with Sturm count")
            seq = P.sturm_sequence(F.min_poly)
            for lo, hi in given:
                if lo == hi:
                    ok = P.evaluate(F.min_poly, lo) == 0
                else:
                    ok = (P.count_roots(seq, lo, hi) == 1 and P.evaluate(F.min_poly, lo) != 0)
                if not ok:
                    raise ValueError(f"[{lo}, {hi}] does not isolate a single root")
            F = cls(F.min_poly, tuple(sorted(given)), F.name)
        return F


@dataclass(frozen=True, eq=False)
class FieldElement:
    field: NumberField
    coeffs: tuple

    def reduce_full(self) -> FieldElement:
        r = P.rem(list(self.coeffs), list(self.field.min_poly))
        r += [Fraction(0)] * (self.field.degree - len(r))
        return FieldElement(self.field, tuple(r))

    def _coerce(self, other) -> FieldElement | None:
        if isinstance(other, FieldElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatch("arithmetic between different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.scalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self.field.zero
            return FieldElement(self.field, tuple(a * other for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = self.field.degree
        if n == 1:
            return FieldElement(self.field, (self.coeffs[0] * o.coeffs[0],))
        prod = [Fraction(0)] * (2 * n - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        out = prod[:n]
        for k, row in enumerate(self.field._reduction):
            c = prod[n + k]
            if c:
                for i in range(n):
                    out[i] += c * row[i]
        return FieldElement(self.field, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero field element")
        if self.field.degree == 1:
            return FieldElement(self.field, (1 / self.coeffs[0],))
        g, s, _ = P.xgcd(P.strip(self.coeffs), list(self.field.min_poly))
        if len(g) != 1:
            raise ZeroDivisionError("element is a zero divisor: min_poly is reducible")
        return self.field(s)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(a / other for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out, base = self.field.one, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs[0] == other and not any(self.coeffs[1:])
        return NotImplemented

    def __hash__(self) -> int:
        if not any(self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash(self.coeffs)

    @property
    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def mult_matrix(self) -> list[list[Fraction]]:
        """Matrix of ``x -> self*x`` on the power basis (columns = images)."""
        cols = [(self * b).coeffs for b in self.field.power_basis()]
        n = self.field.degree
        return [[cols[j][i] for j in range(n)] for i in range(n)]

    def trace(self) -> Fraction:
        m = self.mult_matrix()
        return sum((m[i][i] for i in range(len(m))), Fraction(0))

    def norm(self) -> Fraction:
        from .linalg import det

        return det(self.mult_matrix())

    def height(self) -> int:
        return max(max(abs(c.numerator), c.denominator) for c in self.coeffs)

    def sign(self, emb: Embedding) -> int:
        return sign_at(self, emb)

    def approx(self, emb: Embedding) -> float:
        x = emb.approx()
        return float(P.evaluate([float(c) for c in self.coeffs], x))

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            s = format_rational(c)
            if i == 0:
                terms.append(s)
            else:
                mon = self.field.name if i == 1 else f"{self.field.name}^{i}"
                terms.append(mon if c == 1 else f"{s}*{mon}")
        return " + ".join(terms) if terms else "0"

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]


@dataclass(frozen=True)
class Embedding:
    field: NumberField
    root_index: int

    def interval(self) -> Interval:
        return self.field.root_interval(self.root_index)

    def approx(self) -> float:
        lo, hi = self.interval()
        for _ in range(60):
            if hi - lo < Fraction(1, 10**15):
                break
            lo, hi = self.field.refine_root(self.root_index)
        return float((lo + hi) / 2)

    def __call__(self, a) -> float:
        return self.field(a).approx(self)


def sign_at(a, emb: Embedding) -> int:
    """Exact sign of ``emb(a)``."""
    F = emb.field
    if isinstance(a, (int, Fraction)):
        return (a > 0) - (a < 0)
    if a.field != F:
        raise FieldMismatch("element and embedding live in different fields")
    q = P.strip(a.coeffs)
    if not q:
        return 0
    if len(q) == 1:
        return 1 if q[0] > 0 else -1
    lo, hi = F.root_interval(emb.root_index)
    # an exact zero needs a common factor with min_poly vanishing on this root
    g = P.gcd(q, list(F.min_poly))
    if len(g) > 1:
        if lo == hi:
            if P.evaluate(g, lo) == 0:
                return 0
        elif P.count_roots(P.sturm_sequence(g), lo, hi) > 0 or P.evaluate(g, lo) == 0:
            return 0
    for _ in range(SIGN_REFINE_CAP):
        if lo == hi:
            v = P.evaluate(q, lo)
            return (v > 0) - (v < 0)
        elo, ehi = P.interval_eval(q, lo, hi)
        if elo > 0:
            return 1
        if ehi < 0:
            return -1
        lo, hi = F.refine_root(emb.root_index)
    raise RuntimeError("sign refinement cap exceeded; this is a defect")


def is_totally_positive(a: FieldElement) -> bool:
    F = a.field
    if not F.is_totally_real:
        raise NotTotallyReal("total positivity needs a totally real field")
    return all(sign_at(a, e) == 1 for e in F.embeddings())


def trace(a) -> Fraction:
    if isinstance(a, (int, Fraction)):
        return Fraction(a)
    return a.trace()


def norm(a) -> Fraction:
    if isinstance(a, (int, Fraction)):
        return Fraction(a)
    return a.norm()


def discriminant_det(F: NumberField, basis: Sequence[FieldElement] | None = None) -> Fraction:
    """``det(tr(e_i e_j))`` for a Q-basis ``e`` of ``F`` (power basis by default)."""
    from .linalg import det

    basis = list(basis) if basis is not None else F.power_basis()
    if len(basis) != F.degree:
        raise SingularBasis(f"need {F.degree} basis elements, got {len(basis)}")
    basis = [F(b) for b in basis]
    coords = [list(b.coeffs) for b in basis]
    if det(coords) == 0:
        raise SingularBasis("basis elements are linearly dependent over Q")
    return det([[(u * v).trace() for v in basis] for u in basis])


def field_discriminant(F: NumberField, basis: Sequence[FieldElement] | None = None,
                       bound: int = TRIAL_DIVISION_BOUND) -> int:
    """Square class of the discriminant of ``F``."""
    return square_class(discriminant_det(F, basis), bound=bound)


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_LIMIT = 3317044064679887385961981  # the bases above decide primality below this


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _squarefree_part(n: int, bound: int) -> int:
    out = 1
    p = 2
    while p * p <= n:
        if p > bound:
            # the cofactor has no prime factor up to bound: settle the easy shapes
            if math.isqrt(n) ** 2 == n:
                return out
            if n < _MR_LIMIT and _is_prime(n):
                return out * n
            raise FactorizationLimit(n, bound)
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e % 2:
            out *= p
        p += 1 if p == 2 else 2
    # the leftover is 1 or a prime
    return out * n


def square_class(q, bound: int = TRIAL_DIVISION_BOUND) -> int:
    """Squarefree integer ``s`` with ``q / s`` a rational square."""
    q = parse_rational(q) if not isinstance(q, Fraction) else q
    if q == 0:
        raise ValueError("square class of zero is undefined")
    s = -1 if q < 0 else 1
    return s * _squarefree_part(abs(q.numerator) * q.denominator, bound)
