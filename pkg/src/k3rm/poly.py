"""Dense univariate polynomials over Q.

A polynomial is a list of ``Fraction`` coefficients, constant term first,
with no trailing zeros (the zero polynomial is ``[]``).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Poly = list  # list[Fraction], low degree first


def strip(p: Iterable) -> Poly:
    out = [Fraction(c) for c in p]
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(p: Sequence) -> int:
    return len(p) - 1


def add(p: Sequence, q: Sequence) -> Poly:
    n = max(len(p), len(q))
    return strip((p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n))


def neg(p: Sequence) -> Poly:
    return [-c for c in p]


def sub(p: Sequence, q: Sequence) -> Poly:
    return add(p, neg(q))


def mul(p: Sequence, q: Sequence) -> Poly:
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return strip(out)


def scale(p: Sequence, c) -> Poly:
    return strip(c * a for a in p)


def divmod_(p: Sequence, q: Sequence) -> tuple[Poly, Poly]:
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(p)
    dq = len(q) - 1
    lead = q[-1]
    quot = [Fraction(0)] * max(len(p) - dq, 0)
    while len(r) - 1 >= dq and r:
        c = r[-1] / lead
        k = len(r) - 1 - dq
        quot[k] = c
        for i, b in enumerate(q):
            r[k + i] -= c * b
        r = strip(r)
    return strip(quot), r


def rem(p: Sequence, q: Sequence) -> Poly:
    return divmod_(p, q)[1]


def monic(p: Sequence) -> Poly:
    p = strip(p)
    if not p:
        return p
    return [c / p[-1] for c in p]


def gcd(p: Sequence, q: Sequence) -> Poly:
    a, b = strip(p), strip(q)
    while b:
        a, b = b, rem(a, b)
    return monic(a)


def xgcd(p: Sequence, q: Sequence) -> tuple[Poly, Poly, Poly]:
    """Return ``(g, s, t)`` with ``s*p + t*q = g`` and ``g`` monic."""
    r0, r1 = strip(p), strip(q)
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        qt, r = divmod_(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(s0, mul(qt, s1))
        t0, t1 = t1, sub(t0, mul(qt, t1))
    if not r0:
        return [], s0, t0
    lc = r0[-1]
    return [c / lc for c in r0], scale(s0, 1 / lc), scale(t0, 1 / lc)


def deriv(p: Sequence) -> Poly:
    return strip(i * p[i] for i in range(1, len(p)))


def evaluate(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def compose_linear(p: Sequence, a, b) -> Poly:
    """Return p(a*X + b)."""
    out: Poly = []
    lin = strip([b, a])
    for c in reversed(p):
        out = add(mul(out, lin), [c])
    return out


def interval_eval(p: Sequence, lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    """Enclosure of ``p`` over ``[lo, hi]`` by interval Horner evaluation."""
    a = b = Fraction(0)
    for c in reversed(p):
        prods = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(prods) + c, max(prods) + c
    return a, b


def sturm_sequence(p: Sequence) -> list[Poly]:
    seq = [strip(p), deriv(p)]
    while seq[-1]:
        r = rem(seq[-2], seq[-1])
        seq.append(neg(r))
    return seq[:-1]


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def sign_variations(seq: Sequence[Sequence], x) -> int:
    signs = [_sign(evaluate(s, x)) for s in seq]
    return _count_changes(signs)


def sign_variations_at_infinity(seq: Sequence[Sequence], positive: bool) -> int:
    signs = []
    for s in seq:
        lc = _sign(s[-1])
        if not positive and (len(s) - 1) % 2 == 1:
            lc = -lc
        signs.append(lc)
    return _count_changes(signs)


def _count_changes(signs: list[int]) -> int:
    nz = [s for s in signs if s]
    return sum(1 for u, v in zip(nz, nz[1:]) if u != v)


def count_roots(seq: Sequence[Sequence], a, b) -> int:
    """Number of distinct real roots in the half-open interval ``(a, b]``."""
    return sign_variations(seq, a) - sign_variations(seq, b)


def count_real_roots(seq: Sequence[Sequence]) -> int:
    return sign_variations_at_infinity(seq, False) - sign_variations_at_infinity(seq, True)


def cauchy_bound(p: Sequence) -> int:
    lead = abs(p[-1])
    m = max((abs(c) / lead for c in p[:-1]), default=Fraction(0))
    return int(m) + 2


def rational_roots(p: Sequence) -> list[Fraction]:
    """All rational roots of ``p``.

    With ``a_n`` the leading coefficient of the integer rescaling, ``y = a_n x``
    turns rational roots into integer roots of a monic integer polynomial;
    those are located by Sturm bisection on integer intervals, so no
    coefficient ever needs factoring.
    """
    p = strip(p)
    if len(p) <= 1:
        return []
    roots: set[Fraction] = set()
    k = 0
    while p[k] == 0:
        roots.add(Fraction(0))
        k += 1
    p = p[k:]
    if len(p) == 1:
        return sorted(roots)
    g = gcd(p, deriv(p))
    if len(g) > 1:
        p = divmod_(p, g)[0]
    den = 1
    for c in p:
        den = den * c.denominator // _igcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    n = len(ints) - 1
    lead = ints[-1]
    q = [Fraction(c * lead ** (n - 1 - i)) if i < n else Fraction(1) for i, c in enumerate(ints)]
    seq = sturm_sequence(q)
    bound = cauchy_bound(q)
    stack = [(-bound - 1, bound)]
    while stack:
        a, b = stack.pop()
        if count_roots(seq, a, b) == 0:
            continue
        if b - a == 1:
            if evaluate(q, b) == 0:
                roots.add(Fraction(b, lead))
            continue
        mid = (a + b) // 2
        stack.append((a, mid))
        stack.append((mid, b))
    return sorted(roots)


def _igcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)
