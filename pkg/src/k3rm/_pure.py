"""Pure-Python kernels; reference implementation for ``_speedups``.

Both modules expose the same functions with the same results. The Clifford
kernels work on bitmask-encoded monomials: bit ``i`` set means generator
``e_i`` occurs, factors in increasing index order.
"""

from __future__ import annotations

from fractions import Fraction


def reorder_sign(a: int, b: int) -> int:
    """Sign of sorting the word ``e_A e_B`` into increasing order (anticommuting)."""
    a >>= 1
    swaps = 0
    while a:
        swaps += bin(a & b).count("1")
        a >>= 1
    return -1 if swaps & 1 else 1


def orthogonal_table(d: int) -> tuple[list[int], list[int]]:
    """Flat ``(mask, sign)`` tables for all ``2^d x 2^d`` monomial pairs.

    For an orthogonal basis ``e_A e_B = sign * (prod_{i in A&B} g_ii) e_{A^B}``.
    """
    size = 1 << d
    masks = [0] * (size * size)
    signs = [0] * (size * size)
    for a in range(size):
        base = a * size
        for b in range(size):
            masks[base + b] = a ^ b
            signs[base + b] = reorder_sign(a, b)
    return masks, signs


def _right_mul_gen(s: int, j: int, gram, memo: dict) -> dict:
    """``e_S * e_j`` in normal form for an arbitrary symmetric Gram matrix."""
    key = (s, j)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if s == 0:
        out = {1 << j: 1}
    else:
        t = s.bit_length() - 1
        rest = s & ~(1 << t)
        if t < j:
            out = {s | (1 << j): 1}
        elif t == j:
            out = {rest: gram[j][j]}
        else:
            # e_t e_j = -e_j e_t + 2 g_tj; every index left of e_t is < t
            out = {}
            for m, c in _right_mul_gen(rest, j, gram, memo).items():
                out[m | (1 << t)] = -c
            g = gram[t][j]
            if g != 0:
                out[rest] = out.get(rest, 0) + 2 * g
            out = {m: c for m, c in out.items() if c != 0}
    memo[key] = out
    return out


def general_product(a: int, b: int, gram, memo: dict) -> dict:
    """``e_A * e_B`` as ``{mask: coeff}`` using the relation ``e_i e_j + e_j e_i = 2 g_ij``."""
    cur = {a: 1}
    bb = b
    j = 0
    while bb:
        if bb & 1:
            nxt: dict = {}
            for m, c in cur.items():
                for m2, c2 in _right_mul_gen(m, j, gram, memo).items():
                    v = nxt.get(m2, 0) + c * c2
                    nxt[m2] = v
            cur = {m: c for m, c in nxt.items() if c != 0}
        bb >>= 1
        j += 1
    return cur


def rref_rational(A: list) -> tuple[list, list]:
    """RREF over Q; rows are cleared to integers and reduced fraction-free."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    M = []
    for row in A:
        den = 1
        for x in row:
            q = x.denominator if isinstance(x, Fraction) else 1
            den = den * q // _gcd(den, q)
        M.append([int(x * den) for x in row])
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = -1
        best = 0
        for i in range(r, rows):
            v = M[i][c]
            if v != 0 and (p < 0 or abs(v) < best):
                p = i
                best = abs(v)
        if p < 0:
            continue
        M[r], M[p] = M[p], M[r]
        pr = M[r]
        pv = pr[c]
        for i in range(rows):
            if i != r:
                f = M[i][c]
                if f != 0:
                    row = M[i]
                    M[i] = [pv * x - f * y for x, y in zip(row, pr)]
                    g = 0
                    for x in M[i]:
                        if x:
                            g = _gcd(g, x)
                            if g == 1:
                                break
                    if g > 1:
                        M[i] = [x // g for x in M[i]]
        pivots.append(c)
        r += 1
    out = []
    for i in range(rows):
        if i < len(pivots):
            pv = M[i][pivots[i]]
            out.append([Fraction(x, pv) for x in M[i]])
        else:
            out.append([Fraction(0)] * cols)
    return out, pivots


def det_rational(A: list) -> Fraction:
    """Determinant over Q via Bareiss on the integer-cleared matrix."""
    n = len(A)
    scale = Fraction(1)
    M = []
    for row in A:
        den = 1
        for x in row:
            q = x.denominator if isinstance(x, Fraction) else 1
            den = den * q // _gcd(den, q)
        scale /= den
        M.append([int(x * den) for x in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            p = next((i for i in range(k + 1, n) if M[i][k] != 0), -1)
            if p < 0:
                return Fraction(0)
            M[k], M[p] = M[p], M[k]
            sign = -sign
        akk = M[k][k]
        for i in range(k + 1, n):
            aik = M[i][k]
            row_i = M[i]
            row_k = M[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * M[n - 1][n - 1] * scale


def _gcd(a: int, b: int) -> int:
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a
