# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the kernels in ``_pure``; same signatures, same results."""

from fractions import Fraction
from math import gcd as _gcd


cdef inline int _popcount(unsigned long long x):
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


cpdef int reorder_sign(unsigned long long a, unsigned long long b):
    cdef int swaps = 0
    a >>= 1
    while a:
        swaps += _popcount(a & b)
        a >>= 1
    return -1 if swaps & 1 else 1


def orthogonal_table(int d):
    cdef Py_ssize_t size = 1 << d
    cdef Py_ssize_t a, b, base
    masks = [0] * (size * size)
    signs = [0] * (size * size)
    for a in range(size):
        base = a * size
        for b in range(size):
            masks[base + b] = a ^ b
            signs[base + b] = reorder_sign(a, b)
    return masks, signs


cdef dict _right_mul_gen(unsigned long long s, int j, gram, dict memo):
    key = (s, j)
    hit = memo.get(key)
    if hit is not None:
        return <dict>hit
    cdef int t
    cdef unsigned long long rest
    cdef dict out
    if s == 0:
        out = {1ULL << j: 1}
    else:
        t = 63
        while not (s >> t) & 1:
            t -= 1
        rest = s & ~(1ULL << t)
        if t < j:
            out = {s | (1ULL << j): 1}
        elif t == j:
            out = {rest: gram[j][j]}
        else:
            out = {}
            for m, c in _right_mul_gen(rest, j, gram, memo).items():
                out[m | (1ULL << t)] = -c
            g = gram[t][j]
            if g != 0:
                out[rest] = out.get(rest, 0) + 2 * g
            out = {m: c for m, c in out.items() if c != 0}
    memo[key] = out
    return out


def general_product(unsigned long long a, unsigned long long b, gram, dict memo):
    cdef dict cur = {a: 1}
    cdef dict nxt
    cdef int j = 0
    while b:
        if b & 1:
            nxt = {}
            for m, c in cur.items():
                for m2, c2 in _right_mul_gen(m, j, gram, memo).items():
                    nxt[m2] = nxt.get(m2, 0) + c * c2
            cur = {m: c for m, c in nxt.items() if c != 0}
        b >>= 1
        j += 1
    return cur


def rref_rational(list A):
    cdef Py_ssize_t rows = len(A)
    cdef Py_ssize_t cols = len(A[0]) if rows else 0
    cdef Py_ssize_t r = 0, c, i, p
    cdef list M = []
    cdef list pivots = []
    cdef list row, pr
    for row in A:
        den = 1
        for x in row:
            q = x.denominator if isinstance(x, Fraction) else 1
            den = den * q // _gcd(den, q)
        M.append([int(x * den) for x in row])
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
                f = (<list>M[i])[c]
                if f != 0:
                    row = [pv * x - f * y for x, y in zip(<list>M[i], pr)]
                    g = 0
                    for x in row:
                        if x:
                            g = _gcd(g, x)
                            if g == 1:
                                break
                    if g > 1:
                        row = [x // g for x in row]
                    M[i] = row
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


def det_rational(list A):
    cdef Py_ssize_t n = len(A)
    cdef Py_ssize_t k, i, j, p
    cdef list M = []
    cdef list row_i, row_k
    cdef int sign = 1
    scale = Fraction(1)
    for row in A:
        den = 1
        for x in row:
            q = x.denominator if isinstance(x, Fraction) else 1
            den = den * q // _gcd(den, q)
        scale /= den
        M.append([int(x * den) for x in row])
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            p = -1
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    p = i
                    break
            if p < 0:
                return Fraction(0)
            M[k], M[p] = M[p], M[k]
            sign = -sign
        row_k = M[k]
        akk = row_k[k]
        for i in range(k + 1, n):
            row_i = M[i]
            aik = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * M[n - 1][n - 1] * scale
