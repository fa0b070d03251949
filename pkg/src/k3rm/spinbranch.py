"""Weight multisets for spin representations and sl(2)^k characters.

Weights are stored doubled (``2*lambda``) so every key is an integer tuple.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping

from .errors import NotACharacter, RankMismatch


@dataclass(frozen=True)
class WeightMultiset:
    rank: int
    weights: tuple  # sorted ((weight, mult), ...)

    def __init__(self, rank: int, weights: Mapping | Iterable = ()):
        c = Counter()
        items = weights.items() if isinstance(weights, Mapping) else weights
        for w, k in items:
            w = tuple(int(x) for x in w)
            if len(w) != rank:
                raise RankMismatch(f"weight {w} has length {len(w)}, expected {rank}")
            c[w] += int(k)
        if any(k < 0 for k in c.values()):
            raise ValueError("negative multiplicity")
        object.__setattr__(self, "rank", rank)
        object.__setattr__(self, "weights", tuple(sorted((w, k) for w, k in c.items() if k)))

    @classmethod
    def from_list(cls, rank: int, ws: Iterable) -> WeightMultiset:
        return cls(rank, Counter(tuple(w) for w in ws))

    def counter(self) -> Counter:
        return Counter(dict(self.weights))

    @property
    def dim(self) -> int:
        return sum(k for _, k in self.weights)

    def mult(self, w) -> int:
        return self.counter().get(tuple(w), 0)

    def expanded(self) -> list[tuple]:
        """Ordered basis realization: each weight repeated by its multiplicity."""
        return [w for w, k in self.weights for _ in range(k)]

    def __add__(self, other: WeightMultiset) -> WeightMultiset:
        _same_rank(self, other)
        return WeightMultiset(self.rank, self.counter() + other.counter())

    def __mul__(self, k: int) -> WeightMultiset:
        return WeightMultiset(self.rank, {w: m * k for w, m in self.weights})

    __rmul__ = __mul__

    def is_negation_symmetric(self) -> bool:
        c = self.counter()
        return all(c.get(tuple(-x for x in w), 0) == k for w, k in c.items())

    def to_json(self) -> list[dict]:
        return [{"weight": list(w), "mult": k} for w, k in self.weights]

    @classmethod
    def from_json(cls, data: list, rank: int | None = None) -> WeightMultiset:
        if rank is None:
            rank = len(data[0]["weight"]) if data else 0
        return cls(rank, [(d["weight"], d["mult"]) for d in data])


def _same_rank(a: WeightMultiset, b: WeightMultiset) -> None:
    if a.rank != b.rank:
        raise RankMismatch(f"ranks {a.rank} and {b.rank} differ")


def trivial(rank: int = 0) -> WeightMultiset:
    return WeightMultiset(rank, {(0,) * rank: 1})


def spin_weights(N: int) -> WeightMultiset | tuple[WeightMultiset, WeightMultiset]:
    """Spin weights of ``so(N)``: ``S`` for odd ``N``, the pair ``(S+, S-)`` for even ``N``."""
    if N < 2:
        raise ValueError("N must be at least 2")
    r = N // 2
    signs = list(product((1, -1), repeat=r))
    if N % 2:
        return WeightMultiset.from_list(r, signs)
    plus = [s for s in signs if s.count(-1) % 2 == 0]
    minus = [s for s in signs if s.count(-1) % 2 == 1]
    return WeightMultiset.from_list(r, plus), WeightMultiset.from_list(r, minus)


def spin_module(N: int) -> WeightMultiset:
    """Full spin representation ``S(N)`` (``S+ + S-`` when ``N`` is even)."""
    if N == 1:
        return trivial(0)
    w = spin_weights(N)
    return w[0] + w[1] if isinstance(w, tuple) else w


def restrict_to_product(W: WeightMultiset, m: int, n: int) -> WeightMultiset:
    """Restrict an ``so(nm)`` weight multiset to ``so(m)^n``.

    The first ``n * (m // 2)`` coordinates are the Cartan coordinates of the
    ``n`` blocks; for odd ``m`` the remaining ``n // 2`` coordinates pair the
    zero-weight lines of the blocks and vanish on ``so(m)^n``, so they are
    dropped.
    """
    if m < 1 or n < 1 or W.rank != (n * m) // 2:
        raise RankMismatch(f"rank {W.rank} is not floor({n}*{m}/2)")
    keep = n * (m // 2)
    c: Counter = Counter()
    for w, k in W.weights:
        c[w[:keep]] += k
    return WeightMultiset(keep, c)


def outer(*Ws: WeightMultiset) -> WeightMultiset:
    """External tensor product: weights concatenate, ranks add."""
    out = trivial(0)
    for W in Ws:
        c: Counter = Counter()
        for (a, ka), (b, kb) in product(out.weights, W.weights):
            c[a + b] += ka * kb
        out = WeightMultiset(out.rank + W.rank, c)
    return out


def tensor(W1: WeightMultiset, W2: WeightMultiset) -> WeightMultiset:
    _same_rank(W1, W2)
    c: Counter = Counter()
    for (a, ka), (b, kb) in product(W1.weights, W2.weights):
        c[tuple(x + y for x, y in zip(a, b))] += ka * kb
    return WeightMultiset(W1.rank, c)


def _pairs(W: WeightMultiset, strict: bool) -> WeightMultiset:
    basis = W.expanded()
    c: Counter = Counter()
    for i, a in enumerate(basis):
        for b in basis[i + 1 if strict else i:]:
            c[tuple(x + y for x, y in zip(a, b))] += 1
    return WeightMultiset(W.rank, c)


def wedge2(W: WeightMultiset) -> WeightMultiset:
    return _pairs(W, strict=True)


def sym2(W: WeightMultiset) -> WeightMultiset:
    return _pairs(W, strict=False)


def sl2_string(a: int) -> list[int]:
    return list(range(a, -a - 1, -2))


def sl2k_irrep(highest: Iterable[int]) -> WeightMultiset:
    """Weights of ``V_{a_1} (x) ... (x) V_{a_k}`` (doubled convention: ``V_a`` has dim ``a+1``)."""
    highest = tuple(highest)
    if any(a < 0 for a in highest):
        raise NotACharacter(f"{highest} is not dominant")
    return WeightMultiset.from_list(len(highest), product(*(sl2_string(a) for a in highest)))


def decompose_sl2k(W: WeightMultiset) -> list[tuple[tuple, int]]:
    """Irreducible constituents by stripping from the lexicographically largest weight."""
    for i in range(W.rank):
        c = W.counter()
        flip = Counter({w[:i] + (-w[i],) + w[i + 1:]: k for w, k in c.items()})
        if flip != c:
            raise NotACharacter(f"not symmetric under negating coordinate {i}")
    c = W.counter()
    out = []
    while c:
        top = max(c)
        k = c[top]
        for w, mult in sl2k_irrep(top).weights:
            left = c.get(w, 0) - k * mult
            if left < 0:
                raise NotACharacter(f"stripping {top} leaves a negative multiplicity at {w}")
            if left:
                c[w] = left
            else:
                c.pop(w, None)
        out.append((top, k))
    return out


def recompose(rank: int, parts: Iterable[tuple[tuple, int]]) -> WeightMultiset:
    out = WeightMultiset(rank)
    for hw, k in parts:
        out = out + sl2k_irrep(hw) * k
    return out


@dataclass(frozen=True)
class BranchingCheck:
    m: int
    n: int
    restricted: WeightMultiset
    expected: WeightMultiset
    multiplicity: int

    @property
    def ok(self) -> bool:
        return self.restricted == self.expected

    @property
    def dims(self) -> tuple[int, int, int]:
        """``(dim S(nm), multiplicity, dim of the n-fold product)``."""
        return self.restricted.dim, self.multiplicity, self.expected.dim // self.multiplicity

    def to_json(self) -> dict:
        total, mult, base = self.dims
        return {"m": self.m, "n": self.n, "ok": self.ok, "dim_spin": total,
                "multiplicity": mult, "dim_product": base,
                "restricted": self.restricted.to_json()}


def spin_branching(m: int, n: int) -> BranchingCheck:
    """Compare ``S(nm)`` restricted to ``so(m)^n`` with ``2^{n'}`` copies of ``S(m)^{(x) n}``.

    ``n' = n // 2`` for odd ``m`` and ``0`` for even ``m``.
    """
    if m < 2 or n < 1 or n * m < 2:
        raise ValueError("need m >= 2, n >= 1")
    lhs = restrict_to_product(spin_module(n * m), m, n)
    mult = 2 ** (n // 2) if m % 2 else 1
    rhs = outer(*([spin_module(m)] * n)) * mult
    return BranchingCheck(m, n, lhs, rhs, mult)
