"""Integer Gram matrices of the standard lattices (cup-product sign convention)."""

from __future__ import annotations


def hyperbolic(scale: int = 1) -> list[list[int]]:
    return [[0, scale], [scale, 0]]


def e8(sign: int = 1) -> list[list[int]]:
    """Cartan matrix of E8 times ``sign``; nodes 0..6 form a chain, node 7 hangs off node 4."""
    edges = [(i, i + 1) for i in range(6)] + [(4, 7)]
    G = [[0] * 8 for _ in range(8)]
    for i in range(8):
        G[i][i] = 2 * sign
    for i, j in edges:
        G[i][j] = G[j][i] = -sign
    return G


def diagonal(*entries: int) -> list[list[int]]:
    n = len(entries)
    return [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)]


def block_sum(*blocks: list[list[int]]) -> list[list[int]]:
    n = sum(len(b) for b in blocks)
    G = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                G[off + i][off + j] = x
        off += len(b)
    return G


def lambda_k3() -> list[list[int]]:
    """``U^3 + E8(-1)^2``, rank 22, signature (3, 19)."""
    U = hyperbolic()
    return block_sum(U, U, U, e8(-1), e8(-1))


def double_cover_lattice() -> list[list[int]]:
    """``U(2)^2 + <-2>^2``: transcendental lattice of a general double plane branched in six lines."""
    return block_sum(hyperbolic(2), hyperbolic(2), [[-2]], [[-2]])


NAMED = {
    "U": lambda: hyperbolic(1),
    "U2": lambda: hyperbolic(2),
    "E8": lambda: e8(1),
    "E8minus": lambda: e8(-1),
    "LambdaK3": lambda_k3,
    "minus2": lambda: [[-2]],
    "DoubleCover": double_cover_lattice,
}


def named(name: str) -> list[list[int]]:
    try:
        return NAMED[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {sorted(NAMED)}") from None
