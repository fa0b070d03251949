"""Time the pure-Python kernels against the compiled ones.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import timeit
from fractions import Fraction

from k3rm.kernels import backend


def _gram(d, rng):
    G = [[Fraction(0)] * d for _ in range(d)]
    for i in range(d):
        G[i][i] = Fraction(rng.randint(-3, 3) or 1)
        for j in range(i + 1, d):
            G[i][j] = G[j][i] = Fraction(rng.randint(-1, 1), 2)
    return G


def _matrix(n, rng):
    return [[Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)]


def cases(rng):
    G6 = _gram(6, rng)
    pairs = [(rng.randrange(64), rng.randrange(64)) for _ in range(200)]
    M = _matrix(10, rng)
    return {
        "reorder_sign x 4096 (d=12)": lambda k: [k.reorder_sign(a, b) for a in range(64) for b in range(64)],
        "orthogonal_table(10)": lambda k: k.orthogonal_table(10),
        "general_product x 200 (d=6)": lambda k: [k.general_product(a, b, G6, {}) for a, b in pairs],
        "rref_rational 10x10": lambda k: k.rref_rational([r[:] for r in M]),
        "det_rational 10x10": lambda k: k.det_rational([r[:] for r in M]),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    kernels = {"python": backend("python")}
    try:
        kernels["cython"] = backend("cython")
    except ImportError:
        print("compiled kernels unavailable; timing the fallback only")
    rng = random.Random(0)
    print(f"{'kernel':32s}" + "".join(f"{name:>12s}" for name in kernels) + "     speedup")
    for label, fn in cases(rng).items():
        times = {name: min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat))
                 for name, k in kernels.items()}
        row = f"{label:32s}" + "".join(f"{t * 1e3:10.2f}ms" for t in times.values())
        if "cython" in times:
            row += f"  {times['python'] / times['cython']:9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
