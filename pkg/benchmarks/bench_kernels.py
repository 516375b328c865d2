"""Compare the numba and numpy backends of the dense mod-q Laurent product.

Usage: python3 benchmarks/bench_kernels.py [--maxlen 7] [--repeat 3]

Two workloads: raw products of random dense matrices of growing width, and
the free-word enumeration for f^3, k^3 (the hot loop of ``burau-pong free``).
The first numba call includes compilation and is reported separately.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from burau_pong import kernels
from burau_pong.burau import builtin
from burau_pong.kernels import DEFAULT_MODULUS, LaurentMatrix, matmul_mod


def _best(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_products(widths, reps: int, repeat: int, q: int = DEFAULT_MODULUS) -> None:
    rng = np.random.default_rng(0)
    print(f"{'width':>6} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for w in widths:
        pairs = [(rng.integers(0, q, (3, 3, w), dtype=np.int64), rng.integers(0, q, (3, 3, w), dtype=np.int64))
                 for _ in range(reps)]

        def run(use):
            for A, B in pairs:
                matmul_mod(A, 0, B, 0, q, use_numba=use)

        t_np = _best(lambda: run(False), repeat)
        t_nb = _best(lambda: run(True), repeat)
        print(f"{w:>6} {1000 * t_np:>10.2f} {1000 * t_nb:>10.2f} {t_np / t_nb:>8.1f}")


def enumerate_words(maxlen: int, use: bool) -> int:
    data = builtin(0)
    q = DEFAULT_MODULUS
    letters = [data.power("f", 3), data.power("f", -3), data.power("k", 3), data.power("k", -3)]
    dense = [LaurentMatrix.from_mat(m, q) for m in letters]
    inverse_of = [1, 0, 3, 2]
    count = 0
    stack = [(j, 1, dense[j]) for j in range(4)]
    while stack:
        last, length, M = stack.pop()
        count += 1
        if length < maxlen:
            for j in range(4):
                if j != inverse_of[last]:
                    stack.append((j, length + 1, M.matmul(dense[j], use_numba=use)))
    return count


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--maxlen", type=int, default=7)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if not kernels.USE_NUMBA:
        print("numba is disabled (BURAU_PONG_NO_NUMBA set or numba missing); nothing to compare")
        return
    A = np.ones((3, 3, 2), dtype=np.int64)
    t0 = time.perf_counter()
    kernels._matmul_numba(A, A, 7)
    print(f"first numba call (compile or cache load): {1000 * (time.perf_counter() - t0):.1f} ms\n")

    bench_products([4, 16, 64, 256], reps=200, repeat=args.repeat)

    print(f"\nfree-word enumeration, f^3 and k^3, block length <= {args.maxlen}")
    for use, name in ((False, "numpy"), (True, "numba")):
        t = _best(lambda: enumerate_words(args.maxlen, use), args.repeat)
        print(f"  {name:>5}: {t:.3f} s ({enumerate_words(args.maxlen, use)} words)")


if __name__ == "__main__":
    main()
