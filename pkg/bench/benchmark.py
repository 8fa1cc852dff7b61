"""Compare the numba and numpy backends.

    python bench/benchmark.py [--sizes 300 800 1500] [--repeat 3]

Times ``rank_mod_p`` on random square matrices and the K3 sieve on a fixed
weight box, checks that both backends agree, and prints one line per case.
Numba compile time is excluded by a warm-up call.
"""
import argparse
import time

import numpy as np

from wcihodge import kernels
from wcihodge._accel import HAVE_NUMBA
from wcihodge.jacobian import PRIMES


def _best(fn, repeat):
    out, best = None, float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return out, best


def bench_rank(sizes, repeat, backends):
    p = PRIMES[0]
    rng = np.random.default_rng(0)
    for size in sizes:
        A = rng.integers(0, p, size=(size, size), dtype=np.int64)
        # make the rank deficient so both paths do real pivot searching
        A[-size // 10:] = A[: size // 10]
        results = {}
        for b in backends:
            kernels.rank_mod_p(A[:8, :8], p, b)
            results[b] = _best(lambda: kernels.rank_mod_p(A, p, b), repeat)
        ranks = {r for r, _ in results.values()}
        line = "  ".join(f"{b} {t:8.3f}s" for b, (_, t) in results.items())
        print(f"rank {size:>5}x{size:<5} rank={ranks.pop() if len(ranks) == 1 else 'MISMATCH'}  {line}")


def bench_sieve(cases, repeat, backends):
    for N, bound, conventional in cases:
        nvars, q0 = N + 1, (N - 3) // 2
        shards = [(a0, a1) for a0 in range(1, bound + 1) for a1 in range(a0, bound + 1)]

        def run(b):
            return sum(len(kernels.k3_sieve(s, nvars, bound, q0, conventional, b)) for s in shards)

        results = {}
        for b in backends:
            kernels.k3_sieve((1, 1), nvars, 3, q0, conventional, b)
            results[b] = _best(lambda: run(b), repeat)
        counts = {c for c, _ in results.values()}
        mode = "conventional" if conventional else "strict"
        line = "  ".join(f"{b} {t:8.3f}s" for b, (_, t) in results.items())
        print(f"sieve N={N} bound={bound} {mode:<12} count={counts.pop() if len(counts) == 1 else 'MISMATCH'}  {line}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[200, 500, 1000])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = ["numba", "numpy"] if HAVE_NUMBA else ["numpy"]
    bench_rank(args.sizes, args.repeat, backends)
    bench_sieve([(5, 30, True), (5, 12, False), (7, 12, True)], args.repeat, backends)


if __name__ == "__main__":
    main()
