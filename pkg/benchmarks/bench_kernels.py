"""Compare the compiled kernels against the pure-numpy fallback.

Usage:
    python3 benchmarks/bench_kernels.py [--reps 5]

Times the three hot paths (CNM agglomeration, greedy e2d2 sweeps, the
correlated-edge Markov step) on both backends and checks that results
agree bitwise.  The numba backend needs one warm-up call per kernel for
JIT compilation; warm-up time is reported separately.
"""

import argparse
import time

import numpy as np

from tempotest import kernels
from tempotest.community import fast_greedy_k, greedy_e2d2_max
from tempotest.generators import sample_er
from tempotest.seeding import make_rng, seed_sequence


def timeit(fn, reps):
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_case(n, p, seed, reps):
    g = sample_er(n, p, make_rng(seed_sequence(seed)))
    rows = []
    for label, backend in (("numba", "numba"), ("numpy", "numpy")):
        if backend == "numba" and not kernels.HAS_NUMBA:
            continue
        t_fg, part_fg = timeit(lambda: fast_greedy_k(g, 8, backend=backend), reps)
        t_gr, out_gr = timeit(lambda: greedy_e2d2_max(g, 8, backend=backend), reps)
        rows.append((label, t_fg, t_gr, part_fg, out_gr))
    return g, rows


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--reps", type=int, default=5)
    args = ap.parse_args()

    print(f"numba available: {kernels.HAS_NUMBA}  (active backend: {kernels.BACKEND})")
    if kernels.HAS_NUMBA:
        t0 = time.perf_counter()
        warm = sample_er(50, 0.2, make_rng(seed_sequence(1)))
        fast_greedy_k(warm, 4, backend="numba")
        greedy_e2d2_max(warm, 4, backend="numba")
        print(f"jit warm-up: {time.perf_counter() - t0:.2f}s")

    cases = [(200, 0.10, 11), (500, 0.05, 12), (1000, 0.02, 13), (2000, 0.01, 14)]
    print(f"\n{'n':>5} {'backend':>7} {'fast_greedy_k':>14} {'greedy_e2d2':>12}")
    for n, p, seed in cases:
        g, rows = bench_case(n, p, seed, args.reps)
        for label, t_fg, t_gr, _, _ in rows:
            print(f"{n:>5} {label:>7} {t_fg * 1e3:>12.1f}ms {t_gr * 1e3:>10.1f}ms")
        if len(rows) == 2:
            same_part = np.array_equal(rows[0][3].labels, rows[1][3].labels)
            same_u = rows[0][4][1] == rows[1][4][1]
            print(f"{'':>5} {'agree':>7} partitions={same_part} u={same_u}")

    # correlated-edge step on raw pair vectors
    print(f"\ncorr_step, 1e6 pairs:")
    rng = make_rng(seed_sequence(99))
    prev = rng.random(1_000_000) < 0.01
    bvec = np.full(1_000_000, 0.01)
    u = rng.random(1_000_000)
    for backend in ("numba", "numpy"):
        if backend == "numba" and not kernels.HAS_NUMBA:
            continue
        kernels.corr_step(prev, bvec, 0.25, u, backend=backend)  # warm
        t, out = timeit(lambda: kernels.corr_step(prev, bvec, 0.25, u, backend=backend), args.reps)
        print(f"  {backend:>7} {t * 1e3:>8.2f}ms  (density {out.mean():.5f})")


if __name__ == "__main__":
    main()
