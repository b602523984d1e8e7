#!/usr/bin/env python3
"""Time the numba kernels against their numpy fallbacks.

Usage:
    python benchmarks/bench_kernels.py [--repeat 5]

The first numba call includes JIT compilation (or cache load) and is
reported separately.
"""

import argparse
import itertools
import time

import numpy as np

from vibrocue import _kernels
from vibrocue.stats import midranks


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def frames_case(n_events=5000, n_frames=2_000_000):
    # a long playlist of rabbit-style pulses at 100 kHz
    rng = np.random.default_rng(0)
    act = rng.integers(1, 11, n_events).astype(np.int64)
    lo = np.sort(rng.integers(0, n_frames - 20000, n_events)).astype(np.int64)
    hi = lo + 12500
    val = rng.random(n_events)
    return (lo, hi, act, val, n_frames, 10)


def friedman_case(n=9, k=3):
    rng = np.random.default_rng(1)
    ranks = np.vstack([midranks(r) for r in rng.random((n, k))])
    pr = np.ascontiguousarray(ranks[:, list(itertools.permutations(range(k)))])
    return (pr, float(np.sum(ranks.sum(axis=0) ** 2)), 1e-9)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    cases = [
        ("fill_frames", _kernels.fill_frames_numba, _kernels.fill_frames_numpy, frames_case()),
        ("friedman_tail n=9 k=3", _kernels.friedman_tail_numba, _kernels.friedman_tail_numpy, friedman_case()),
    ]
    print(f"{'kernel':<24}{'numba first':>14}{'numba':>12}{'numpy':>12}{'speedup':>10}")
    for name, nb, npy, case in cases:
        t0 = time.perf_counter()
        a = nb(*case)
        first = time.perf_counter() - t0
        b = npy(*case)
        same = np.array_equal(a, b) if isinstance(a, np.ndarray) else a == b
        if not same:
            raise SystemExit(f"{name}: numba and numpy results differ")
        t_nb = best_of(lambda: nb(*case), args.repeat)
        t_np = best_of(lambda: npy(*case), max(1, args.repeat // 2))
        print(f"{name:<24}{first * 1e3:>12.1f}ms{t_nb * 1e3:>10.1f}ms{t_np * 1e3:>10.1f}ms{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
