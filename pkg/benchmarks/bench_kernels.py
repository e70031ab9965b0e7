#!/usr/bin/env python3
"""Benchmark the compiled kernels against the NumPy fallback.

Both backends draw the identical splitmix64 stream, so this measures pure
implementation speed on the hot inner loops.

    python benchmarks/bench_kernels.py
"""
import time

import numpy as np

from vera.engine import _kernels_py

try:
    from vera.engine import _kernels
except ImportError:
    _kernels = None

SIR_CASES = [  # (N, horizon)
    (1_000, 120),
    (10_000, 120),
    (100_000, 120),
    (1_000_000, 120),
]
PHENOMENON_CASES = [  # (pool, horizon)
    (10_000, 120),
    (100_000, 120),
]
REPEATS = 3


def best_of(func, *args):
    timings = []
    for _ in range(REPEATS):
        start = time.perf_counter()
        func(*args)
        timings.append(time.perf_counter() - start)
    return min(timings)


def main():
    backends = [("numpy", _kernels_py)]
    if _kernels is not None:
        backends.insert(0, ("cython", _kernels))
    else:
        print("compiled kernels not built; benchmarking the fallback only")

    print(f"{'kernel':<14} {'size':>10} " +
          " ".join(f"{name:>10}" for name, _ in backends) + "   speedup")
    for n, horizon in SIR_CASES:
        args = (n - n // 100, n // 100, 0, 16.0, 0.025, 1 / 14, horizon, 42)
        times = [best_of(mod.sir_chain, *args) for _, mod in backends]
        speedup = times[-1] / times[0] if len(times) == 2 else float("nan")
        print(f"{'sir_chain':<14} {n:>10,} " +
              " ".join(f"{t * 1e3:>8.1f}ms" for t in times) +
              f"   {speedup:>5.1f}x")
    for pool, horizon in PHENOMENON_CASES:
        args = (10, pool, 4, 0.5, 1, 12, 30, horizon, 42)
        times = [best_of(mod.phenomenon_chain, *args) for _, mod in backends]
        speedup = times[-1] / times[0] if len(times) == 2 else float("nan")
        print(f"{'phenomenon':<14} {pool:>10,} " +
              " ".join(f"{t * 1e3:>8.1f}ms" for t in times) +
              f"   {speedup:>5.1f}x")

    if _kernels is not None:
        check = [np.array_equal(a, b) for a, b in zip(
            _kernels.sir_chain(9990, 10, 0, 16.0, 0.025, 1 / 14, 120, 7),
            _kernels_py.sir_chain(9990, 10, 0, 16.0, 0.025, 1 / 14, 120, 7))]
        print(f"\nbackends bit-identical: {all(check)}")


if __name__ == "__main__":
    main()
