#!/usr/bin/env python3
"""Benchmark the compiled kernel against the numpy fallback.

Workloads mirror the two hot paths of the verification suite: the
exhaustive corner-product vanishing sweep (many chain norms) and the
weighted chain sums behind the linear invariance right-hand sides.

Usage: python benchmarks/bench_kernels.py [--pairs N] [--repeat R]
"""

import argparse
import itertools
import time

import numpy as np

from boolperm import _kernels_py
from boolperm.partitions import canonical_partition
from boolperm.semigroup import build_standard_rep

try:
    from boolperm import _kernels_cy
except ImportError:
    _kernels_cy = None


def vanishing_workload(n=4, k=5):
    rep = build_standard_rep(n)
    tuples = list(itertools.product(range(1, n + 1), repeat=k))
    classes = [canonical_partition(t) for t in tuples]
    rows, cols = [], []
    for a, ta in enumerate(tuples):
        for b, tb in enumerate(tuples):
            if classes[a] != classes[b]:
                rows.append(ta)
                cols.append(tb)
    return (rep.u, rep.P,
            np.asarray(rows, dtype=np.int64) - 1,
            np.asarray(cols, dtype=np.int64) - 1)


def weighted_workload(n=4, k=5, m=200_000, seed=0):
    rep = build_standard_rep(n)
    rng = np.random.default_rng(seed)
    rows = rng.integers(0, n, size=(m, k)).astype(np.int64)
    cols = rng.integers(0, n, size=(m, k)).astype(np.int64)
    weights = rng.normal(size=m) + 1j * rng.normal(size=m)
    return rep.u, rep.P, rows, cols, weights


def timed(fn, *args, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=200_000,
                        help="batch size for the weighted-sum workload")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = [("numpy", _kernels_py)]
    if _kernels_cy is not None:
        backends.append(("cython", _kernels_cy))
    else:
        print("compiled kernel not built; benchmarking numpy only")

    u, P, rows, cols = vanishing_workload()
    print(f"\nvanishing sweep: {len(rows)} chain norms, k=5, dim={P.shape[0]}")
    baseline = None
    for name, mod in backends:
        t, norms = timed(mod.chain_maxabs_batch, u, P, rows, cols, repeat=args.repeat)
        rate = len(rows) / t / 1e6
        speedup = "" if baseline is None else f"  ({baseline / t:.1f}x vs numpy)"
        baseline = baseline or t
        print(f"  {name:7s} {t:8.3f}s  {rate:6.2f} M chains/s  max={norms.max():.1e}{speedup}")

    u, P, rows, cols, weights = weighted_workload(m=args.pairs)
    print(f"\nweighted chain sum: {len(rows)} weighted chains, k=5, dim={P.shape[0]}")
    baseline = None
    reference = None
    for name, mod in backends:
        t, total = timed(mod.weighted_chain_sum, u, P, rows, cols, weights, repeat=args.repeat)
        if reference is None:
            reference = total
        agree = np.abs(total - reference).max()
        rate = len(rows) / t / 1e6
        speedup = "" if baseline is None else f"  ({baseline / t:.1f}x vs numpy)"
        baseline = baseline or t
        print(f"  {name:7s} {t:8.3f}s  {rate:6.2f} M chains/s  |delta|={agree:.1e}{speedup}")


if __name__ == "__main__":
    main()
