#!/usr/bin/env python3
"""Benchmark the compiled covering kernels against the pure-Python fallback.

Two workloads:
  scorer   -- raw residue-class scoring over survivor arrays
  covering -- the full greedy covering at x = 10^4 (the construct hot path)

Run after `pip install -e .` (which builds the extension when a compiler is
available):

    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from gapforge.kernels import available_backends, load_backend
from gapforge.params import derive_params
from gapforge.construction import run_phases, survivor_list
from gapforge.primes import primes_in_range

import gapforge.construction as construction
import gapforge.kernels as kernels


def bench_scorer(mod, values, primes, rounds=5):
    scorer = mod.ResidueScorer(max(primes))
    best = None
    for _ in range(rounds):
        t0 = time.perf_counter()
        acc = 0
        for q in primes:
            cnt, c = scorer.best_class(values, q)
            acc += cnt + c
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, acc


def bench_covering(backend_name):
    # swap the backend used by the construction module, then run the
    # x = 10^4 covering search end to end
    mod = load_backend(backend_name)
    saved_scorer, saved_mark = kernels.ResidueScorer, kernels.mark_residue_class
    kernels.ResidueScorer = mod.ResidueScorer
    kernels.mark_residue_class = mod.mark_residue_class
    try:
        params = derive_params(10**4, 1, 0, epsilon=0.1, C_U=2.0)
        t0 = time.perf_counter()
        U_max, _ = construction.max_covered_U(params)
        return time.perf_counter() - t0, U_max
    finally:
        kernels.ResidueScorer = saved_scorer
        kernels.mark_residue_class = saved_mark


def run_scorer_workload(label, values, primes, backends):
    print(f"scorer workload ({label}): {values.size} survivors x {len(primes)} primes")
    results = {}
    check = None
    for name in backends:
        dt, acc = bench_scorer(load_backend(name), values, primes)
        results[name] = dt
        if check is None:
            check = acc
        assert acc == check, "backends disagree"
        print(f"  scorer   {name:>7}: {dt * 1e3:9.2f} ms")
    if "c" in results and "python" in results:
        print(f"  scorer   speedup: {results['python'] / results['c']:.1f}x")


def main():
    backends = available_backends()
    print(f"backends: {', '.join(backends)}")

    params = derive_params(10**4, 1, 0, epsilon=0.1, C_U=2.0)
    _, flags = run_phases(params)
    values = np.array(survivor_list(flags), dtype=np.int64)
    primes = [p for p in primes_in_range(params.z, params.x)]
    run_scorer_workload("x = 10^4 survivors", values, primes, backends)

    # the x = 10^5 covering shape: ~5300 candidate primes over ~30k values
    big = derive_params(10**5, 1, 0, epsilon=0.1, C_U=2.0)
    rng = np.random.default_rng(1)
    values5 = np.sort(rng.choice(np.arange(1, 10**6, dtype=np.int64), 30_000, replace=False))
    primes5 = [p for p in primes_in_range(big.z, big.x)]
    run_scorer_workload("x = 10^5 shape", values5, primes5, backends)

    print("covering workload: max_covered_U at x = 10^4")
    cov = {}
    for name in backends:
        dt, U_max = bench_covering(name)
        cov[name] = dt
        print(f"  covering {name:>7}: {dt:9.3f} s   (U_max {U_max})")
    if "c" in cov and "python" in cov:
        print(f"  covering speedup: {cov['python'] / cov['c']:.1f}x")


if __name__ == "__main__":
    main()
