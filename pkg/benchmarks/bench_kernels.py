#!/usr/bin/env python3
"""Benchmark the compiled kernels against their pure-Python twins.

Usage: python benchmarks/bench_kernels.py [--length N] [--order K] [--repeats R]
"""

import argparse
import time

import numpy as np

from entrev import _kernels_py
from entrev.synth import _uniform_doubles, make_random_chain

try:
    from entrev import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return min(times), result


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--length", type=int, default=1_000_000)
    parser.add_argument("--alphabet", type=int, default=6)
    parser.add_argument("--order", type=int, default=4)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    ids = rng.integers(0, args.alphabet, size=args.length, dtype=np.int64)
    chain = make_random_chain(args.alphabet, seed=1)
    cum_rows = np.cumsum(chain.rows, axis=1)
    init_cum = np.cumsum(np.full(args.alphabet, 1.0 / args.alphabet))
    uniforms = _uniform_doubles(7, args.length)

    backends = [("python", _kernels_py)]
    if _kernels is not None:
        backends.append(("cython", _kernels))
    else:
        print("compiled extension not available; benchmarking pure Python only")

    cases = {
        "encode_windows": lambda impl: impl.encode_windows(ids, args.order, args.alphabet),
        "markov_generate": lambda impl: impl.markov_generate(cum_rows, init_cum, uniforms),
    }

    print(f"N={args.length:,}  alphabet={args.alphabet}  window={args.order}")
    print(f"{'kernel':<18}{'backend':<10}{'best (s)':>12}{'Msym/s':>10}")
    baselines = {}
    results = {}
    for name, case in cases.items():
        for backend_name, impl in backends:
            elapsed, out = best_of(lambda: case(impl), args.repeats)
            results[(name, backend_name)] = out
            rate = args.length / elapsed / 1e6
            line = f"{name:<18}{backend_name:<10}{elapsed:>12.4f}{rate:>10.1f}"
            if backend_name == "python":
                baselines[name] = elapsed
            else:
                line += f"   ({baselines[name] / elapsed:.1f}x python)"
            print(line)

    if _kernels is not None:
        for name in cases:
            a = results[(name, "python")]
            b = results[(name, "cython")]
            assert np.array_equal(a, b), f"{name}: backends disagree"
        print("backend outputs identical: yes")


if __name__ == "__main__":
    main()
