#!/usr/bin/env python3
"""Time the numba and numpy kernel backends against each other.

Usage:
  python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from phasekey import _kernels
from phasekey.fock import choose_truncation


def best_of(fn, repeat):
    fn()  # warm-up / JIT compile
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    if not _kernels.HAS_NUMBA:
        print("numba unavailable or disabled; only the numpy backend can be timed")

    print(f"{'kernel':<34}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}{'max |diff|':>14}")
    for nbar in (3.0, 30.0, 300.0):
        trunc = choose_truncation(nbar)
        for husimi in (False, True):
            label = f"coherence_sums nbar={nbar:g} {'Q' if husimi else 'C'}"
            call = (nbar, trunc.n_max, trunc.d_max, husimi)
            t_np = best_of(lambda: _kernels.coherence_sums_numpy(*call), args.repeat)
            row = f"{label:<34}{1e3 * t_np:>12.3f}"
            if _kernels.HAS_NUMBA:
                t_nb = best_of(lambda: _kernels.coherence_sums_numba(*call), args.repeat)
                diff = np.abs(_kernels.coherence_sums_numpy(*call) - _kernels.coherence_sums_numba(*call)).max()
                row += f"{1e3 * t_nb:>12.3f}{t_np / t_nb:>10.1f}{diff:>14.2e}"
            print(row)

    rng = np.random.default_rng(0)
    for N, d_max in ((20, 60), (200, 400), (2000, 400)):
        weights = rng.random(d_max + 1) / np.arange(1, d_max + 2) ** 2
        label = f"bin_probabilities N={N} d={d_max}"
        t_np = best_of(lambda: _kernels.bin_probabilities_numpy(weights, N, 0.1), args.repeat)
        row = f"{label:<34}{1e3 * t_np:>12.3f}"
        if _kernels.HAS_NUMBA:
            t_nb = best_of(lambda: _kernels.bin_probabilities_numba(weights, N, 0.1), args.repeat)
            diff = np.abs(_kernels.bin_probabilities_numpy(weights, N, 0.1)
                          - _kernels.bin_probabilities_numba(weights, N, 0.1)).max()
            row += f"{1e3 * t_nb:>12.3f}{t_np / t_nb:>10.1f}{diff:>14.2e}"
        print(row)


if __name__ == "__main__":
    main()
