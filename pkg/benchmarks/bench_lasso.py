#!/usr/bin/env python3
"""Benchmark: compiled vs pure-NumPy coordinate-descent Lasso kernel.

Times both backends on problem sizes shaped like the pipeline's workloads
(dictionary-learning columns and merged-dictionary coding) and prints a
speedup table. Run from the repository root:

    python benchmarks/bench_lasso.py
"""

import time

import numpy as np

from gaitradar.kernels import _lasso_cy, _lasso_py

CASES = [
    # (rows, atoms, columns, xi)  -- representative of pipeline stages
    ("dict-learn step", 512, 48, 64, 0.8),
    ("merged coding (desk)", 512, 384, 61, 0.8),
    ("merged coding (wide)", 512, 1024, 16, 0.8),
]


def run_backend(kernel, gram, corr_all, ynorm2_all, xi):
    start = time.perf_counter()
    total_sweeps = 0
    for j in range(corr_all.shape[1]):
        alpha = np.zeros(gram.shape[0])
        _, sweeps = kernel.cd_lasso_gram(
            gram, np.ascontiguousarray(corr_all[:, j]), float(ynorm2_all[j]), xi, alpha, 2000, 1e-8
        )
        total_sweeps += sweeps
    return time.perf_counter() - start, total_sweeps


def main():
    rng = np.random.default_rng(0)
    print(f"{'case':24s} {'atoms':>6s} {'cols':>5s} {'numpy':>9s} {'cython':>9s} {'speedup':>8s}")
    for name, rows, atoms, cols, xi in CASES:
        d = rng.standard_normal((rows, atoms))
        d /= np.linalg.norm(d, axis=0)
        y = d @ (rng.standard_normal((atoms, cols)) * (rng.random((atoms, cols)) < 0.05))
        y += 0.05 * rng.standard_normal((rows, cols))
        gram = np.ascontiguousarray(d.T @ d)
        corr_all = d.T @ y
        ynorm2_all = np.sum(y * y, axis=0)

        t_py, sweeps_py = run_backend(_lasso_py, gram, corr_all, ynorm2_all, xi)
        t_cy, sweeps_cy = run_backend(_lasso_cy, gram, corr_all, ynorm2_all, xi)
        assert sweeps_py == sweeps_cy, "backends diverged"
        print(f"{name:24s} {atoms:6d} {cols:5d} {t_py:8.3f}s {t_cy:8.3f}s {t_py / t_cy:7.1f}x")


if __name__ == "__main__":
    main()
