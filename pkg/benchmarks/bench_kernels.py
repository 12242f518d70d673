#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the three hot paths at production-like sizes: one long trajectory,
a Monte Carlo replicate block, and a batch of sliding filter windows.
Run as: python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from pmmkit import _kernels_py
from pmmkit.filtering import _variance_and_gains
from pmmkit.model import PmmParams, markov_form
from pmmkit.simulate import _chol2

try:
    from pmmkit import _kernels
except ImportError:
    _kernels = None

MODEL = markov_form(PmmParams(0.9, -0.2, 0.036, -0.18, -0.58))
REPEATS = 3


def best_of(fn, *args):
    times = []
    for _ in range(REPEATS):
        started = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - started)
    return min(times)


def build_cases():
    rng = np.random.default_rng(0)
    a1, a2 = MODEL.A[0]
    a3, a4 = MODEL.A[1]
    l11, l21, l22 = _chol2(MODEL.Q)

    n_long = 1_000_000
    eps_long = rng.standard_normal((n_long - 1, 2))

    reps, steps = 100_000, 30
    x0 = rng.standard_normal(reps)
    y0 = rng.standard_normal(reps)
    eps_block = rng.standard_normal((reps, steps - 1, 2))

    windows, width = 20_000, 50
    obs = rng.standard_normal((windows, width))
    _, gains = _variance_and_gains(MODEL, width)
    phi_m = a1 - gains * a3
    phi_y = a2 - gains * a4

    return [
        (
            f"simulate_pairs ({n_long:,} steps)",
            "simulate_pairs",
            (a1, a2, a3, a4, l11, l21, l22, 0.1, -0.2, eps_long),
        ),
        (
            f"simulate_block ({reps:,} x {steps})",
            "simulate_block",
            (a1, a2, a3, a4, l11, l21, l22, x0, y0, eps_block),
        ),
        (
            f"batch_filter_means ({windows:,} x {width})",
            "batch_filter_means",
            (phi_m, phi_y, gains, MODEL.b, obs),
        ),
    ]


def main():
    print(f"{'kernel':<40} {'python':>10} {'cython':>10} {'speedup':>8}")
    for label, name, args in build_cases():
        t_py = best_of(getattr(_kernels_py, name), *args)
        if _kernels is None:
            print(f"{label:<40} {t_py * 1e3:9.1f}ms {'n/a':>10} {'n/a':>8}")
            continue
        t_cy = best_of(getattr(_kernels, name), *args)
        print(
            f"{label:<40} {t_py * 1e3:9.1f}ms {t_cy * 1e3:9.1f}ms "
            f"{t_py / t_cy:7.1f}x"
        )


if __name__ == "__main__":
    main()
