"""Pure-Python/numpy fallback for the compiled kernels.

Same signatures and semantics as the Cython module ``pmmkit._kernels``.
Single trajectories run as a scalar loop (the time recursion cannot be
vectorized); batched paths vectorize across replicates/windows instead.
"""

from __future__ import annotations

import numpy as np


def simulate_pairs(a1, a2, a3, a4, l11, l21, l22, x0, y0, eps):
    """One trajectory of Z_{t+1} = A Z_t + L w_{t+1}, L lower triangular.

    ``eps`` has shape (steps-1, 2); returns x, y arrays of length steps.
    """
    steps = eps.shape[0] + 1
    x = np.empty(steps)
    y = np.empty(steps)
    xs = float(x0)
    ys = float(y0)
    x[0] = xs
    y[0] = ys
    eu = eps[:, 0].tolist()
    ev = eps[:, 1].tolist()
    for t in range(1, steps):
        u = eu[t - 1]
        v = ev[t - 1]
        xn = a1 * xs + a2 * ys + l11 * u
        yn = a3 * xs + a4 * ys + l21 * u + l22 * v
        x[t] = xn
        y[t] = yn
        xs = xn
        ys = yn
    return x, y


def simulate_block(a1, a2, a3, a4, l11, l21, l22, x0, y0, eps):
    """Independent replicate trajectories, one per row.

    ``x0``, ``y0`` have shape (reps,); ``eps`` has shape (reps, steps-1, 2).
    """
    reps, steps_m1, _ = eps.shape
    x = np.empty((reps, steps_m1 + 1))
    y = np.empty((reps, steps_m1 + 1))
    x[:, 0] = x0
    y[:, 0] = y0
    for t in range(1, steps_m1 + 1):
        u = eps[:, t - 1, 0]
        v = eps[:, t - 1, 1]
        x[:, t] = a1 * x[:, t - 1] + a2 * y[:, t - 1] + l11 * u
        y[:, t] = a3 * x[:, t - 1] + a4 * y[:, t - 1] + l21 * u + l22 * v
    return x, y


def batch_filter_means(phi_m, phi_y, gains, b, obs):
    """Final conditional mean of the hidden state for each observation row.

    The step collapsing the predict/update pair is
        m <- phi_m[j-1] * m + phi_y[j-1] * obs[:, j-1] + gains[j-1] * obs[:, j]
    starting from m = b * obs[:, 0].  ``obs`` has shape (rows, n).
    """
    m = b * obs[:, 0]
    for j in range(1, obs.shape[1]):
        m = phi_m[j - 1] * m + phi_y[j - 1] * obs[:, j - 1] + gains[j - 1] * obs[:, j]
    return m
