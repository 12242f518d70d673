"""Brute-force ground truth by explicit Gaussian conditioning.

Assembles the full joint covariance of (X_1..X_{n+k}, Y_1..Y_n) from the
pair cross-covariances Cov[Z_{t+j}, Z_t] = A^j M and conditions by Schur
complement.  Only meant for small instances; the recursive modules are the
production path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .model import InvalidModelError, PmmParams, markov_form

__all__ = [
    "JointCovariance",
    "build_joint",
    "conditional",
    "oracle_filter",
    "oracle_forecast",
]

DEFAULT_CAP = 16


@dataclass(frozen=True)
class JointCovariance:
    """Joint covariance over the stacked order X_1..X_{n+k}, Y_1..Y_n."""

    n_observed: int
    horizon: int
    matrix: np.ndarray

    def __post_init__(self) -> None:
        self.matrix.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def x_index(self, t: int) -> int:
        """Stacked index of X_t (t is 1-based)."""
        total = self.n_observed + self.horizon
        if not 1 <= t <= total:
            raise IndexError(f"X_{t} outside 1..{total}")
        return t - 1

    def y_index(self, t: int) -> int:
        """Stacked index of Y_t (t is 1-based)."""
        if not 1 <= t <= self.n_observed:
            raise IndexError(f"Y_{t} outside 1..{self.n_observed}")
        return self.n_observed + self.horizon + t - 1


def build_joint(p: PmmParams, n: int, k: int, cap: int = DEFAULT_CAP) -> JointCovariance:
    """Joint covariance of (X_1..X_{n+k}, Y_1..Y_n) under the model."""
    if n < 1 or k < 0:
        raise ValueError(f"need n >= 1 and k >= 0, got n={n}, k={k}")
    if n + k > cap:
        raise ValueError(f"n + k = {n + k} exceeds the oracle cap {cap}")
    m = markov_form(p)
    total = n + k
    # lags[j] = Cov[Z_{t+j}, Z_t] = A^j M
    lags = [np.array(m.marginal)]
    for _ in range(total - 1):
        lags.append(m.A @ lags[-1])

    def cov(s: int, t: int, row: int, col: int) -> float:
        # Cov[component row of Z_s, component col of Z_t]
        if s >= t:
            return lags[s - t][row, col]
        return lags[t - s][col, row]

    dim = total + n
    g = np.empty((dim, dim))
    for s in range(1, total + 1):
        for t in range(1, total + 1):
            g[s - 1, t - 1] = cov(s, t, 0, 0)
    for s in range(1, total + 1):
        for t in range(1, n + 1):
            val = cov(s, t, 0, 1)
            g[s - 1, total + t - 1] = val
            g[total + t - 1, s - 1] = val
    for s in range(1, n + 1):
        for t in range(1, n + 1):
            g[total + s - 1, total + t - 1] = cov(s, t, 1, 1)
    return JointCovariance(n_observed=n, horizon=k, matrix=g)


def conditional(
    joint: JointCovariance, target_index: int, given_indices
) -> tuple[np.ndarray, float]:
    """Weights w and variance of target | given: E = w @ given values."""
    given = np.asarray(given_indices, dtype=int)
    g = joint.matrix
    sigma_gg = g[np.ix_(given, given)]
    sigma_gt = g[given, target_index]
    try:
        f = cho_factor(sigma_gg)
    except np.linalg.LinAlgError as exc:
        raise InvalidModelError(f"conditioning block is singular: {exc}") from exc
    weights = cho_solve(f, sigma_gt)
    variance = float(g[target_index, target_index] - sigma_gt @ weights)
    return weights, variance


def oracle_filter(p: PmmParams, ys) -> tuple[float, float]:
    """Exact E[X_n | Y_1:n] and V[X_n | Y_1:n] by joint conditioning."""
    ys = np.asarray(ys, dtype=float)
    n = ys.size
    joint = build_joint(p, n, 0)
    w, var = conditional(
        joint, joint.x_index(n), [joint.y_index(t) for t in range(1, n + 1)]
    )
    return float(w @ ys), var


def oracle_forecast(p: PmmParams, ys, k: int) -> tuple[float, float]:
    """Exact E[X_{n+k} | Y_1:n] and its variance by joint conditioning."""
    ys = np.asarray(ys, dtype=float)
    n = ys.size
    joint = build_joint(p, n, k)
    w, var = conditional(
        joint, joint.x_index(n + k), [joint.y_index(t) for t in range(1, n + 1)]
    )
    return float(w @ ys), var
