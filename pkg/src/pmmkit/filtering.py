"""Exact recursive filtering: E[X_n | Y_1:n] and V[X_n | Y_1:n].

The pair (X_n, Y_n) is the Markov state, so the one-step predict uses both
the current conditional mean of X_n and the last observation.  With
A = [[a1, a2], [a3, a4]], Q = [[q11, q12], [., q22]] and P the current
conditional variance, the update gain is

    G = (a1*a3*P + q12) / (a3^2*P + q22)

and one step reads

    m' = a1*m + a2*y_n + G*(y_{n+1} - a3*m - a4*y_n)
    P' = a1^2*P + q11 - G^2*(a3^2*P + q22).

P depends on the model only, never on the observed values.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .model import InvalidModelError, PmmParams, TransitionModel

__all__ = [
    "FilterState",
    "filter_init",
    "filter_step",
    "run_filter",
    "filter_variance_sequence",
    "filter_gain_sequence",
    "batch_filter_means",
]

# Below this, Y_{n+1} is numerically deterministic given (X_n, Y_n) and the
# update gain is ill-posed.
DEGENERATE_DENOMINATOR = 1e-14


@dataclass(frozen=True)
class FilterState:
    """Conditional law of the hidden state after n observations."""

    n: int
    mean: float
    variance: float
    last_y: float


def filter_init(p: PmmParams, y1: float) -> FilterState:
    """Condition X_1 on Y_1 in the bivariate standard-normal pair."""
    return FilterState(n=1, mean=p.b * y1, variance=1.0 - p.b * p.b, last_y=y1)


def filter_step(s: FilterState, m: TransitionModel, y_next: float) -> FilterState:
    """Absorb one more observation."""
    a1, a2 = m.A[0]
    a3, a4 = m.A[1]
    q11, q12 = m.Q[0]
    q22 = m.Q[1, 1]
    denom = a3 * a3 * s.variance + q22
    if denom <= DEGENERATE_DENOMINATOR:
        raise InvalidModelError(
            f"degenerate observation channel (innovation variance {denom:g})"
        )
    gain = (a1 * a3 * s.variance + q12) / denom
    mean = a1 * s.mean + a2 * s.last_y + gain * (y_next - a3 * s.mean - a4 * s.last_y)
    variance = a1 * a1 * s.variance + q11 - gain * gain * denom
    return FilterState(
        n=s.n + 1,
        mean=mean,
        variance=max(variance, 0.0),  # guard roundoff at near-degenerate models
        last_y=y_next,
    )


def run_filter(m: TransitionModel, ys) -> FilterState:
    """Filter a whole observation sequence.

    Initialization only needs b, which the transition model carries in its
    marginal, so this is filter_init followed by filter_step over ys[1:].
    """
    ys = np.asarray(ys, dtype=float)
    if ys.ndim != 1 or ys.size < 1:
        raise ValueError("need a 1-d sequence with at least one observation")
    state = FilterState(n=1, mean=m.b * ys[0], variance=1.0 - m.b * m.b, last_y=ys[0])
    for y in ys[1:]:
        state = filter_step(state, m, float(y))
    return state


def _variance_and_gains(m: TransitionModel, n: int) -> tuple[np.ndarray, np.ndarray]:
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    a1, _ = m.A[0]
    a3, _ = m.A[1]
    q11, q12 = m.Q[0]
    q22 = m.Q[1, 1]
    b = m.b
    variances = np.empty(n)
    gains = np.empty(n - 1)
    variances[0] = 1.0 - b * b
    for t in range(1, n):
        p_prev = variances[t - 1]
        denom = a3 * a3 * p_prev + q22
        if denom <= DEGENERATE_DENOMINATOR:
            raise InvalidModelError(
                f"degenerate observation channel (innovation variance {denom:g})"
            )
        g = (a1 * a3 * p_prev + q12) / denom
        gains[t - 1] = g
        variances[t] = max(a1 * a1 * p_prev + q11 - g * g * denom, 0.0)
    return variances, gains


def filter_variance_sequence(m: TransitionModel, n: int) -> np.ndarray:
    """V[X_t | Y_1:t] for t = 1..n; observation-independent."""
    return _variance_and_gains(m, n)[0]


def filter_gain_sequence(m: TransitionModel, n: int) -> np.ndarray:
    """The gains used at steps 2..n; observation-independent."""
    return _variance_and_gains(m, n)[1]


def batch_filter_means(m: TransitionModel, obs: np.ndarray) -> np.ndarray:
    """Final filter mean for every row of ``obs`` (shape (rows, n)).

    Row i yields the same value as ``run_filter(m, obs[i]).mean``; the heavy
    lifting runs in the kernel backend.
    """
    obs = np.ascontiguousarray(obs, dtype=float)
    if obs.ndim != 2 or obs.shape[1] < 1:
        raise ValueError("obs must be 2-d with at least one column")
    n = obs.shape[1]
    if n == 1:
        return m.b * obs[:, 0]
    a1, a2 = m.A[0]
    a3, a4 = m.A[1]
    _, gains = _variance_and_gains(m, n)
    phi_m = a1 - gains * a3
    phi_y = a2 - gains * a4
    return kernels.batch_filter_means(phi_m, phi_y, gains, m.b, obs)
