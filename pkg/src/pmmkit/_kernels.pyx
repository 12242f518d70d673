# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: trajectory simulation and batched filtering.

Mirrors pmmkit._kernels_py; see that module for the reference semantics.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def simulate_pairs(double a1, double a2, double a3, double a4,
                   double l11, double l21, double l22,
                   double x0, double y0,
                   cnp.ndarray[cnp.float64_t, ndim=2] eps):
    cdef Py_ssize_t steps = eps.shape[0] + 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] x = np.empty(steps)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] y = np.empty(steps)
    cdef double xs = x0
    cdef double ys = y0
    cdef double u, v, xn, yn
    cdef Py_ssize_t t
    x[0] = xs
    y[0] = ys
    for t in range(1, steps):
        u = eps[t - 1, 0]
        v = eps[t - 1, 1]
        xn = a1 * xs + a2 * ys + l11 * u
        yn = a3 * xs + a4 * ys + l21 * u + l22 * v
        x[t] = xn
        y[t] = yn
        xs = xn
        ys = yn
    return x, y


def simulate_block(double a1, double a2, double a3, double a4,
                   double l11, double l21, double l22,
                   cnp.ndarray[cnp.float64_t, ndim=1] x0,
                   cnp.ndarray[cnp.float64_t, ndim=1] y0,
                   cnp.ndarray[cnp.float64_t, ndim=3] eps):
    cdef Py_ssize_t reps = eps.shape[0]
    cdef Py_ssize_t steps = eps.shape[1] + 1
    cdef cnp.ndarray[cnp.float64_t, ndim=2] x = np.empty((reps, steps))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] y = np.empty((reps, steps))
    cdef double xs, ys, u, v, xn, yn
    cdef Py_ssize_t i, t
    for i in range(reps):
        xs = x0[i]
        ys = y0[i]
        x[i, 0] = xs
        y[i, 0] = ys
        for t in range(1, steps):
            u = eps[i, t - 1, 0]
            v = eps[i, t - 1, 1]
            xn = a1 * xs + a2 * ys + l11 * u
            yn = a3 * xs + a4 * ys + l21 * u + l22 * v
            x[i, t] = xn
            y[i, t] = yn
            xs = xn
            ys = yn
    return x, y


def batch_filter_means(cnp.ndarray[cnp.float64_t, ndim=1] phi_m,
                       cnp.ndarray[cnp.float64_t, ndim=1] phi_y,
                       cnp.ndarray[cnp.float64_t, ndim=1] gains,
                       double b,
                       cnp.ndarray[cnp.float64_t, ndim=2] obs):
    cdef Py_ssize_t rows = obs.shape[0]
    cdef Py_ssize_t n = obs.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(rows)
    cdef double m
    cdef Py_ssize_t i, j
    for i in range(rows):
        m = b * obs[i, 0]
        for j in range(1, n):
            m = phi_m[j - 1] * m + phi_y[j - 1] * obs[i, j - 1] + gains[j - 1] * obs[i, j]
        out[i] = m
    return out
