"""Numba kernels for the fixed-step RK4 integration.

The arithmetic here is the reference: per-row left-to-right term
accumulation and the textbook four-stage update, written exactly like the
emitted C solver so both produce the same numbers up to rounding noise.
"""
from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _rhs(row_ptr, cols, vals, y, out):
    for t in range(out.size):
        acc = 0.0
        for e in range(row_ptr[t], row_ptr[t + 1]):
            acc += vals[e] * y[cols[e]]
        out[t] = acc


@njit(cache=True, nogil=True)
def _step(row_ptr, cols, vals, y, h, k1, k2, k3, k4, tmp):
    n = y.size
    _rhs(row_ptr, cols, vals, y, k1)
    for i in range(n):
        tmp[i] = y[i] + (h / 2.0) * k1[i]
    _rhs(row_ptr, cols, vals, tmp, k2)
    for i in range(n):
        tmp[i] = y[i] + (h / 2.0) * k2[i]
    _rhs(row_ptr, cols, vals, tmp, k3)
    for i in range(n):
        tmp[i] = y[i] + h * k3[i]
    _rhs(row_ptr, cols, vals, tmp, k4)
    for i in range(n):
        y[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])


@njit(cache=True, nogil=True)
def rk4_record(row_ptr, cols, vals, y0, h, n_steps, stride, record):
    """Integrate n_steps, recording the initial state and every stride-th
    state. Returns 0, or the step index at which the state went non-finite."""
    n = y0.size
    y = y0.copy()
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    tmp = np.empty(n)
    record[0, :] = y
    rec = 1
    for step in range(1, n_steps + 1):
        _step(row_ptr, cols, vals, y, h, k1, k2, k3, k4, tmp)
        if step % stride == 0:
            for i in range(n):
                if not np.isfinite(y[i]):
                    return step
            record[rec, :] = y
            rec += 1
    return 0


@njit(cache=True, nogil=True)
def rk4_final(row_ptr, cols, vals, y0, h, n_steps, out):
    """Integrate n_steps and write only the final state into ``out``."""
    n = y0.size
    y = y0.copy()
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    tmp = np.empty(n)
    for step in range(1, n_steps + 1):
        _step(row_ptr, cols, vals, y, h, k1, k2, k3, k4, tmp)
    for i in range(n):
        if not np.isfinite(y[i]):
            return n_steps
        out[i] = y[i]
    return 0
