"""Compiled inner loops for nested-recurrence and system evaluation.

All kernels operate on 0-based numpy arrays holding a 1-indexed sequence
(a[i] stores term i+1) and return plain status tuples; the wrapping layer
in recurrence.py / systems.py translates these into domain objects.

Status codes shared by every kernel:
    0  alive through cap
    1  dead (a referenced argument left the defined range)
    2  overflow (a computed value left the checked magnitude window)
    3  non-integer index (system evaluation only; raised by the exact
       engine, reserved here so codes stay aligned)
"""
from __future__ import annotations

import numpy as np
from numba import njit

STATUS_ALIVE = 0
STATUS_DEAD = 1
STATUS_OVERFLOW = 2
STATUS_NON_INTEGER = 3

# Magnitude guard for stored values. Sums of up to 8 guarded terms plus the
# additive constant stay below 2**63, so intermediate sums cannot wrap.
VALUE_GUARD = 1 << 59
MAX_TERMS = 8

# uint32 compact storage holds values in [0, 2**32).
U32_LIMIT = 1 << 32


@njit(cache=True, nogil=True)
def eval_nested_i64(a, ic_len, cap, ps, qs, c):
    """Fill a[ic_len:cap] with terms of a(n) = c + sum_j a(n - p_j - a(n - q_j)).

    Returns (status, computed_len, death_index, offending_argument,
    offending_term). Indices are 1-based; a referenced argument must lie in
    [1, n-1] or evaluation stops dead at n.
    """
    nt = ps.shape[0]
    for n in range(ic_len + 1, cap + 1):
        total = c
        for j in range(nt):
            inner = n - qs[j]
            if inner < 1 or inner > n - 1:
                return STATUS_DEAD, n - 1, n, inner, j
            v = a[inner - 1]
            # argument n - p - v is in [1, n-1] iff 1 - p <= v <= n - p - 1
            if v < 1 - ps[j] or v > n - ps[j] - 1:
                return STATUS_DEAD, n - 1, n, n - ps[j] - v, j
            total += a[n - ps[j] - v - 1]
        if total < -VALUE_GUARD or total > VALUE_GUARD:
            return STATUS_OVERFLOW, n - 1, n, total, -1
        a[n - 1] = total
    return STATUS_ALIVE, cap, 0, 0, -1


@njit(cache=True, nogil=True)
def eval_nested_u32(a, ic_len, cap, ps, qs, c):
    """uint32-storage variant of eval_nested_i64 for multi-billion-term runs.

    Arithmetic is carried out in int64; values outside [0, 2**32) overflow.
    """
    nt = ps.shape[0]
    for n in range(ic_len + 1, cap + 1):
        total = np.int64(c)
        for j in range(nt):
            inner = n - qs[j]
            if inner < 1 or inner > n - 1:
                return STATUS_DEAD, n - 1, n, inner, j
            v = np.int64(a[inner - 1])
            if v < 1 - ps[j] or v > n - ps[j] - 1:
                return STATUS_DEAD, n - 1, n, n - ps[j] - v, j
            total += np.int64(a[n - ps[j] - v - 1])
        if total < 0 or total >= U32_LIMIT:
            return STATUS_OVERFLOW, n - 1, n, total, -1
        a[n - 1] = np.uint32(total)
    return STATUS_ALIVE, cap, 0, 0, -1


@njit(cache=True, nogil=True)
def eval_system_i64(f, g, ic_len_f, ic_len_g, cap, c_f, d_f, c_g, d_g):
    """Evaluate the Golomb-like system with all-integer initial conditions.

        f(n) = g(n - g(n-1) - c_f) + d_f   (index must land in [1, n-1])
        g(n) = f(n - f(n) - c_g) + d_g     (index must land in [1, n]; the
                                            freshly computed f(n) is usable)

    For each n the f-step runs before the g-step. Returns
    (status, computed_len, death_index, offending_index, which_step) with
    which_step 0 for the f-step and 1 for the g-step. computed_len counts
    indices where both sequences are defined.
    """
    start = min(ic_len_f, ic_len_g) + 1
    for n in range(start, cap + 1):
        if n > ic_len_f:
            idx = n - g[n - 2] - c_f
            if idx < 1 or idx > n - 1:
                return STATUS_DEAD, n - 1, n, idx, 0
            val = g[idx - 1] + d_f
            if val < -VALUE_GUARD or val > VALUE_GUARD:
                return STATUS_OVERFLOW, n - 1, n, val, 0
            f[n - 1] = val
        if n > ic_len_g:
            idx = n - f[n - 1] - c_g
            if idx < 1 or idx > n:
                return STATUS_DEAD, n - 1, n, idx, 1
            val = f[idx - 1] + d_g
            if val < -VALUE_GUARD or val > VALUE_GUARD:
                return STATUS_OVERFLOW, n - 1, n, val, 1
            g[n - 1] = val
    return STATUS_ALIVE, cap, 0, 0, -1


def warm_up() -> None:
    """Trigger compilation of every kernel on tiny inputs."""
    ps = np.array([0, 0], dtype=np.int64)
    qs = np.array([1, 4], dtype=np.int64)
    a = np.ones(8, dtype=np.int64)
    eval_nested_i64(a, 4, 8, ps, qs, 0)
    b = np.ones(8, dtype=np.uint32)
    eval_nested_u32(b, 4, 8, ps, qs, 0)
    f = np.zeros(8, dtype=np.int64)
    g = np.zeros(8, dtype=np.int64)
    f[0] = 0
    g[0] = 1
    eval_system_i64(f, g, 1, 1, 8, 0, 0, 0, 1)
