"""Golomb-like two-sequence systems and their exact evaluation.

The system is

    f(n) = g(n - g(n-1) - c_f) + d_f
    g(n) = f(n - f(n) - c_g) + d_g

over 1-indexed sequences. For each n past the initial conditions the f-step
runs first (its index must land in [1, n-1]) and then the g-step (index in
[1, n], so the freshly computed f(n) is usable). Initial conditions may be
exact rationals; if a rational painted into an index position is not an
integer, the system is dead at that step with cause "non_integer".
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence, Union

import numpy as np

from . import kernels
from .recurrence import EvalOutcome

Term = Union[int, Fraction]


@dataclass(frozen=True)
class GolombSystemSpec:
    """Parameters (c_f, d_f, c_g, d_g); growth demands d_f + d_g > 0."""

    c_f: int
    d_f: int
    c_g: int
    d_g: int

    def __post_init__(self):
        for name in ("c_f", "d_f", "c_g", "d_g"):
            object.__setattr__(self, name, int(getattr(self, name)))
        if self.d_f + self.d_g <= 0:
            raise ValueError("need d_f + d_g > 0 for unbounded growth")

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.c_f, self.d_f, self.c_g, self.d_g)


class SystemBuffer:
    """Frozen store of the defined f and g prefixes.

    exact=True means terms are Fractions (rational initial conditions);
    otherwise both sequences live in read-only int64 arrays.
    """

    def __init__(self, f_values, g_values, ic_len_f: int, ic_len_g: int,
                 exact: bool, spec: GolombSystemSpec | None = None):
        self.exact = bool(exact)
        if self.exact:
            self._f = tuple(f_values)
            self._g = tuple(g_values)
        else:
            fv = np.asarray(f_values, dtype=np.int64)
            gv = np.asarray(g_values, dtype=np.int64)
            fv.flags.writeable = False
            gv.flags.writeable = False
            self._f = fv
            self._g = gv
        self.ic_len_f = int(ic_len_f)
        self.ic_len_g = int(ic_len_g)
        self.spec = spec

    @property
    def len_f(self) -> int:
        return len(self._f)

    @property
    def len_g(self) -> int:
        return len(self._g)

    def f(self, n: int) -> Term:
        if n < 1 or n > self.len_f:
            raise IndexError(f"f({n}) not defined")
        v = self._f[n - 1]
        return v if self.exact else int(v)

    def g(self, n: int) -> Term:
        if n < 1 or n > self.len_g:
            raise IndexError(f"g({n}) not defined")
        v = self._g[n - 1]
        return v if self.exact else int(v)

    def f_array(self) -> np.ndarray:
        if self.exact:
            return np.array([Fraction(v) for v in self._f], dtype=object)
        return self._f

    def g_array(self) -> np.ndarray:
        if self.exact:
            return np.array([Fraction(v) for v in self._g], dtype=object)
        return self._g


def _coerce_terms(ic: Sequence) -> list[Fraction]:
    out = []
    for v in ic:
        if isinstance(v, Rational):
            out.append(Fraction(v))
        else:
            raise TypeError(f"system terms must be exact rationals, got {type(v).__name__}")
    return out


def eval_system(spec: GolombSystemSpec, ic_f: Sequence, ic_g: Sequence,
                cap: int) -> tuple[SystemBuffer, EvalOutcome]:
    """Evaluate the system through index cap or until death.

    Both initial conditions must be non-empty. The outcome's offending_term
    is 0 when the f-step failed and 1 for the g-step; computed_len counts
    full (f, g) rows defined, i.e. min(len_f, len_g) at the stop point.
    """
    ic_f = _coerce_terms(ic_f)
    ic_g = _coerce_terms(ic_g)
    if not ic_f or not ic_g:
        raise ValueError("both initial conditions must be non-empty")
    cap = int(cap)
    if cap < max(len(ic_f), len(ic_g)):
        raise ValueError("cap smaller than initial conditions")
    if all(v.denominator == 1 for v in ic_f + ic_g):
        return _eval_system_int(spec, [int(v) for v in ic_f], [int(v) for v in ic_g], cap)
    return _eval_system_exact(spec, ic_f, ic_g, cap)


def _eval_system_int(spec, ic_f, ic_g, cap):
    for v in ic_f + ic_g:
        if abs(v) >= kernels.VALUE_GUARD:
            raise ValueError("initial value out of checked range")
    f = np.zeros(cap, dtype=np.int64)
    g = np.zeros(cap, dtype=np.int64)
    f[: len(ic_f)] = ic_f
    g[: len(ic_g)] = ic_g
    status, computed_len, death_index, off_idx, which = kernels.eval_system_i64(
        f, g, len(ic_f), len(ic_g), cap, spec.c_f, spec.d_f, spec.c_g, spec.d_g)
    if status == kernels.STATUS_OVERFLOW:
        raise OverflowError(f"system value leaves checked range near index {death_index}")
    if status == kernels.STATUS_ALIVE:
        outcome = EvalOutcome("alive", int(computed_len))
        n_f = n_g = int(computed_len)
    else:
        outcome = EvalOutcome("dead", int(computed_len), int(death_index),
                              int(off_idx), int(which), "range")
        # f(death_index) exists when the g-step was the one that failed
        n_f = int(death_index) if which == 1 else int(computed_len)
        n_g = int(computed_len)
    buf = SystemBuffer(f[:n_f], g[:n_g], len(ic_f), len(ic_g), exact=False, spec=spec)
    return buf, outcome


def _eval_system_exact(spec, ic_f, ic_g, cap):
    f: list[Fraction] = list(ic_f)
    g: list[Fraction] = list(ic_g)
    # with ragged initial conditions the steps below no-op until each
    # sequence reaches its own frontier
    for n in range(min(len(f), len(g)) + 1, cap + 1):
        fail = _exact_f_step(spec, f, g, n)
        if fail is not None:
            return _exact_result(spec, f, g, ic_f, ic_g, fail)
        fail = _exact_g_step(spec, f, g, n)
        if fail is not None:
            return _exact_result(spec, f, g, ic_f, ic_g, fail)
    return _exact_result(spec, f, g, ic_f, ic_g, None)


def _exact_f_step(spec, f, g, n):
    """Append f(n); return (death_index, offending, which, cause) on failure."""
    if len(f) >= n:
        return None
    gv = g[n - 2]
    if gv.denominator != 1:
        return (n, None, 0, "non_integer")
    idx = n - int(gv) - spec.c_f
    if not (1 <= idx <= n - 1) or idx > len(g):
        return (n, idx, 0, "range")
    val = g[idx - 1] + spec.d_f
    f.append(val)
    return None


def _exact_g_step(spec, f, g, n):
    if len(g) >= n:
        return None
    fv = f[n - 1]
    if fv.denominator != 1:
        return (n, None, 1, "non_integer")
    idx = n - int(fv) - spec.c_g
    if not (1 <= idx <= n) or idx > len(f):
        return (n, idx, 1, "range")
    val = f[idx - 1] + spec.d_g
    g.append(val)
    return None


def _exact_result(spec, f, g, ic_f, ic_g, fail):
    rows = min(len(f), len(g))
    if fail is None:
        outcome = EvalOutcome("alive", rows)
    else:
        death_index, off, which, cause = fail
        off_val = None if off is None else int(off)
        outcome = EvalOutcome("dead", rows, death_index, off_val, which, cause)
    buf = SystemBuffer(f, g, len(ic_f), len(ic_g), exact=True, spec=spec)
    return buf, outcome
