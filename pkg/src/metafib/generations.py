"""Generational boundaries and noise statistics for slow solutions.

For a solution a of a nested recurrence, each term a(m) combines earlier
terms sitting at the spots m - p_j - a(m - q_j). The minimum spot of m is
the leftmost of those. Generation k is delimited by:

    W(n)   = least m past the initial conditions with min-spot(m) >= n
    P_s(1) = 1, P_s(2) = 4, P_s(k) = W(P_s(k-1))        (spiritual start)
    P(1)   = 1, P(2)  = 4,  P(k)  = P_s(k) + 3          (actual start)
    R(1)   = 1, R(2)  = 4,  R(k)  = largest m < P(k+1) - 1
             with a(m+1) - a(m) not in {0, 1}           (actual end)

Noise statistics are computed on the half-integer signal s(n) = a(n) - n/2
over the inclusive windows [P(k), R(k)] using the exact integer carrier
t(n) = 2 a(n) - n, so means and second moments carry no rounding error.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .recurrence import SequenceBuffer, parent_spots


def min_parent_spot(buf: SequenceBuffer, m: int) -> int:
    """Leftmost back-reference index of term m (buffer must carry its spec)."""
    if buf.spec is None:
        raise ValueError("buffer does not record its recurrence")
    return min(parent_spots(buf.spec, buf, m))


def _min_spot_array(buf: SequenceBuffer) -> tuple[int, np.ndarray]:
    """(start, msp) with msp[i] = min-spot(start + i) for the whole buffer."""
    spec = buf.spec
    if spec is None:
        raise ValueError("buffer does not record its recurrence")
    start = max(buf.ic_len + 1, spec.max_inner_shift + 1)
    end = buf.end_index
    if start > end:
        raise ValueError("buffer too short for generation analysis")
    a = buf.values
    m = np.arange(start, end + 1, dtype=np.int64)
    msp = None
    for p, q in spec.terms:
        spot = m - p - a[m - q - 1]
        msp = spot if msp is None else np.minimum(msp, spot)
    return start, msp


def generation_boundary(buf: SequenceBuffer, n: int) -> int:
    """W(n): least m past the initial conditions whose min-spot reaches n."""
    start, msp = _min_spot_array(buf)
    running = np.maximum.accumulate(msp)
    i = int(np.searchsorted(running, n, side="left"))
    if i >= msp.shape[0]:
        raise ValueError(f"W({n}) lies beyond the buffer")
    return start + i


@dataclass(frozen=True)
class GenerationTable:
    """Boundary indices for generations 1..k_max (arrays are 0-based by k-1)."""

    k_max: int
    p_spiritual: np.ndarray
    p_start: np.ndarray
    r_end: np.ndarray

    def row(self, k: int) -> tuple[int, int, int]:
        if not (1 <= k <= self.k_max):
            raise IndexError(f"generation {k} not tabulated")
        return (int(self.p_spiritual[k - 1]), int(self.p_start[k - 1]),
                int(self.r_end[k - 1]))


def generation_table(buf: SequenceBuffer, k_max: int) -> GenerationTable:
    """Tabulate P_s, P, R for k = 1..k_max.

    R(k_max) needs P(k_max + 1), so the buffer must cover one extra
    generation start beyond the last row.
    """
    if k_max < 2:
        raise ValueError("need k_max >= 2")
    start, msp = _min_spot_array(buf)
    running = np.maximum.accumulate(msp)

    def w(n: int) -> int:
        i = int(np.searchsorted(running, n, side="left"))
        if i >= running.shape[0]:
            raise ValueError(f"buffer exhausted computing W({n}); grow the cap")
        return start + i

    ps = [1, 4]
    for _ in range(3, k_max + 2):
        ps.append(w(ps[-1]))
    p = [1, 4] + [v + 3 for v in ps[2:]]

    a = buf.values
    d = a[1:] - a[:-1]
    bad = np.nonzero((d != 0) & (d != 1))[0] + 1  # m with a(m+1)-a(m) bad
    r = [1, 4]
    for k in range(3, k_max + 1):
        limit = p[k] - 1  # need largest bad m strictly below P(k+1) - 1
        j = int(np.searchsorted(bad, limit, side="left")) - 1
        if j < 0:
            raise ValueError(f"no noisy step found below generation {k + 1}")
        r.append(int(bad[j]))

    table = GenerationTable(
        k_max=k_max,
        p_spiritual=np.array(ps[:k_max], dtype=np.int64),
        p_start=np.array(p[:k_max], dtype=np.int64),
        r_end=np.array(r, dtype=np.int64),
    )
    for k in range(3, k_max + 1):
        pk, rk = table.p_start[k - 1], table.r_end[k - 1]
        if not (pk <= rk < p[k]):
            raise ValueError(f"generation {k} boundaries not nested: "
                             f"P={pk} R={rk} nextP={p[k]}")
    return table


@dataclass(frozen=True)
class GenerationStats:
    k: int
    count: int
    mean: float
    spread: float  # M_k, the standard deviation of s over the window
    alpha: float | None  # log2(M_k / M_{k-1}), None when undefined


def alpha_table(buf: SequenceBuffer, table: GenerationTable,
                k_min: int = 1) -> list[GenerationStats]:
    """Per-generation noise statistics over windows [P(k), R(k)].

    Sums of t(n) = 2 a(n) - n are carried as exact Python integers, so the
    variance numerator count*sum(t^2) - sum(t)^2 is exact and provably
    nonnegative; spread = sqrt(numerator) / (2 * count).
    """
    rows: list[GenerationStats] = []
    prev_spread: float | None = None
    for k in range(k_min, table.k_max + 1):
        _, pk, rk = table.row(k)
        window = buf.slice(pk, rk).astype(np.int64)
        n = np.arange(pk, rk + 1, dtype=np.int64)
        t = 2 * window - n
        count = int(t.shape[0])
        peak = int(np.max(np.abs(t))) if count else 0
        if count * peak * peak < (1 << 62):
            s1 = int(np.sum(t))
            s2 = int(np.dot(t, t))
        else:  # fall back to arbitrary precision
            obj = t.astype(object)
            s1 = int(np.sum(obj))
            s2 = int(np.sum(obj * obj))
        num = count * s2 - s1 * s1
        if num < 0:
            raise AssertionError("variance numerator must be nonnegative")
        spread = math.sqrt(num) / (2 * count)
        mean = s1 / (2 * count)
        alpha = None
        if prev_spread is not None and prev_spread > 0 and spread > 0:
            alpha = math.log2(spread / prev_spread)
        rows.append(GenerationStats(k, count, mean, spread, alpha))
        prev_spread = spread
    return rows


def plot_data(buf: SequenceBuffer, table: GenerationTable,
              lo: int, hi: int) -> Iterator[tuple[int, str, str]]:
    """Rows (n, s(n), region) for n in [lo, hi].

    s(n) = a(n) - n/2 is always a half-integer and is rendered exactly with
    one decimal. region is "noisy" inside some [P(k), R(k)] window and
    "slow" outside all of them.
    """
    if lo < buf.origin_index or hi > buf.end_index or lo > hi:
        raise IndexError("window outside buffer")
    ns = np.arange(lo, hi + 1, dtype=np.int64)
    t = 2 * buf.slice(lo, hi).astype(np.int64) - ns
    i = np.searchsorted(table.p_start, ns, side="right") - 1
    noisy = (i >= 0) & (ns <= table.r_end[np.clip(i, 0, None)])
    for j in range(ns.shape[0]):
        tj = int(t[j])
        yield int(ns[j]), f"{tj / 2:.1f}", ("noisy" if noisy[j] else "slow")
