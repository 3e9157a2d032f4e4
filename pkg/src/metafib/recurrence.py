"""Nested-recurrence specifications, exact evaluation, and death detection.

A nested (meta-Fibonacci) recurrence is

    a(n) = c + sum_j a(n - p_j - a(n - q_j))

over 1-indexed integer sequences. Evaluation starts from an explicit initial
condition prefix. Whenever any referenced argument (inner n - q_j or outer
n - p_j - a(n - q_j)) falls outside [1, n-1], the sequence is dead at n: the
term a(n) and everything after it is undefined.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import kernels


@dataclass(frozen=True)
class RecurrenceSpec:
    """Shape of a nested recurrence: term list [(p, q), ...] plus constant."""

    terms: tuple[tuple[int, int], ...]
    constant: int = 0

    def __post_init__(self):
        terms = tuple((int(p), int(q)) for p, q in self.terms)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "constant", int(self.constant))
        if not terms:
            raise ValueError("recurrence needs at least one term")
        if len(terms) > kernels.MAX_TERMS:
            raise ValueError(f"at most {kernels.MAX_TERMS} terms supported")
        for p, q in terms:
            if q < 1:
                raise ValueError(f"inner shift q={q} must be >= 1")
            if p < 0:
                raise ValueError(f"outer shift p={p} must be >= 0")
        if abs(self.constant) >= kernels.VALUE_GUARD:
            raise ValueError("constant out of checked range")

    @property
    def max_inner_shift(self) -> int:
        return max(q for _, q in self.terms)

    def term_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        ps = np.array([p for p, _ in self.terms], dtype=np.int64)
        qs = np.array([q for _, q in self.terms], dtype=np.int64)
        return ps, qs


@dataclass(frozen=True)
class EvalOutcome:
    """Result of an evaluation attempt.

    computed_len counts defined terms (initial conditions included). For a
    dead outcome, death_index is the first undefined index, and
    offending_argument / offending_term (0-based summand) identify the first
    out-of-range reference. cause is "range" for ordinary death and
    "non_integer" when a rational was dereferenced in an index position
    (system evaluation only).
    """

    status: str  # "alive" | "dead"
    computed_len: int
    death_index: int | None = None
    offending_argument: int | None = None
    offending_term: int | None = None
    cause: str | None = None

    @property
    def alive(self) -> bool:
        return self.status == "alive"


class SequenceBuffer:
    """Frozen 1-indexed store of exact integer terms.

    term(n) is defined for origin_index <= n < origin_index + len(buffer).
    Contents are immutable once constructed.
    """

    def __init__(self, values: np.ndarray, ic_len: int, origin_index: int = 1,
                 spec: RecurrenceSpec | None = None):
        values = np.asarray(values)
        values.flags.writeable = False
        self._values = values
        self.ic_len = int(ic_len)
        self.origin_index = int(origin_index)
        self.spec = spec

    def __len__(self) -> int:
        return self._values.shape[0]

    @property
    def end_index(self) -> int:
        """Largest defined index."""
        return self.origin_index + len(self) - 1

    @property
    def values(self) -> np.ndarray:
        """Read-only 0-based view; values[i] is term(origin_index + i)."""
        return self._values

    def term(self, n: int) -> int:
        i = n - self.origin_index
        if i < 0 or i >= len(self):
            raise IndexError(f"term {n} not defined (have [{self.origin_index}, {self.end_index}])")
        return int(self._values[i])

    __getitem__ = term

    def slice(self, lo: int, hi: int) -> np.ndarray:
        """Read-only view of terms lo..hi inclusive (1-indexed)."""
        if lo < self.origin_index or hi > self.end_index or lo > hi:
            raise IndexError(f"range [{lo}, {hi}] not within [{self.origin_index}, {self.end_index}]")
        return self._values[lo - self.origin_index: hi - self.origin_index + 1]


_STATUS_NAMES = {kernels.STATUS_ALIVE: "alive", kernels.STATUS_DEAD: "dead"}


def _validated_ic(ic: Sequence[int]) -> list[int]:
    ic = [int(v) for v in ic]
    if not ic:
        raise ValueError("initial condition must be non-empty")
    for v in ic:
        if abs(v) >= kernels.VALUE_GUARD:
            raise ValueError("initial condition value out of checked range")
    return ic


def eval_into(spec: RecurrenceSpec, arr: np.ndarray, defined: int,
              cap: int | None = None):
    """Low-level resumable evaluation into a preseeded array.

    arr[:defined] must already hold valid terms (1-indexed term i lives at
    arr[i-1]). Extends through index cap (default: the full array) and
    returns the raw kernel tuple (status, computed_len, death_index,
    offending_argument, offending_term). The array may be any int64 or
    uint32 buffer, including a memory map.
    """
    ps, qs = spec.term_arrays()
    cap = arr.shape[0] if cap is None else int(cap)
    if not (0 < defined <= cap <= arr.shape[0]):
        raise ValueError("need 0 < defined <= cap <= len(arr)")
    if arr.dtype == np.int64:
        kernel = kernels.eval_nested_i64
    elif arr.dtype == np.uint32:
        kernel = kernels.eval_nested_u32
    else:
        raise ValueError(f"unsupported dtype {arr.dtype}; use int64 or uint32")
    return kernel(arr, defined, cap, ps, qs, spec.constant)


def eval_single(spec: RecurrenceSpec, ic: Sequence[int], cap: int,
                compact: bool = False) -> tuple[SequenceBuffer, EvalOutcome]:
    """Evaluate spec from ic through index cap (or until death).

    Returns the frozen buffer of defined terms plus the outcome. With
    compact=True, terms are stored as uint32 (initial conditions must be
    nonnegative and < 2**32); arithmetic is still exact and checked.
    """
    ic = _validated_ic(ic)
    cap = int(cap)
    if cap < len(ic):
        raise ValueError(f"cap {cap} is smaller than the initial condition ({len(ic)} terms)")
    if compact:
        if any(v < 0 or v >= kernels.U32_LIMIT for v in ic):
            raise ValueError("compact mode requires initial values in [0, 2**32)")
        arr = np.zeros(cap, dtype=np.uint32)
    else:
        arr = np.zeros(cap, dtype=np.int64)
    arr[: len(ic)] = ic
    status, computed_len, death_index, arg, term = eval_into(spec, arr, len(ic), cap)
    if status == kernels.STATUS_OVERFLOW:
        raise OverflowError(
            f"term at index {death_index} leaves the checked value range ({arg})")
    outcome = _outcome_from(status, computed_len, death_index, arg, term)
    buf = SequenceBuffer(arr[:computed_len], ic_len=len(ic), spec=spec)
    return buf, outcome


def _outcome_from(status, computed_len, death_index, arg, term) -> EvalOutcome:
    if status == kernels.STATUS_ALIVE:
        return EvalOutcome(status="alive", computed_len=int(computed_len))
    return EvalOutcome(
        status="dead",
        computed_len=int(computed_len),
        death_index=int(death_index),
        offending_argument=int(arg),
        offending_term=int(term),
        cause="range",
    )


def lifespan(spec: RecurrenceSpec, ic: Sequence[int], cap: int,
             compact: bool = False) -> EvalOutcome:
    """Like eval_single but discards the buffer."""
    _, outcome = eval_single(spec, ic, cap, compact=compact)
    return outcome


def naive_eval(spec: RecurrenceSpec, ic: Sequence[int], cap: int) -> tuple[list[int], EvalOutcome]:
    """Straightforward pure-Python evaluator, kept independent of the
    compiled kernels as a cross-checking reference."""
    ic = _validated_ic(ic)
    if cap < len(ic):
        raise ValueError("cap smaller than initial condition")
    a = list(ic)  # a[i] is term i+1
    for n in range(len(ic) + 1, cap + 1):
        total = spec.constant
        for j, (p, q) in enumerate(spec.terms):
            inner = n - q
            if not (1 <= inner <= n - 1):
                return a, EvalOutcome("dead", n - 1, n, inner, j, "range")
            arg = n - p - a[inner - 1]
            if not (1 <= arg <= n - 1):
                return a, EvalOutcome("dead", n - 1, n, arg, j, "range")
            total += a[arg - 1]
        a.append(total)
    return a, EvalOutcome("alive", cap)


def parent_spots(spec: RecurrenceSpec, buf: SequenceBuffer, n: int) -> list[int]:
    """Back-reference indices n - p_j - a(n - q_j), in spec term order.

    For two-term recurrences the first entry is the mother spot and the
    second the father spot.
    """
    if n > buf.end_index:
        raise IndexError(f"term {n} not in buffer")
    spots = []
    for p, q in spec.terms:
        spots.append(n - p - buf.term(n - q))
    return spots


def check_slow(buf: SequenceBuffer, lo: int, hi: int) -> bool:
    """True iff successive differences over terms lo..hi are all 0 or 1."""
    window = buf.slice(lo, hi)
    if window.shape[0] <= 1:
        return True
    d = np.diff(window)
    return bool(np.all((d == 0) | (d == 1)))


def check_surjective(buf: SequenceBuffer, n: int) -> bool:
    """True iff every integer in [1, term(n)] occurs among terms 1..n."""
    target = buf.term(n)
    if target < 1:
        return False
    vals = buf.slice(1, n)
    hit = np.zeros(target + 1, dtype=bool)
    inside = vals[(vals >= 1) & (vals <= target)]
    hit[inside] = True
    return bool(np.all(hit[1:]))


def pointwise_violations(values: Sequence[int] | np.ndarray, spec: RecurrenceSpec,
                         lo: int, hi: int) -> list[int]:
    """Indices n in [lo, hi] where values (read 1-indexed) fail the recurrence.

    A reference outside the stored range [1, len(values)] counts as a
    violation at n. Useful for checking whether a transformed copy of a
    solution still satisfies the recurrence on a window.
    """
    a = np.asarray(values, dtype=np.int64)
    size = a.shape[0]
    if not (1 <= lo <= hi <= size):
        raise IndexError("window outside stored values")
    bad = []
    for n in range(lo, hi + 1):
        total = spec.constant
        ok = True
        for p, q in spec.terms:
            inner = n - q
            if not (1 <= inner <= size):
                ok = False
                break
            arg = n - p - int(a[inner - 1])
            if not (1 <= arg <= size):
                ok = False
                break
            total += int(a[arg - 1])
        if not ok or total != int(a[n - 1]):
            bad.append(n)
    return bad
