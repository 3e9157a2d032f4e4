"""Run-length oracles for the slow solutions of small Golomb-like systems.

Each oracle describes a pair of nondecreasing sequences by how many times
every nonnegative integer appears. Slowness pins the order, so the
multiplicity profile determines the sequences completely; that makes these
independent references for the system evaluator.

Registered oracles (by system (c_f, d_f, c_g, d_g) and canonical start):

    fg1   (0, 0, 0, 1), f from <0>, g from <1>
    fg2   (0, 0, 0, 2), f from <0, 1, 1>, g from <1, 1, 2>
    fg12  (0, 1, 0, 2), f from <0, 1, 1>, g from <1, 1, 2>
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .systems import GolombSystemSpec, eval_system


@dataclass(frozen=True)
class SlowSolutionOracle:
    name: str
    system: GolombSystemSpec
    ic_f: tuple[int, ...]
    ic_g: tuple[int, ...]
    f_multiplicity: Callable[[int], int]
    g_multiplicity: Callable[[int], int]


def _fg1_f_mult(i: int) -> int:
    return 2 * i + 1 if i >= 0 else 0


def _fg1_g_mult(i: int) -> int:
    return 2 * i if i >= 1 else 0


def _fg2_f_mult(i: int) -> int:
    if i < 0:
        return 0
    if i == 0:
        return 1
    if i == 1:
        return 4
    return 1 if i % 2 == 0 else 2 * i + 1


def _fg2_g_mult(i: int) -> int:
    if i <= 0:
        return 0
    if i == 1:
        return 2
    return 1 if i % 2 == 0 else 2 * i - 1


def _fg12_f_mult(i: int) -> int:
    if i < 0:
        return 0
    if i == 0:
        return 1
    if i == 1:
        return 2
    r = i % 3
    if r == 0:
        return 1
    if r == 1:
        return 2 * i - 1
    return 2


def _fg12_g_mult(i: int) -> int:
    if i <= 0:
        return 0
    if i == 1:
        return 2
    r = i % 3
    if r == 0:
        return 2 * i - 2
    if r == 1:
        return 2
    return 1


ORACLES: dict[str, SlowSolutionOracle] = {
    "fg1": SlowSolutionOracle(
        "fg1", GolombSystemSpec(0, 0, 0, 1), (0,), (1,), _fg1_f_mult, _fg1_g_mult),
    "fg2": SlowSolutionOracle(
        "fg2", GolombSystemSpec(0, 0, 0, 2), (0, 1, 1), (1, 1, 2), _fg2_f_mult, _fg2_g_mult),
    "fg12": SlowSolutionOracle(
        "fg12", GolombSystemSpec(0, 1, 0, 2), (0, 1, 1), (1, 1, 2), _fg12_f_mult, _fg12_g_mult),
}


def oracle_prefix(oracle: SlowSolutionOracle, which: str, count: int) -> np.ndarray:
    """First `count` terms of the oracle's f or g sequence, by run lengths."""
    if which not in ("f", "g"):
        raise ValueError("which must be 'f' or 'g'")
    mult = oracle.f_multiplicity if which == "f" else oracle.g_multiplicity
    values: list[int] = []
    reps: list[int] = []
    total = 0
    i = 0
    while total < count:
        m = mult(i)
        if m > 0:
            values.append(i)
            reps.append(m)
            total += m
        i += 1
        if i > 10 * count + 10:
            raise RuntimeError("oracle multiplicities failed to cover the prefix")
    out = np.repeat(np.array(values, dtype=np.int64), np.array(reps, dtype=np.int64))
    return out[:count]


def oracle_term(oracle: SlowSolutionOracle, which: str, n: int) -> int:
    if n < 1:
        raise IndexError("terms are 1-indexed")
    return int(oracle_prefix(oracle, which, n)[n - 1])


def fg1_f_closed(n: int) -> int:
    """ceil(sqrt(n)) - 1, exactly."""
    if n < 1:
        raise IndexError("terms are 1-indexed")
    s = math.isqrt(n)
    return s - 1 if s * s == n else s


def fg1_g_closed(n: int) -> int:
    """floor(sqrt(n) + 1/2), exactly."""
    if n < 1:
        raise IndexError("terms are 1-indexed")
    s = math.isqrt(n)
    return s + 1 if n - s * s > s else s


def fg1_f_closed_vec(n: np.ndarray) -> np.ndarray:
    n = np.asarray(n, dtype=np.int64)
    s = np.sqrt(n.astype(np.float64)).astype(np.int64)
    # repair float rounding so s = isqrt(n) exactly
    s = np.where(s * s > n, s - 1, s)
    s = np.where((s + 1) * (s + 1) <= n, s + 1, s)
    return np.where(s * s == n, s - 1, s)


def fg1_g_closed_vec(n: np.ndarray) -> np.ndarray:
    n = np.asarray(n, dtype=np.int64)
    s = np.sqrt(n.astype(np.float64)).astype(np.int64)
    s = np.where(s * s > n, s - 1, s)
    s = np.where((s + 1) * (s + 1) <= n, s + 1, s)
    return np.where(n - s * s > s, s + 1, s)


def verify_oracle(oracle: SlowSolutionOracle, limit: int):
    """Evaluate the oracle's system and compare both sequences to the
    run-length construction through `limit` terms.

    Returns (ok, detail); detail is None on success, else a dict naming the
    first mismatch or the death diagnostics.
    """
    buf, outcome = eval_system(oracle.system, oracle.ic_f, oracle.ic_g, limit)
    if not outcome.alive:
        return False, {"reason": "dead", "death_index": outcome.death_index,
                       "which": "fg"[outcome.offending_term]}
    for which, got in (("f", buf.f_array()), ("g", buf.g_array())):
        want = oracle_prefix(oracle, which, limit)
        bad = np.nonzero(got != want)[0]
        if bad.size:
            i = int(bad[0])
            return False, {"reason": "mismatch", "which": which, "n": i + 1,
                           "got": int(got[i]), "want": int(want[i])}
    return True, None


def growth_ratio(spec: GolombSystemSpec, ic_f, ic_g, n: int) -> float:
    """f(n) / sqrt((d_f + d_g) * n) for the system run from the given start."""
    buf, outcome = eval_system(spec, ic_f, ic_g, n)
    if not outcome.alive:
        raise ValueError(f"system died at {outcome.death_index}; no growth ratio")
    return float(buf.f(n)) / math.sqrt((spec.d_f + spec.d_g) * n)
