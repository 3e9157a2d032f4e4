"""Quasi-periodic period-5 solution families and interleaving detection.

A family is parameterized by (K, b0, b1, b2, b4, a_f, a_g, m). Starting at
index K the solution interleaves five residue-class subsequences: two slow
square-root-like sequences f and g from a Golomb-like system, two linear
classes, and one constant class. The two recurrences supported place the
classes differently:

    four-term gap pattern ("V", a(n) = a(n-a(n-1)) + a(n-a(n-4))):
        n = K+5k   -> 5 f(k + n0 + 1) + b0
        n = K+5k+1 -> 5 g(k + n0 + 1) + b1
        n = K+5k+2 -> 5 k + b2
        n = K+5k+3 -> 5 m
        n = K+5k+4 -> 5 k + b4,   n0 = floor((K-1)/5)

    two/three-term gap pattern ("H", a(n) = a(n-a(n-2)) + a(n-a(n-3))):
        n = K+5k   -> 5 k + b0
        n = K+5k+1 -> 5 k + b1
        n = K+5k+2 -> 5 f(k + n0 + 1) + b2
        n = K+5k+3 -> 5 m
        n = K+5k+4 -> 5 g(k + n0 + 1) + b4,   n0 = floor((K+1)/5)

The f/g arguments continue the initial conditions extracted from the
solution prefix (f(1..n0), g(1..n0)), so the subscript at n = K + 5k is
k + n0 + 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .recurrence import RecurrenceSpec, SequenceBuffer, eval_single
from .systems import GolombSystemSpec, SystemBuffer, eval_system
from . import golomb

V_RECURRENCE = RecurrenceSpec(terms=((0, 1), (0, 4)))
H_RECURRENCE = RecurrenceSpec(terms=((0, 2), (0, 3)))


@dataclass(frozen=True)
class FamilyParamsV:
    k_anchor: int
    b0: int
    b1: int
    b2: int
    b4: int
    a_f: int
    a_g: int
    m: int

    @property
    def n0(self) -> int:
        return (self.k_anchor - 1) // 5


@dataclass(frozen=True)
class FamilyParamsH:
    k_anchor: int
    b0: int
    b1: int
    b2: int
    b4: int
    a_f: int
    a_g: int
    m: int

    @property
    def n0(self) -> int:
        return (self.k_anchor + 1) // 5


def validate_params_v(p: FamilyParamsV) -> list[str]:
    """Empty list iff the parameter tuple satisfies every family constraint."""
    bad = []
    if p.b0 % 5 != 1:
        bad.append(f"b0={p.b0} must be 1 mod 5")
    if p.b1 % 5 != 4:
        bad.append(f"b1={p.b1} must be 4 mod 5")
    if p.b2 % 5 != 2:
        bad.append(f"b2={p.b2} must be 2 mod 5")
    if not (7 <= p.b2 < p.k_anchor + 3):
        bad.append(f"b2={p.b2} must satisfy 7 <= b2 < K+3={p.k_anchor + 3}")
    if p.b4 % 5 != 3:
        bad.append(f"b4={p.b4} must be 3 mod 5")
    if not (8 <= p.b4 < p.k_anchor + 5):
        bad.append(f"b4={p.b4} must satisfy 8 <= b4 < K+5={p.k_anchor + 5}")
    if p.a_f % 5 != 2:
        bad.append(f"a_f={p.a_f} must be 2 mod 5")
    if p.a_g % 5 != 3:
        bad.append(f"a_g={p.a_g} must be 3 mod 5")
    if p.a_f + p.a_g <= 0:
        bad.append("need a_f + a_g > 0")
    if p.m < 1:
        bad.append(f"m={p.m} must be >= 1")
    if not bad:
        bad.extend(_check_derived(derived_system_v, p))
    return bad


def validate_params_h(p: FamilyParamsH) -> list[str]:
    bad = []
    if p.b0 % 5 != 1:
        bad.append(f"b0={p.b0} must be 1 mod 5")
    if not (6 <= p.b0 < p.k_anchor + 2):
        bad.append(f"b0={p.b0} must satisfy 6 <= b0 < K+2={p.k_anchor + 2}")
    if p.b1 % 5 != 4:
        bad.append(f"b1={p.b1} must be 4 mod 5")
    if not (9 <= p.b1 < p.k_anchor + 3):
        bad.append(f"b1={p.b1} must satisfy 9 <= b1 < K+3={p.k_anchor + 3}")
    if p.b2 % 5 != 2:
        bad.append(f"b2={p.b2} must be 2 mod 5")
    if p.b4 % 5 != 3:
        bad.append(f"b4={p.b4} must be 3 mod 5")
    if p.a_f % 5 != 4:
        bad.append(f"a_f={p.a_f} must be 4 mod 5")
    if p.a_g % 5 != 1:
        bad.append(f"a_g={p.a_g} must be 1 mod 5")
    if p.a_f + p.a_g <= 0:
        bad.append("need a_f + a_g > 0")
    if p.m < 1:
        bad.append(f"m={p.m} must be >= 1")
    if not bad:
        bad.extend(_check_derived(derived_system_h, p))
    return bad


def _check_derived(derive, p) -> list[str]:
    try:
        derive(p)
    except (ValueError, ZeroDivisionError) as e:
        return [f"derived system invalid: {e}"]
    return []


def _exact_div5(value: int, label: str) -> int:
    if value % 5 != 0:
        raise ValueError(f"{label} = {value} is not divisible by 5")
    return value // 5


def derived_system_v(p: FamilyParamsV) -> GolombSystemSpec:
    return GolombSystemSpec(
        c_f=_exact_div5(p.b1 + 1, "b1+1"),
        d_f=_exact_div5(p.b1 - p.b0 + p.a_f, "b1-b0+a_f"),
        c_g=_exact_div5(p.b0 - 1, "b0-1"),
        d_g=_exact_div5(p.b0 - p.b1 + p.a_g, "b0-b1+a_g"),
    )


def derived_system_h(p: FamilyParamsH) -> GolombSystemSpec:
    return GolombSystemSpec(
        c_f=_exact_div5(p.b4 + 2, "b4+2"),
        d_f=_exact_div5(p.b4 - p.b2 + p.a_f, "b4-b2+a_f"),
        c_g=_exact_div5(p.b2 - 2, "b2-2"),
        d_g=_exact_div5(p.b2 - p.b4 + p.a_g, "b2-b4+a_g"),
    )


def _prefix_term(prefix: np.ndarray, i: int) -> int | None:
    if 1 <= i <= prefix.shape[0]:
        return int(prefix[i - 1])
    return None


def extract_fg_ics_v(p: FamilyParamsV, prefix) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Initial conditions f(1..n0), g(1..n0) read off the solution prefix.

    f(j) = (a(K - 5(n0+1-j)) - b0) / 5 and g(j) uses the next index and b1.
    Entries may be non-integers; any referenced index < 1 is an error.
    """
    prefix = np.asarray(prefix, dtype=np.int64)
    ic_f, ic_g = [], []
    for j in range(1, p.n0 + 1):
        base = p.k_anchor - 5 * (p.n0 + 1 - j)
        vf = _prefix_term(prefix, base)
        vg = _prefix_term(prefix, base + 1)
        if vf is None or vg is None:
            raise ValueError(f"extraction index {base} outside solution prefix")
        ic_f.append(Fraction(vf - p.b0, 5))
        ic_g.append(Fraction(vg - p.b1, 5))
    return tuple(ic_f), tuple(ic_g)


def extract_fg_ics_h(p: FamilyParamsH, prefix) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """As for the four-term pattern, but reading classes +2 (f, offset b2)
    and +4 (g, offset b4)."""
    prefix = np.asarray(prefix, dtype=np.int64)
    ic_f, ic_g = [], []
    for j in range(1, p.n0 + 1):
        base = p.k_anchor - 5 * (p.n0 + 1 - j)
        vf = _prefix_term(prefix, base + 2)
        vg = _prefix_term(prefix, base + 4)
        if vf is None or vg is None:
            raise ValueError(f"extraction index {base + 2} outside solution prefix")
        ic_f.append(Fraction(vf - p.b2, 5))
        ic_g.append(Fraction(vg - p.b4, 5))
    return tuple(ic_f), tuple(ic_g)


def _sublinear_violations(buf: SystemBuffer, n0: int, horizon: int,
                          bounds: list[tuple[str, int, int]]) -> list[str]:
    """bounds entries are (label, sequence_offset, slack) meaning
    seq(n + sequence_offset) <= n + slack for all n0 < n <= horizon."""
    bad = []
    for label, off, slack in bounds:
        which = label[0]
        arr = buf.f_array() if which == "f" else buf.g_array()
        hi = min(horizon, arr.shape[0] - off)
        ns = np.arange(n0 + 1, hi + 1, dtype=np.int64)
        if ns.size == 0:
            continue
        vals = arr[ns + off - 1]
        if buf.exact:
            mask = np.array([v > n + slack for v, n in zip(vals, ns)], dtype=bool)
        else:
            mask = vals > ns + slack
        where = np.nonzero(mask)[0]
        if where.size:
            n = int(ns[where[0]])
            bad.append(f"sublinearity fails: {label} at n={n} exceeds n+{slack}")
    return bad


def check_ic_restrictions_v(p: FamilyParamsV, prefix, horizon: int = 100_000) -> list[str]:
    """All initial-condition restrictions for the four-term pattern.

    prefix holds the solution's first K-1 terms (1-indexed array-like).
    The spot checks are exact; the extracted f/g system is then run out to
    `horizon` and must stay alive, integer-valued where dereferenced, and
    within its sublinearity envelope.
    """
    prefix = np.asarray(prefix, dtype=np.int64)
    K = p.k_anchor
    if prefix.shape[0] < K - 1:
        raise ValueError(f"need the first {K - 1} terms, got {prefix.shape[0]}")
    bad = []

    def expect(idx: int, want: int, label: str):
        got = _prefix_term(prefix, idx)
        if got is None:
            bad.append(f"{label}: index {idx} outside [1, {prefix.shape[0]}]")
        elif got != want:
            bad.append(f"{label}: a({idx}) = {got}, expected {want}")

    expect(K + 5 - p.b4, p.a_f, "anchor a_f")
    expect(K + 6 - p.b2, p.a_g, "anchor a_g")
    s1 = _prefix_term(prefix, K + 3 - p.b2)
    s2 = _prefix_term(prefix, K + 8 - p.b4)
    if s1 is None or s2 is None:
        bad.append("constant-class anchor indices outside prefix")
    elif s1 + s2 != 5 * p.m:
        bad.append(f"a({K + 3 - p.b2}) + a({K + 8 - p.b4}) = {s1 + s2}, expected 5m = {5 * p.m}")
    for i in range(1, p.m + 1):
        expect(K + 2 - 5 * i, p.b2 - 5 * i, f"b2 ramp i={i}")
        expect(K + 4 - 5 * i, p.b4 - 5 * i, f"b4 ramp i={i}")
    expect(K - 2, 5 * p.m, "constant class at K-2")

    try:
        ic_f, ic_g = extract_fg_ics_v(p, prefix)
    except ValueError as e:
        bad.append(str(e))
        return bad
    sys_spec = derived_system_v(p)
    sysbuf, outcome = eval_system(sys_spec, ic_f, ic_g, max(horizon, p.n0 + 2))
    if not outcome.alive:
        bad.append(f"extracted system dies at {outcome.death_index} ({outcome.cause})")
        return bad
    bad.extend(_sublinear_violations(
        sysbuf, p.n0, horizon,
        [("f(n)", 0, (p.b0 - 1) // 5),
         ("g(n-1)", -1, (p.b1 + 1) // 5),
         ("g(n)", 0, (p.b1 + 1) // 5)]))
    return bad


def check_ic_restrictions_h(p: FamilyParamsH, prefix, horizon: int = 100_000) -> list[str]:
    """All initial-condition restrictions for the two/three-term pattern."""
    prefix = np.asarray(prefix, dtype=np.int64)
    K = p.k_anchor
    if prefix.shape[0] < K - 1:
        raise ValueError(f"need the first {K - 1} terms, got {prefix.shape[0]}")
    bad = []

    def expect(idx: int, want: int, label: str):
        got = _prefix_term(prefix, idx)
        if got is None:
            bad.append(f"{label}: index {idx} outside [1, {prefix.shape[0]}]")
        elif got != want:
            bad.append(f"{label}: a({idx}) = {got}, expected {want}")

    expect(K + 2 - p.b0, p.a_f, "anchor a_f")
    expect(K + 4 - p.b1, p.a_g, "anchor a_g")
    s1 = _prefix_term(prefix, K + 3 - p.b0)
    s2 = _prefix_term(prefix, K + 3 - p.b1)
    if s1 is None or s2 is None:
        bad.append("constant-class anchor indices outside prefix")
    elif s1 + s2 != 5 * p.m:
        bad.append(f"a({K + 3 - p.b0}) + a({K + 3 - p.b1}) = {s1 + s2}, expected 5m = {5 * p.m}")
    for i in range(1, p.m + 1):
        expect(K - 5 * i, p.b0 - 5 * i, f"b0 ramp i={i}")
        expect(K + 1 - 5 * i, p.b1 - 5 * i, f"b1 ramp i={i}")
    expect(K - 2, 5 * p.m, "constant class at K-2")

    try:
        ic_f, ic_g = extract_fg_ics_h(p, prefix)
    except ValueError as e:
        bad.append(str(e))
        return bad
    sys_spec = derived_system_h(p)
    sysbuf, outcome = eval_system(sys_spec, ic_f, ic_g, max(horizon, p.n0 + 2))
    if not outcome.alive:
        bad.append(f"extracted system dies at {outcome.death_index} ({outcome.cause})")
        return bad
    bad.extend(_sublinear_violations(
        sysbuf, p.n0, horizon,
        [("f(n-1)", -1, (p.b2 + 3) // 5),
         ("f(n)", 0, (p.b2 - 2) // 5),
         ("g(n-1)", -1, (p.b4 + 2) // 5)]))
    return bad


def _fg_as_int64(buf: SystemBuffer, max_index: int) -> tuple[np.ndarray, np.ndarray]:
    if buf.len_f < max_index or buf.len_g < max_index:
        raise ValueError(f"system buffer too short: need {max_index} terms")
    if not buf.exact:
        return buf.f_array(), buf.g_array()
    f = np.empty(buf.len_f, dtype=np.int64)
    g = np.empty(buf.len_g, dtype=np.int64)
    for arr, src in ((f, buf.f_array()), (g, buf.g_array())):
        for i, v in enumerate(src):
            if v.denominator != 1:
                raise ValueError(f"non-integer term {v} cannot enter the pattern")
            arr[i] = int(v)
    return f, g


def construct_family_v(p: FamilyParamsV, sysbuf: SystemBuffer,
                       lo: int, hi: int) -> np.ndarray:
    """Pattern values for indices lo..hi (inclusive) of the four-term family.

    lo may sit below the anchor K as long as every f/g subscript keeps
    k + n0 + 1 >= 1, i.e. lo >= K - 5*n0 (and >= 1).
    """
    K, n0 = p.k_anchor, p.n0
    if lo < max(1, K - 5 * n0) or lo > hi:
        raise ValueError(f"window must start at or after {max(1, K - 5 * n0)}")
    ns = np.arange(lo, hi + 1, dtype=np.int64)
    r = np.mod(ns - K, 5)
    k = (ns - K - r) // 5
    k_hi = int(k.max()) + n0 + 1
    f, g = _fg_as_int64(sysbuf, k_hi)
    out = np.empty(ns.shape[0], dtype=np.int64)
    for res, fill in ((0, lambda kk: 5 * f[kk + n0] + p.b0),
                      (1, lambda kk: 5 * g[kk + n0] + p.b1),
                      (2, lambda kk: 5 * kk + p.b2),
                      (3, lambda kk: np.full(kk.shape, 5 * p.m, dtype=np.int64)),
                      (4, lambda kk: 5 * kk + p.b4)):
        mask = r == res
        if mask.any():
            out[mask] = fill(k[mask])
    return out


def construct_family_h(p: FamilyParamsH, sysbuf: SystemBuffer,
                       lo: int, hi: int) -> np.ndarray:
    """Pattern values for indices lo..hi of the two/three-term family."""
    K, n0 = p.k_anchor, p.n0
    if lo < max(1, K - 5 * n0) or lo > hi:
        raise ValueError(f"window must start at or after {max(1, K - 5 * n0)}")
    ns = np.arange(lo, hi + 1, dtype=np.int64)
    r = np.mod(ns - K, 5)
    k = (ns - K - r) // 5
    k_hi = int(k.max()) + n0 + 1
    f, g = _fg_as_int64(sysbuf, k_hi)
    out = np.empty(ns.shape[0], dtype=np.int64)
    for res, fill in ((0, lambda kk: 5 * kk + p.b0),
                      (1, lambda kk: 5 * kk + p.b1),
                      (2, lambda kk: 5 * f[kk + n0] + p.b2),
                      (3, lambda kk: np.full(kk.shape, 5 * p.m, dtype=np.int64)),
                      (4, lambda kk: 5 * g[kk + n0] + p.b4)):
        mask = r == res
        if mask.any():
            out[mask] = fill(k[mask])
    return out


@dataclass(frozen=True)
class FamilyFixture:
    """A concrete family instance pinned by explicit initial conditions."""

    name: str
    family: str  # "V" | "H"
    ic: tuple[int, ...]
    params: "FamilyParamsV | FamilyParamsH"
    pattern_start: int  # first index where the period-5 pattern already holds
    printed_prefix: tuple[int, ...]
    oracle_name: str  # slow-solution oracle realized by the extracted system

    @property
    def recurrence(self) -> RecurrenceSpec:
        return V_RECURRENCE if self.family == "V" else H_RECURRENCE


def verify_family_end_to_end(fixture: FamilyFixture, limit: int = 1_000_000):
    """Full verification chain for a family fixture.

    Checks, in order: parameter constraints; derived system equals the
    registered slow-solution oracle's system; direct evaluation of the
    recurrence stays alive through `limit`; the documented prefix matches;
    every initial-condition restriction holds; the extracted f/g run matches
    the oracle's run-length construction; and the constructed pattern equals
    the directly evaluated terms on [pattern_start, limit].

    Returns (ok, report) where report maps step names to findings.
    """
    p = fixture.params
    report: dict = {"name": fixture.name, "limit": limit}
    if fixture.family == "V":
        validate, derive, extract, restrict, construct = (
            validate_params_v, derived_system_v, extract_fg_ics_v,
            check_ic_restrictions_v, construct_family_v)
    else:
        validate, derive, extract, restrict, construct = (
            validate_params_h, derived_system_h, extract_fg_ics_h,
            check_ic_restrictions_h, construct_family_h)

    report["param_violations"] = validate(p)
    if report["param_violations"]:
        return False, report

    sys_spec = derive(p)
    oracle = golomb.ORACLES[fixture.oracle_name]
    report["system"] = sys_spec.as_tuple()
    report["oracle_match"] = sys_spec == oracle.system
    buf, outcome = eval_single(fixture.recurrence, fixture.ic, limit)
    report["alive"] = outcome.alive
    if not outcome.alive:
        report["death_index"] = outcome.death_index
        return False, report

    prefix = fixture.printed_prefix
    report["prefix_ok"] = tuple(int(v) for v in buf.values[:len(prefix)]) == prefix

    k_hi = (limit - p.k_anchor) // 5 + p.n0 + 2
    report["restriction_violations"] = restrict(
        p, buf.values[: p.k_anchor - 1], horizon=max(1000, k_hi))
    ic_f, ic_g = extract(p, buf.values[: p.k_anchor - 1])
    sysbuf, sys_outcome = eval_system(sys_spec, ic_f, ic_g, k_hi)
    if not sys_outcome.alive:
        report["system_death"] = sys_outcome.death_index
        return False, report

    f, g = _fg_as_int64(sysbuf, k_hi)
    ok_f = bool(np.array_equal(f, golomb.oracle_prefix(oracle, "f", k_hi)))
    ok_g = bool(np.array_equal(g, golomb.oracle_prefix(oracle, "g", k_hi)))
    report["oracle_sequences_ok"] = ok_f and ok_g

    want = construct(p, sysbuf, fixture.pattern_start, limit)
    got = buf.slice(fixture.pattern_start, limit)
    diff = np.nonzero(got != want)[0]
    if diff.size:
        n = fixture.pattern_start + int(diff[0])
        report["mismatch"] = {"n": n, "got": int(got[diff[0]]), "want": int(want[diff[0]])}
    else:
        report["mismatch"] = None
    report["checked_through"] = limit

    ok = (report["oracle_match"] and report["alive"] and report["prefix_ok"]
          and not report["restriction_violations"]
          and report["oracle_sequences_ok"] and report["mismatch"] is None)
    return ok, report


@dataclass(frozen=True)
class ClassFit:
    """Exact fit of one residue class over the detection window.

    kind "C" (constant), "L" (linear with step 5 per period), or "I"
    (anything else). slope is the constant per-period step when one exists,
    intercept the class value at the window's first member, congruence the
    shared value mod `modulus` when uniform.
    """

    residue: int
    kind: str
    slope: int | None
    intercept: int
    congruence: int | None


@dataclass(frozen=True)
class InterleavePattern:
    modulus: int
    lo: int
    hi: int
    classes: tuple[ClassFit, ...]

    def pattern_string(self) -> str:
        return ",".join(c.kind for c in self.classes)

    def signature(self) -> tuple[int | None, ...]:
        return tuple(c.congruence for c in self.classes)

    @property
    def regular(self) -> bool:
        return all(c.kind in ("C", "L") for c in self.classes)


def detect_interleaving(buf: SequenceBuffer, lo: int, hi: int,
                        modulus: int = 5) -> InterleavePattern:
    """Classify each residue class of n over [lo, hi] by exact fit.

    Classes are keyed by n mod `modulus` and reported in residue order
    0..modulus-1. Every class needs at least 3 samples in the window.
    """
    if modulus < 2:
        raise ValueError("modulus must be >= 2")
    window = buf.slice(lo, hi).astype(np.int64)
    ns = np.arange(lo, hi + 1, dtype=np.int64)
    fits = []
    for res in range(modulus):
        vals = window[ns % modulus == res]
        if vals.shape[0] < 3:
            raise ValueError(f"residue class {res} has {vals.shape[0]} samples; need >= 3")
        d = np.diff(vals)
        uniform_step = bool(np.all(d == d[0]))
        slope = int(d[0]) if uniform_step else None
        if slope == 0:
            kind = "C"
        elif slope == modulus:
            kind = "L"
        else:
            kind = "I"
        mods = np.unique(np.mod(vals, modulus))
        congruence = int(mods[0]) if mods.shape[0] == 1 else None
        fits.append(ClassFit(res, kind, slope, int(vals[0]), congruence))
    return InterleavePattern(modulus, lo, hi, tuple(fits))
