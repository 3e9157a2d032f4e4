"""Command-line interface.

Subcommands: eval, lifespan, generations, alpha, plot-data, oracle-check,
verify-family, detect, scan. Exit codes: 0 success (death reported by
`lifespan` is a result, not a failure), 1 verification failure, 2 usage
error. All diagnostics go to stderr; data goes to stdout or --out.
"""
from __future__ import annotations

import argparse
import itertools
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import io as serio
from .families import detect_interleaving, verify_family_end_to_end
from .generations import alpha_table, generation_table, plot_data
from .golomb import (ORACLES, fg1_f_closed_vec, fg1_g_closed_vec,
                     growth_ratio, oracle_prefix, verify_oracle)
from .presets import PRESETS, get_fixture, get_preset
from .recurrence import EvalOutcome, RecurrenceSpec, SequenceBuffer, eval_into, eval_single
from . import kernels


class UsageError(Exception):
    pass


def _resolve(args) -> tuple[RecurrenceSpec, tuple[int, ...]]:
    """Recurrence and IC from --preset / --spec / --ic (later flags override
    the preset's parts)."""
    spec = None
    ic = None
    if getattr(args, "preset", None):
        try:
            preset = get_preset(args.preset)
        except KeyError as e:
            raise UsageError(str(e)) from None
        spec, ic = preset.spec, preset.ic
    if getattr(args, "spec", None):
        try:
            with open(args.spec, "r", encoding="utf-8") as fh:
                spec = serio.recurrence_from_json(fh.read())
        except OSError as e:
            raise UsageError(f"cannot read spec file: {e}") from None
        except ValueError as e:
            raise UsageError(str(e)) from None
    if getattr(args, "ic", None):
        try:
            ic = serio.parse_ic(args.ic)
        except ValueError as e:
            raise UsageError(str(e)) from None
    if spec is None or ic is None:
        raise UsageError("need --preset, or --spec together with --ic")
    return spec, ic


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _death_note(outcome: EvalOutcome, buf: SequenceBuffer | None = None) -> str:
    last = f", last value {buf.term(outcome.computed_len)}" if buf and outcome.computed_len else ""
    return (f"dead after {outcome.death_index} terms "
            f"(last defined index {outcome.computed_len}{last}; "
            f"argument {outcome.offending_argument} out of range "
            f"in summand {outcome.offending_term})")


def cmd_eval(args) -> int:
    spec, ic = _resolve(args)
    buf, outcome = eval_single(spec, ic, args.limit, compact=args.compact32)
    if not outcome.alive:
        print(_death_note(outcome, buf), file=sys.stderr)
    if args.format == "bfile":
        text = serio.format_bfile(buf)
    elif args.format == "csv":
        text = serio.format_csv(["n", "value"],
                                ((i + 1, int(v)) for i, v in enumerate(buf.values)))
    else:
        text = json.dumps({
            "status": outcome.status,
            "computed_len": outcome.computed_len,
            "death_index": outcome.death_index,
            "values": [int(v) for v in buf.values],
        }) + "\n"
    _emit(text, args.out)
    return 0


def cmd_lifespan(args) -> int:
    spec, ic = _resolve(args)
    cap = args.cap
    if args.mmap:
        dtype = np.uint32 if args.compact32 else np.int64
        arr = np.lib.format.open_memmap(args.mmap, mode="w+", dtype=dtype,
                                        shape=(cap,))
        arr[: len(ic)] = ic
        status, computed_len, death_index, arg, term = eval_into(spec, arr, len(ic), cap)
        if status == kernels.STATUS_OVERFLOW:
            print(f"overflow at index {death_index}", file=sys.stderr)
            return 1
        last = int(arr[computed_len - 1])
        if status == kernels.STATUS_ALIVE:
            outcome = EvalOutcome("alive", int(computed_len))
        else:
            outcome = EvalOutcome("dead", int(computed_len), int(death_index),
                                  int(arg), int(term), "range")
    else:
        buf, outcome = eval_single(spec, ic, cap, compact=args.compact32)
        last = buf.term(outcome.computed_len)
    if outcome.alive:
        print(f"alive through {outcome.computed_len} terms (last value {last})")
    else:
        print(f"dead after {outcome.death_index} terms "
              f"(last defined index {outcome.computed_len}, value {last}; "
              f"argument {outcome.offending_argument} out of range "
              f"in summand {outcome.offending_term})")
    return 0


def _buffer_for_table(args) -> SequenceBuffer:
    spec, ic = _resolve(args)
    buf, outcome = eval_single(spec, ic, args.cap)
    if not outcome.alive:
        print(f"note: sequence dies at {outcome.death_index}; "
              f"analysis uses the defined prefix", file=sys.stderr)
    return buf


def cmd_generations(args) -> int:
    buf = _buffer_for_table(args)
    table = generation_table(buf, args.kmax)
    rows = [(k, *table.row(k)) for k in range(1, args.kmax + 1)]
    if args.format == "json":
        text = json.dumps([{"k": k, "p_spiritual": ps, "p": p, "r": r}
                           for k, ps, p, r in rows]) + "\n"
    else:
        text = serio.format_csv(["k", "p_spiritual", "p", "r"], rows)
    _emit(text, args.out)
    return 0


def cmd_alpha(args) -> int:
    if args.kmin < 1 or args.kmin > args.kmax:
        raise UsageError("need 1 <= kmin <= kmax")
    buf = _buffer_for_table(args)
    table = generation_table(buf, args.kmax)
    stats = alpha_table(buf, table)
    rows = []
    for st in stats:
        if st.k < args.kmin:
            continue
        rows.append((st.k, st.count, f"{st.mean:.4f}", f"{st.spread:.6f}",
                     "" if st.alpha is None else f"{st.alpha:.4f}"))
    if args.format == "json":
        text = json.dumps([{"k": st.k, "count": st.count, "mean": st.mean,
                            "m": st.spread, "alpha": st.alpha}
                           for st in stats if st.k >= args.kmin]) + "\n"
    else:
        text = serio.format_csv(["k", "count", "mean", "m", "alpha"], rows)
    _emit(text, args.out)
    return 0


def cmd_plot_data(args) -> int:
    buf = _buffer_for_table(args)
    table = generation_table(buf, args.kmax)
    hi = min(args.hi, buf.end_index)
    rows = plot_data(buf, table, args.lo, hi)
    if args.format == "json":
        text = json.dumps([{"n": n, "s": s, "region": region}
                           for n, s, region in rows]) + "\n"
    else:
        text = serio.format_csv(["n", "s", "region"], rows)
    _emit(text, args.out)
    return 0


def cmd_oracle_check(args) -> int:
    oracle = ORACLES[args.system]
    ok, detail = verify_oracle(oracle, args.limit)
    if not ok:
        print(f"{args.system}: FAIL {detail}", file=sys.stderr)
        return 1
    print(f"{args.system}: system matches run-length construction through {args.limit}")
    if args.closed_form:
        if args.system != "fg1":
            raise UsageError("--closed-form only applies to fg1")
        n = np.arange(1, args.closed_form + 1, dtype=np.int64)
        for which, closed in (("f", fg1_f_closed_vec), ("g", fg1_g_closed_vec)):
            want = oracle_prefix(oracle, which, args.closed_form)
            got = closed(n)
            bad = np.nonzero(got != want)[0]
            if bad.size:
                i = int(bad[0])
                print(f"fg1 {which}: closed form mismatch at n={i + 1}: "
                      f"{int(got[i])} != {int(want[i])}", file=sys.stderr)
                return 1
        print(f"fg1: closed forms match through {args.closed_form}")
    ratio = growth_ratio(oracle.system, oracle.ic_f, oracle.ic_g, args.limit)
    print(f"{args.system}: growth ratio f(N)/sqrt((d_f+d_g)N) = {ratio:.6f}")
    return 0


def cmd_verify_family(args) -> int:
    try:
        fixture = get_fixture(args.fixture)
    except KeyError as e:
        raise UsageError(str(e)) from None
    ok, report = verify_family_end_to_end(fixture, args.limit)
    if args.format == "json":
        _emit(json.dumps(report, default=str) + "\n", args.out)
    else:
        lines = [f"fixture {fixture.name}: params "
                 f"{'ok' if not report.get('param_violations') else report['param_violations']}"]
        if "alive" in report:
            lines.append(f"direct evaluation alive: {report['alive']}")
        if "prefix_ok" in report:
            lines.append(f"documented prefix matches: {report['prefix_ok']}")
        if "restriction_violations" in report:
            rv = report["restriction_violations"]
            lines.append(f"initial-condition restrictions: {'ok' if not rv else rv}")
        if "oracle_sequences_ok" in report:
            lines.append(f"extracted system matches oracle: {report['oracle_sequences_ok']}")
        if "mismatch" in report:
            m = report["mismatch"]
            lines.append("pattern matches direct evaluation through "
                         f"{report['checked_through']}" if m is None
                         else f"pattern mismatch at n={m['n']}: {m['got']} != {m['want']}")
        lines.append(f"result: {'ok' if ok else 'FAIL'}")
        _emit("\n".join(lines) + "\n", args.out)
    return 0 if ok else 1


def cmd_detect(args) -> int:
    spec, ic = _resolve(args)
    buf, outcome = eval_single(spec, ic, args.cap)
    end = buf.end_index
    lo = args.lo if args.lo else max(buf.ic_len + 1, end // 3)
    hi = args.hi if args.hi else end
    if not outcome.alive and hi > buf.end_index:
        print(f"sequence died at {outcome.death_index}; window unavailable", file=sys.stderr)
        return 1
    try:
        pattern = detect_interleaving(buf, lo, hi, modulus=args.modulus)
    except ValueError as e:
        raise UsageError(str(e)) from None
    if not outcome.alive:
        print(f"note: classified the defined prefix; sequence dies at "
              f"{outcome.death_index}", file=sys.stderr)
    if args.format == "csv":
        text = serio.format_csv(
            ["residue", "kind", "slope", "intercept", "congruence"],
            ((c.residue, c.kind, "" if c.slope is None else c.slope,
              c.intercept, "" if c.congruence is None else c.congruence)
             for c in pattern.classes))
    else:
        text = json.dumps({
            "pattern": pattern.pattern_string(),
            "signature": [c.congruence for c in pattern.classes],
            "window": [pattern.lo, pattern.hi],
            "modulus": pattern.modulus,
            "classes": [{"residue": c.residue, "kind": c.kind, "slope": c.slope,
                         "intercept": c.intercept, "congruence": c.congruence}
                        for c in pattern.classes],
        }) + "\n"
    _emit(text, args.out)
    return 0


def _parse_ic_space(text: str) -> list[tuple[int, ...]]:
    """Per-position alternatives: "1..3,5,1|2" means three positions; the
    first ranges over 1..3, the second is fixed at 5, the third is 1 or 2."""
    axes = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise UsageError(f"empty range {part!r}")
            axes.append(range(lo, hi + 1))
        elif "|" in part:
            axes.append([int(x) for x in part.split("|")])
        else:
            axes.append([int(part)])
    total = 1
    for ax in axes:
        total *= len(ax)
        if total > 200_000:
            raise UsageError("ic-space too large (over 200000 candidates)")
    return [tuple(c) for c in itertools.product(*axes)]


def _load_ic_list(path: str) -> list[tuple[int, ...]]:
    out = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for raw in fh:
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                out.append(serio.parse_ic(line))
    except OSError as e:
        raise UsageError(f"cannot read ic list: {e}") from None
    return out


def _classify_alive(buf: SequenceBuffer) -> str:
    d = np.diff(buf.values[buf.ic_len - 1:])
    if bool(np.all((d == 0) | (d == 1))):
        return "slow"
    end = buf.end_index
    lo = max(buf.ic_len + 1, end - 2999)
    if end - lo + 1 >= 15:
        try:
            pattern = detect_interleaving(buf, lo, end, modulus=5)
        except ValueError:
            return "other"
        if pattern.regular:
            return "period-5 interleaved"
    return "other"


def _scan_one(spec: RecurrenceSpec, ic: tuple[int, ...], cap: int) -> dict:
    arr = np.zeros(cap, dtype=np.int64)
    arr[: len(ic)] = ic
    status, computed_len, death_index, arg, term = eval_into(spec, arr, len(ic), cap)
    if status == kernels.STATUS_OVERFLOW:
        return {"ic": ic, "outcome": "Overflow", "lifespan": int(computed_len),
                "classification": "overflow"}
    if status == kernels.STATUS_DEAD:
        return {"ic": ic, "outcome": "Dead", "lifespan": int(death_index),
                "classification": "-"}
    buf = SequenceBuffer(arr, ic_len=len(ic), spec=spec)
    return {"ic": ic, "outcome": "Alive", "lifespan": cap,
            "classification": _classify_alive(buf)}


def _lifespan_histogram(records: list[dict], cap: int) -> dict[str, int]:
    hist: dict[str, int] = {}
    for rec in records:
        if rec["outcome"] == "Alive":
            key = f"alive@{cap}"
        elif rec["outcome"] == "Overflow":
            key = "overflow"
        else:
            key = f"1e{len(str(max(rec['lifespan'], 1))) - 1}"
        hist[key] = hist.get(key, 0) + 1
    return dict(sorted(hist.items()))


def cmd_scan(args) -> int:
    if bool(args.ic_space) == bool(args.ic_list):
        raise UsageError("need exactly one of --ic-space or --ic-list")
    if args.preset:
        try:
            spec = get_preset(args.preset).spec
        except KeyError as e:
            raise UsageError(str(e)) from None
    elif args.spec:
        with open(args.spec, "r", encoding="utf-8") as fh:
            spec = serio.recurrence_from_json(fh.read())
    else:
        raise UsageError("need --preset or --spec for the recurrence")
    candidates = (_parse_ic_space(args.ic_space) if args.ic_space
                  else _load_ic_list(args.ic_list))
    candidates = sorted(set(candidates))
    if args.workers < 1:
        raise UsageError("need --workers >= 1")
    if args.workers == 1 or len(candidates) <= 1:
        records = [_scan_one(spec, ic, args.cap) for ic in candidates]
    else:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            records = list(pool.map(lambda ic: _scan_one(spec, ic, args.cap),
                                    candidates))
    hist = _lifespan_histogram(records, args.cap)
    if args.format == "json":
        text = json.dumps({
            "records": [{**r, "ic": list(r["ic"])} for r in records],
            "histogram": hist,
        }) + "\n"
    else:
        body = serio.format_csv(
            ["ic", "outcome", "lifespan", "classification"],
            ((" ".join(map(str, r["ic"])), r["outcome"], r["lifespan"],
              r["classification"]) for r in records))
        tail = "".join(f"# histogram {k}: {v}\n" for k, v in hist.items())
        text = body + tail
    _emit(text, args.out)
    return 0


def _add_source_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", help=f"named start; one of: {', '.join(sorted(PRESETS))}")
    p.add_argument("--ic", help='initial condition, e.g. "3,1,4,4"')
    p.add_argument("--spec", help='JSON recurrence file {"constant": c, "terms": [[p,q],...]}')


def _add_out_flags(p: argparse.ArgumentParser, formats=("bfile", "csv", "json"),
                   default="bfile") -> None:
    p.add_argument("--format", choices=formats, default=default)
    p.add_argument("--out", help="write output to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="metafib",
                                 description="nested-recurrence sequence toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a sequence and emit its terms")
    _add_source_flags(p)
    p.add_argument("--limit", type=int, required=True, help="evaluate through this index")
    p.add_argument("--compact32", action="store_true",
                   help="store terms as unsigned 32-bit (checked)")
    _add_out_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("lifespan", help="report how long a sequence lives")
    _add_source_flags(p)
    p.add_argument("--cap", type=int, default=1_000_000)
    p.add_argument("--compact32", action="store_true")
    p.add_argument("--mmap", help="back the buffer with a memory-mapped .npy file")
    p.set_defaults(func=cmd_lifespan)

    p = sub.add_parser("generations", help="generation boundary table")
    _add_source_flags(p)
    p.add_argument("--kmax", type=int, default=20)
    p.add_argument("--cap", type=int, default=6_000_000)
    _add_out_flags(p, formats=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_generations)

    p = sub.add_parser("alpha", help="per-generation noise statistics")
    _add_source_flags(p)
    p.add_argument("--kmax", type=int, default=20)
    p.add_argument("--kmin", type=int, default=5)
    p.add_argument("--cap", type=int, default=6_000_000)
    _add_out_flags(p, formats=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("plot-data", help="noise signal samples with region labels")
    _add_source_flags(p)
    p.add_argument("--lo", type=int, default=1)
    p.add_argument("--hi", type=int, default=45_000)
    p.add_argument("--kmax", type=int, default=20)
    p.add_argument("--cap", type=int, default=6_000_000)
    _add_out_flags(p, formats=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_plot_data)

    p = sub.add_parser("oracle-check", help="verify a slow-system oracle")
    p.add_argument("--system", choices=sorted(ORACLES), required=True)
    p.add_argument("--limit", type=int, default=1_000_000)
    p.add_argument("--closed-form", type=int, default=0,
                   help="also check fg1 closed forms through this index")
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("verify-family", help="verify a quasi-periodic family fixture")
    p.add_argument("--fixture", required=True)
    p.add_argument("--limit", type=int, default=1_000_000)
    _add_out_flags(p, formats=("text", "json"), default="text")
    p.set_defaults(func=cmd_verify_family)

    p = sub.add_parser("detect", help="classify period-5 interleaving structure")
    _add_source_flags(p)
    p.add_argument("--cap", type=int, default=3_000)
    p.add_argument("--lo", type=int, default=0)
    p.add_argument("--hi", type=int, default=0)
    p.add_argument("--modulus", type=int, default=5)
    _add_out_flags(p, formats=("json", "csv"), default="json")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("scan", help="sweep initial conditions and classify")
    p.add_argument("--preset", help="recurrence source (its IC is ignored)")
    p.add_argument("--spec", help="JSON recurrence file")
    p.add_argument("--ic-space", help='per-position alternatives, e.g. "1..3,1..3,5"')
    p.add_argument("--ic-list", help="file with one IC per line")
    p.add_argument("--cap", type=int, default=1_000_000)
    p.add_argument("--workers", type=int, default=1)
    _add_out_flags(p, formats=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_scan)

    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code else 0
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OverflowError as e:
        print(f"overflow: {e}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
