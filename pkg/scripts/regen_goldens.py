#!/usr/bin/env python3
"""Recompute every golden constant asserted by the test suite and print them
as a Python dict. Run after any engine change and diff against
tests/goldens.py; differences mean either a regression or a deliberate
semantic change that must be re-audited before freezing.

Desk-scale only: the 3e9-term mortality run has its own script
(extended_vc_run.py).
"""
from __future__ import annotations

import pprint
import sys

import numpy as np

import metafib as mf


def main() -> int:
    out: dict = {}

    for name, cap in (("V3144", 500_000), ("BA", 600_000), ("LA", 19_600_000)):
        p = mf.get_preset(name)
        buf, o = mf.eval_single(p.spec, p.ic, cap)
        out[f"{name.lower()}_death_index"] = o.death_index
        out[f"{name.lower()}_computed_len"] = o.computed_len
        out[f"{name.lower()}_last_value"] = buf.term(o.computed_len)

    p = mf.get_preset("Vc")
    buf, o = mf.eval_single(p.spec, p.ic, 6_000_000)
    table = mf.generation_table(buf, 20)
    out["vc_p"] = [int(v) for v in table.p_start]
    out["vc_r"] = [int(v) for v in table.r_end]
    out["vc_p_spiritual"] = [int(v) for v in table.p_spiritual]
    stats = mf.alpha_table(buf, table)
    out["vc_alpha"] = {st.k: round(st.alpha, 4) for st in stats if st.k >= 5}

    for name in ("fg1", "fg2", "fg12"):
        o = mf.ORACLES[name]
        out[f"{name}_growth_1e6"] = mf.growth_ratio(o.system, o.ic_f, o.ic_g, 1_000_000)

    sigs = {}
    for name in ("t4r1", "t4r2", "t4r3", "t4r4", "t5r1", "t5r2", "t5r3", "t5r4"):
        p = mf.get_preset(name)
        buf, _ = mf.eval_single(p.spec, p.ic, 3_000)
        pat = mf.detect_interleaving(buf, max(buf.ic_len + 1, 1_000), 3_000)
        sigs[name] = (pat.pattern_string(), tuple(pat.signature()))
    out["catalog"] = sigs

    pprint.pprint(out, sort_dicts=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
