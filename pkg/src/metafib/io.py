"""Serialization: b-file and CSV emission, JSON recurrence specs, IC parsing.

The b-file convention is one term per line, "n value" with a single space,
1-indexed, newline-terminated. Lines starting with '#' and blank lines are
ignored on parse.
"""
from __future__ import annotations

import json
from typing import Iterable, Sequence

import numpy as np

from .recurrence import RecurrenceSpec, SequenceBuffer


def format_bfile(buf_or_values, start_index: int = 1) -> str:
    if isinstance(buf_or_values, SequenceBuffer):
        values = buf_or_values.values
        start_index = buf_or_values.origin_index
    else:
        values = np.asarray(buf_or_values)
    lines = [f"{start_index + i} {int(v)}" for i, v in enumerate(values)]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_bfile(text: str) -> tuple[np.ndarray, np.ndarray]:
    """Returns (indices, values) as int64 arrays."""
    ns, vs = [], []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"malformed b-file line: {raw!r}")
        ns.append(int(parts[0]))
        vs.append(int(parts[1]))
    return np.array(ns, dtype=np.int64), np.array(vs, dtype=np.int64)


def format_csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    out = [",".join(header)]
    for row in rows:
        out.append(",".join(str(c) for c in row))
    return "\n".join(out) + "\n"


def recurrence_to_json(spec: RecurrenceSpec) -> str:
    return json.dumps({"constant": spec.constant,
                       "terms": [[p, q] for p, q in spec.terms]})


def recurrence_from_json(text: str) -> RecurrenceSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError(f"invalid JSON recurrence spec: {e}") from None
    if not isinstance(data, dict) or "terms" not in data:
        raise ValueError('recurrence spec must be an object with "terms"')
    terms = data["terms"]
    if (not isinstance(terms, list)
            or not all(isinstance(t, list) and len(t) == 2 for t in terms)):
        raise ValueError('"terms" must be a list of [p, q] pairs')
    constant = data.get("constant", 0)
    if not isinstance(constant, int):
        raise ValueError('"constant" must be an integer')
    return RecurrenceSpec(terms=tuple((int(p), int(q)) for p, q in terms),
                          constant=constant)


def parse_ic(text: str) -> tuple[int, ...]:
    """Comma (or whitespace) separated integers, e.g. "3,1,4,4"."""
    parts = [p for chunk in text.split(",") for p in chunk.split()]
    if not parts:
        raise ValueError("empty initial condition")
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise ValueError(f"initial condition must be integers, got {text!r}") from None
