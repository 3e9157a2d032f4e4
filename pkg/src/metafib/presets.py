"""Named recurrences, initial conditions, and family fixtures.

Presets cover the classic nested recurrences, the mortality benchmarks, the
chaotic slow solution used for generational statistics, the eight
interleaved initial conditions from the period-5 catalog, and the four
worked family fixtures.
"""
from __future__ import annotations

from dataclasses import dataclass

from .recurrence import RecurrenceSpec
from .families import (FamilyFixture, FamilyParamsH, FamilyParamsV,
                       H_RECURRENCE, V_RECURRENCE)

Q_RECURRENCE = RecurrenceSpec(terms=((0, 1), (0, 2)))
BA_RECURRENCE = RecurrenceSpec(terms=((0, 1), (0, 2), (0, 3)))
LA_RECURRENCE = RecurrenceSpec(terms=((19, 3), (28, 12)))
G_RECURRENCE = RecurrenceSpec(terms=((0, 1),), constant=1)

RECURRENCES: dict[str, RecurrenceSpec] = {
    "V": V_RECURRENCE,
    "H": H_RECURRENCE,
    "Q": Q_RECURRENCE,
    "BA": BA_RECURRENCE,
    "LA": LA_RECURRENCE,
    "G": G_RECURRENCE,
}


@dataclass(frozen=True)
class Preset:
    name: str
    spec: RecurrenceSpec
    ic: tuple[int, ...]
    note: str = ""


def _preset(name, spec, ic, note=""):
    return name, Preset(name, spec, tuple(ic), note)


PRESETS: dict[str, Preset] = dict([
    _preset("V", V_RECURRENCE, (1, 1, 1, 1),
            "slow solution, hits every positive integer"),
    _preset("Q", Q_RECURRENCE, (1, 1), "classic chaotic two-term recurrence"),
    _preset("H", H_RECURRENCE, (3, 1, 4, 2), "quasi-periodic sample start"),
    _preset("BA", BA_RECURRENCE, (1, 1, 1, 4, 3),
            "three-term mortality benchmark, dies near 5.1e5"),
    _preset("LA", LA_RECURRENCE, tuple([1] * 29),
            "shifted two-term recurrence, dies near 1.95e7"),
    _preset("G", G_RECURRENCE, (1,), "self-describing run-length sequence"),
    _preset("Vc", V_RECURRENCE, (3, 4, 5, 4, 5, 6),
            "chaotic solution with generational structure; dies near 3.08e9"),
    _preset("V3144", V_RECURRENCE, (3, 1, 4, 4),
            "mortality benchmark, dies at index 474767"),
    # period-5 interleaved catalog, four-term recurrence
    _preset("t4r1", V_RECURRENCE, (5, 4, 0, 0, 0, 5, 0, 5, 5, 1, 5, 4),
            "pattern C,C,C,L,L"),
    _preset("t4r2", V_RECURRENCE, (4, 0, 5, -2, 1, 3, -3, 5, 3, 0, 4, 10, 5, 8),
            "pattern C,C,L,C,L"),
    _preset("t4r3", V_RECURRENCE,
            (0, 14, -4, -7, 8, 5, 14, -2, -2, 8, 0, 0, 6, 3, 18, 15, 14, 11,
             8, 8, 20, 14, 16, 13, 8, 25),
            "pattern C,L,C,L,L"),
    _preset("t4r4", V_RECURRENCE,
            (0, 2, -2, -6, 11, 6, 2, 3, 0, 11, 0, 2, 8, -2, 11, 15, 2, 13),
            "pattern C,L,C,L,L, distinguished from t4r3 by congruences"),
    # period-5 interleaved catalog, two/three-term recurrence
    _preset("t5r1", H_RECURRENCE, (5, 3, 0, -1, -1, 5, 0, 1, 4, 2, 5, 3, 10),
            "pattern C,C,C,L,L"),
    _preset("t5r2", H_RECURRENCE, (2, 0, 5, 0, 0, 0, 5, 5, 5, 3, 2),
            "pattern C,C,L,C,L"),
    _preset("t5r3", H_RECURRENCE,
            (7, 0, -3, 0, 4, 7, 5, 0, 7, 4, 0, 8, 7, 5, 4, 7, 15, 12, 10),
            "pattern C,C,L,L,L"),
    _preset("t5r4", H_RECURRENCE,
            (6, 1, 0, 3, 3, 0, 6, 4, -1, 3, 6, 0, 12, 4, 3, 6, 16, 14, 9),
            "pattern C,C,L,L,L"),
    # family fixture starts (square-root classes, verified end to end)
    _preset("v1", V_RECURRENCE, (4, 2, 5, 3, 1), "family fixture, see FIXTURES"),
    _preset("v2", V_RECURRENCE, (3, 1, 4, 2, 5, 3), "family fixture"),
    _preset("h1", H_RECURRENCE, (3, 1, 4, 2), "family fixture"),
    _preset("h2", H_RECURRENCE, (4, 2, 5, 3, 1, 4, 7, 5), "family fixture"),
])


FIXTURES: dict[str, FamilyFixture] = {
    "v1": FamilyFixture(
        name="v1", family="V", ic=(4, 2, 5, 3, 1),
        params=FamilyParamsV(k_anchor=10, b0=1, b1=-1, b2=12, b4=13,
                             a_f=2, a_g=3, m=1),
        pattern_start=5,
        printed_prefix=(4, 2, 5, 3, 1, 4, 7, 5, 8),
        oracle_name="fg1"),
    "v2": FamilyFixture(
        name="v2", family="V", ic=(3, 1, 4, 2, 5, 3),
        params=FamilyParamsV(k_anchor=22, b0=1, b1=-1, b2=17, b4=23,
                             a_f=2, a_g=8, m=2),
        pattern_start=10,
        printed_prefix=(3, 1, 4, 2, 5, 3, 6, 4, 7, 10, 8, 6, 9, 7, 10, 13, 6,
                        14, 12, 10, 18, 6),
        oracle_name="fg2"),
    "h1": FamilyFixture(
        name="h1", family="H", ic=(3, 1, 4, 2),
        params=FamilyParamsH(k_anchor=12, b0=11, b1=14, b2=2, b4=-2,
                             a_f=4, a_g=1, m=1),
        pattern_start=5,
        printed_prefix=(3, 1, 4, 2, 5, 3, 6, 9, 7, 5, 3),
        oracle_name="fg1"),
    "h2": FamilyFixture(
        name="h2", family="H", ic=(4, 2, 5, 3, 1, 4, 7, 5),
        params=FamilyParamsH(k_anchor=25, b0=16, b1=19, b2=2, b4=-2,
                             a_f=9, a_g=6, m=2),
        pattern_start=15,
        printed_prefix=(4, 2, 5, 3, 1, 4, 7, 5, 3, 6, 9, 7, 10, 8, 6, 9, 12,
                        10, 13, 11, 14, 12, 10, 13),
        oracle_name="fg12"),
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        known = ", ".join(sorted(PRESETS))
        raise KeyError(f"unknown preset {name!r}; known: {known}") from None


def get_fixture(name: str) -> FamilyFixture:
    try:
        return FIXTURES[name]
    except KeyError:
        known = ", ".join(sorted(FIXTURES))
        raise KeyError(f"unknown fixture {name!r}; known: {known}") from None
