"""Toolkit for nested (meta-Fibonacci) recurrences: exact evaluation with
death detection, Golomb-like two-sequence systems and their slow-solution
oracles, generational noise statistics for chaotic solutions, and
construction/verification of quasi-periodic period-5 solution families.
"""

from .recurrence import (EvalOutcome, RecurrenceSpec, SequenceBuffer,
                         check_slow, check_surjective, eval_into, eval_single,
                         lifespan, naive_eval, parent_spots,
                         pointwise_violations)
from .systems import GolombSystemSpec, SystemBuffer, eval_system
from .golomb import (ORACLES, SlowSolutionOracle, fg1_f_closed, fg1_g_closed,
                     growth_ratio, oracle_prefix, oracle_term, verify_oracle)
from .generations import (GenerationStats, GenerationTable, alpha_table,
                          generation_boundary, generation_table,
                          min_parent_spot, plot_data)
from .families import (ClassFit, FamilyFixture, FamilyParamsH, FamilyParamsV,
                       InterleavePattern, check_ic_restrictions_h,
                       check_ic_restrictions_v, construct_family_h,
                       construct_family_v, derived_system_h, derived_system_v,
                       detect_interleaving, extract_fg_ics_h, extract_fg_ics_v,
                       validate_params_h, validate_params_v,
                       verify_family_end_to_end)
from .presets import FIXTURES, PRESETS, RECURRENCES, Preset, get_fixture, get_preset

__version__ = "0.1.0"

__all__ = [
    "EvalOutcome", "RecurrenceSpec", "SequenceBuffer", "check_slow",
    "check_surjective", "eval_into", "eval_single", "lifespan", "naive_eval",
    "parent_spots", "pointwise_violations",
    "GolombSystemSpec", "SystemBuffer", "eval_system",
    "ORACLES", "SlowSolutionOracle", "fg1_f_closed", "fg1_g_closed",
    "growth_ratio", "oracle_prefix", "oracle_term", "verify_oracle",
    "GenerationStats", "GenerationTable", "alpha_table",
    "generation_boundary", "generation_table", "min_parent_spot", "plot_data",
    "ClassFit", "FamilyFixture", "FamilyParamsH", "FamilyParamsV",
    "InterleavePattern", "check_ic_restrictions_h", "check_ic_restrictions_v",
    "construct_family_h", "construct_family_v", "derived_system_h",
    "derived_system_v", "detect_interleaving", "extract_fg_ics_h",
    "extract_fg_ics_v", "validate_params_h", "validate_params_v",
    "verify_family_end_to_end",
    "FIXTURES", "PRESETS", "RECURRENCES", "Preset", "get_fixture", "get_preset",
    "__version__",
]
