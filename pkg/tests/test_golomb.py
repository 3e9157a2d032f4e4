import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import goldens
from metafib.golomb import (ORACLES, fg1_f_closed, fg1_f_closed_vec,
                            fg1_g_closed, fg1_g_closed_vec, growth_ratio,
                            oracle_prefix, oracle_term, verify_oracle)
from metafib.systems import GolombSystemSpec, eval_system


class TestRunLengthConstruction:
    def test_fg1_prefixes(self):
        o = ORACLES["fg1"]
        assert list(oracle_prefix(o, "f", 12)) == [0, 1, 1, 1, 2, 2, 2, 2, 2, 3, 3, 3]
        assert list(oracle_prefix(o, "g", 12)) == [1, 1, 2, 2, 2, 2, 3, 3, 3, 3, 3, 3]

    def test_fg2_prefixes(self):
        o = ORACLES["fg2"]
        # f: 0 once, 1 four times, even once, odd i >= 3 (2i+1) times
        assert list(oracle_prefix(o, "f", 14)) == [0, 1, 1, 1, 1, 2, 3, 3, 3, 3, 3, 3, 3, 4]
        # g: 1 twice, even once, odd i >= 3 (2i-1) times
        assert list(oracle_prefix(o, "g", 10)) == [1, 1, 2, 3, 3, 3, 3, 3, 4, 5]

    def test_fg12_prefixes(self):
        o = ORACLES["fg12"]
        # f: 0 once, 1 twice, two twice, three once, four seven times, ...
        assert list(oracle_prefix(o, "f", 13)) == [0, 1, 1, 2, 2, 3, 4, 4, 4, 4, 4, 4, 4]
        # g: 1 twice, 2 once, 3 four times, 4 twice, 5 once, 6 ten times...
        assert list(oracle_prefix(o, "g", 10)) == [1, 1, 2, 3, 3, 3, 3, 4, 4, 5]

    def test_oracle_term_matches_prefix(self):
        o = ORACLES["fg1"]
        assert oracle_term(o, "f", 10) == 3
        with pytest.raises(IndexError):
            oracle_term(o, "f", 0)
        with pytest.raises(ValueError):
            oracle_prefix(o, "x", 5)


class TestOraclesAgainstSystems:
    @pytest.mark.parametrize("name", ["fg1", "fg2", "fg12"])
    def test_verify_oracle_100k(self, name):
        ok, detail = verify_oracle(ORACLES[name], 100_000)
        assert ok, detail

    def test_verify_oracle_reports_mismatch(self):
        # wrong initial conditions cannot reproduce the multiplicity profile
        o = ORACLES["fg2"]
        bad = type(o)(o.name, GolombSystemSpec(0, 0, 0, 2), (0,), (1,),
                      o.f_multiplicity, o.g_multiplicity)
        ok, detail = verify_oracle(bad, 1_000)
        assert not ok and detail["reason"] in ("mismatch", "dead")


class TestClosedForms:
    @settings(max_examples=80, deadline=None)
    @given(st.integers(min_value=1, max_value=10**12))
    def test_scalar_closed_forms_exact(self, n):
        # definitional checks, no floats involved
        f = fg1_f_closed(n)
        assert f ** 2 < n <= (f + 1) ** 2  # f = ceil(sqrt(n)) - 1
        g = fg1_g_closed(n)
        # g = floor(sqrt(n) + 1/2): g - 1/2 <= sqrt(n) < g + 1/2
        assert (2 * g - 1) ** 2 <= 4 * n < (2 * g + 1) ** 2

    def test_vectorized_matches_scalar(self):
        n = np.arange(1, 5_000, dtype=np.int64)
        assert np.array_equal(fg1_f_closed_vec(n),
                              np.array([fg1_f_closed(int(k)) for k in n]))
        assert np.array_equal(fg1_g_closed_vec(n),
                              np.array([fg1_g_closed(int(k)) for k in n]))

    def test_closed_forms_match_run_lengths(self):
        o = ORACLES["fg1"]
        n = np.arange(1, 100_001, dtype=np.int64)
        assert np.array_equal(fg1_f_closed_vec(n), oracle_prefix(o, "f", 100_000))
        assert np.array_equal(fg1_g_closed_vec(n), oracle_prefix(o, "g", 100_000))


class TestGrowth:
    @pytest.mark.parametrize("name", ["fg1", "fg2", "fg12"])
    def test_ratio_near_one(self, name):
        o = ORACLES[name]
        r = growth_ratio(o.system, o.ic_f, o.ic_g, 100_000)
        assert 0.8 <= r <= 1.2

    def test_ratio_requires_life(self):
        with pytest.raises(ValueError):
            growth_ratio(GolombSystemSpec(0, 0, 0, 1), [0], [50], 1_000)
