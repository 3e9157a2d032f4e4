import json
import shutil
import subprocess

import numpy as np
import pytest

from metafib.cli import main
from metafib.generations import alpha_table, generation_table
from metafib.presets import get_preset
from metafib.recurrence import eval_single

from goldens import (V3144_COMPUTED_LEN, V3144_DEATH_INDEX, V3144_LAST_VALUE,
                     V3144_OFFENDING_ARG, CATALOG)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestEval:
    def test_bfile_example(self, capsys):
        code, out, _ = run(capsys, "eval", "--preset", "V", "--limit", "4",
                           "--format", "bfile")
        assert code == 0
        assert out == "1 1\n2 1\n3 1\n4 1\n"

    def test_bfile_is_default_format(self, capsys):
        code, out, _ = run(capsys, "eval", "--preset", "V", "--limit", "4")
        assert code == 0
        assert out == "1 1\n2 1\n3 1\n4 1\n"

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "eval", "--preset", "V", "--limit", "5",
                           "--format", "csv")
        assert code == 0
        assert out == "n,value\n1,1\n2,1\n3,1\n4,1\n5,2\n"

    def test_json(self, capsys):
        code, out, _ = run(capsys, "eval", "--preset", "Q", "--limit", "6",
                           "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["status"] == "alive"
        assert data["computed_len"] == 6
        assert data["death_index"] is None
        assert data["values"] == [1, 1, 2, 3, 3, 4]

    def test_ic_override(self, capsys):
        code, out, _ = run(capsys, "eval", "--preset", "V",
                           "--ic", "3,1,4,4", "--limit", "5")
        assert code == 0
        assert out.splitlines()[4] == "5 4"  # a(5) = a(1) + a(1) ... != preset V

    def test_spec_file(self, capsys, tmp_path):
        spec = tmp_path / "v.json"
        spec.write_text('{"constant": 0, "terms": [[0, 1], [0, 4]]}')
        code, out, _ = run(capsys, "eval", "--spec", str(spec),
                           "--ic", "1,1,1,1", "--limit", "4")
        assert code == 0
        assert out == "1 1\n2 1\n3 1\n4 1\n"

    def test_compact32_matches_wide(self, capsys):
        _, wide, _ = run(capsys, "eval", "--preset", "Vc", "--limit", "500")
        code, narrow, _ = run(capsys, "eval", "--preset", "Vc", "--limit", "500",
                              "--compact32")
        assert code == 0 and narrow == wide

    def test_death_noted_on_stderr_but_exit_zero(self, capsys, tmp_path):
        out_path = tmp_path / "seq.txt"
        code, out, err = run(capsys, "eval", "--preset", "V3144",
                             "--limit", "500000", "--out", str(out_path))
        assert code == 0
        assert out == ""
        assert "dead after 474767 terms" in err
        lines = out_path.read_text().splitlines()
        assert len(lines) == V3144_COMPUTED_LEN
        assert lines[-1] == f"{V3144_COMPUTED_LEN} {V3144_LAST_VALUE}"

    def test_out_file_writes_instead_of_stdout(self, capsys, tmp_path):
        path = tmp_path / "b.txt"
        code, out, _ = run(capsys, "eval", "--preset", "V", "--limit", "4",
                           "--out", str(path))
        assert code == 0 and out == ""
        assert path.read_text() == "1 1\n2 1\n3 1\n4 1\n"


class TestLifespan:
    def test_dead_preset_reports_death_and_exits_zero(self, capsys):
        code, out, _ = run(capsys, "lifespan", "--preset", "V3144")
        assert code == 0
        assert out.startswith(f"dead after {V3144_DEATH_INDEX} terms")
        assert f"last defined index {V3144_COMPUTED_LEN}, value {V3144_LAST_VALUE}" in out
        assert f"argument {V3144_OFFENDING_ARG} out of range" in out

    def test_alive_reports_extent(self, capsys):
        code, out, _ = run(capsys, "lifespan", "--preset", "V", "--cap", "1000")
        assert code == 0
        assert out.startswith("alive through 1000 terms (last value ")

    def test_mmap_backend_agrees(self, capsys, tmp_path):
        path = tmp_path / "buf.npy"
        code, out, _ = run(capsys, "lifespan", "--preset", "V3144",
                           "--cap", "500000", "--mmap", str(path))
        assert code == 0
        assert out.startswith(f"dead after {V3144_DEATH_INDEX} terms")
        assert path.exists()
        arr = np.load(path, mmap_mode="r")
        assert arr.dtype == np.int64
        assert int(arr[V3144_COMPUTED_LEN - 1]) == V3144_LAST_VALUE

    def test_mmap_compact32(self, capsys, tmp_path):
        path = tmp_path / "buf32.npy"
        code, out, _ = run(capsys, "lifespan", "--preset", "V3144",
                           "--cap", "500000", "--compact32", "--mmap", str(path))
        assert code == 0
        assert out.startswith(f"dead after {V3144_DEATH_INDEX} terms")
        assert np.load(path, mmap_mode="r").dtype == np.uint32


class TestTables:
    def test_generations_csv(self, capsys):
        code, out, _ = run(capsys, "generations", "--preset", "Vc",
                           "--kmax", "5", "--cap", "1000")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "k,p_spiritual,p,r"
        assert lines[1] == "1,1,1,1"
        assert lines[2] == "2,4,4,4"
        assert lines[3] == "3,14,17,18"
        assert lines[4] == "4,34,37,45"
        assert lines[5] == "5,75,78,111"

    def test_generations_json(self, capsys):
        code, out, _ = run(capsys, "generations", "--preset", "Vc",
                           "--kmax", "3", "--cap", "1000", "--format", "json")
        rows = json.loads(out)
        assert code == 0
        assert rows[2] == {"k": 3, "p_spiritual": 14, "p": 17, "r": 18}

    def test_alpha_rows_match_library(self, capsys):
        code, out, _ = run(capsys, "alpha", "--preset", "Vc",
                           "--kmin", "5", "--kmax", "8", "--cap", "2000")
        assert code == 0
        preset = get_preset("Vc")
        buf, _ = eval_single(preset.spec, preset.ic, 2000)
        stats = alpha_table(buf, generation_table(buf, 8))
        want = ["k,count,mean,m,alpha"]
        for st in stats:
            if st.k >= 5:
                want.append(f"{st.k},{st.count},{st.mean:.4f},{st.spread:.6f},"
                            f"{st.alpha:.4f}")
        assert out.splitlines() == want

    def test_alpha_kmin_validation(self, capsys):
        code, _, err = run(capsys, "alpha", "--preset", "Vc",
                           "--kmin", "9", "--kmax", "8", "--cap", "2000")
        assert code == 2
        assert "kmin" in err

    def test_plot_data_rows(self, capsys):
        code, out, _ = run(capsys, "plot-data", "--preset", "Vc", "--lo", "1",
                           "--hi", "20", "--kmax", "3", "--cap", "1000")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "n,s,region"
        assert lines[1] == "1,2.5,noisy"
        assert lines[4] == "4,2.0,noisy"
        assert lines[5] == "5,2.5,slow"
        assert lines[17] == "17,4.5,noisy"
        assert lines[19] == "19,4.5,slow"


class TestOracleCheck:
    def test_fg1_with_closed_forms(self, capsys):
        code, out, _ = run(capsys, "oracle-check", "--system", "fg1",
                           "--limit", "2000", "--closed-form", "500")
        assert code == 0
        assert "matches run-length construction through 2000" in out
        assert "closed forms match through 500" in out
        assert "growth ratio" in out

    def test_closed_form_rejected_for_other_systems(self, capsys):
        code, _, err = run(capsys, "oracle-check", "--system", "fg2",
                           "--limit", "1000", "--closed-form", "100")
        assert code == 2
        assert "closed-form" in err

    @pytest.mark.parametrize("system", ["fg2", "fg12"])
    def test_other_systems_pass(self, capsys, system):
        code, out, _ = run(capsys, "oracle-check", "--system", system,
                           "--limit", "5000")
        assert code == 0
        assert "matches run-length construction" in out


class TestVerifyFamily:
    def test_v1_text(self, capsys):
        code, out, _ = run(capsys, "verify-family", "--fixture", "v1",
                           "--limit", "2000")
        assert code == 0
        assert "result: ok" in out
        assert "pattern matches direct evaluation through 2000" in out

    def test_h2_json(self, capsys):
        code, out, _ = run(capsys, "verify-family", "--fixture", "h2",
                           "--limit", "2000", "--format", "json")
        assert code == 0
        report = json.loads(out)
        assert report["name"] == "h2"
        assert report["alive"] is True
        assert report["prefix_ok"] is True
        assert report["oracle_sequences_ok"] is True
        assert report["mismatch"] is None
        assert report["checked_through"] == 2000

    def test_unknown_fixture_is_usage_error(self, capsys):
        code, _, err = run(capsys, "verify-family", "--fixture", "zzz")
        assert code == 2
        assert "unknown fixture" in err


class TestDetect:
    def test_catalog_preset_json(self, capsys):
        code, out, _ = run(capsys, "detect", "--preset", "t4r2", "--cap", "2000")
        assert code == 0
        data = json.loads(out)
        pattern, signature = CATALOG["t4r2"]
        assert data["pattern"] == pattern
        assert tuple(data["signature"]) == signature
        assert data["modulus"] == 5
        assert len(data["classes"]) == 5
        assert data["window"][1] == 2000

    def test_csv_format(self, capsys):
        code, out, _ = run(capsys, "detect", "--preset", "t5r1", "--cap", "1500",
                           "--format", "csv")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "residue,kind,slope,intercept,congruence"
        assert len(lines) == 6

    def test_death_before_requested_window_fails(self, capsys):
        code, _, err = run(capsys, "detect", "--preset", "V", "--ic", "5,5,5,5",
                           "--lo", "10", "--hi", "100")
        assert code == 1
        assert "died" in err

    def test_window_too_small_is_usage_error(self, capsys):
        code, _, err = run(capsys, "detect", "--preset", "V", "--cap", "30",
                           "--lo", "25", "--hi", "30")
        assert code == 2
        assert "samples" in err


class TestScan:
    def test_slow_dead_and_interleaved_classifications(self, capsys, tmp_path):
        ics = tmp_path / "ics.txt"
        ics.write_text("1,1,1,1\n3,1,4,4\n# comment\n5 4 0 0 0 5 0 5 5 1 5 4\n")
        code, out, _ = run(capsys, "scan", "--preset", "V",
                           "--ic-list", str(ics), "--cap", "600000")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "ic,outcome,lifespan,classification"
        assert lines[1] == "1 1 1 1,Alive,600000,slow"
        assert lines[2] == f"3 1 4 4,Dead,{V3144_DEATH_INDEX},-"
        assert lines[3] == "5 4 0 0 0 5 0 5 5 1 5 4,Alive,600000,period-5 interleaved"
        assert "# histogram 1e5: 1" in lines
        assert "# histogram alive@600000: 2" in lines

    def test_workers_do_not_change_output(self, capsys):
        args = ("scan", "--preset", "V", "--ic-space", "1..3,1..3,1..3,1..3",
                "--cap", "2000")
        code1, out1, _ = run(capsys, *args, "--workers", "1")
        code4, out4, _ = run(capsys, *args, "--workers", "4")
        assert code1 == code4 == 0
        assert out1 == out4
        assert len(out1.splitlines()) >= 82  # header + 81 candidates + histogram

    def test_ic_space_grammar(self, capsys):
        code, out, _ = run(capsys, "scan", "--preset", "V",
                           "--ic-space", "1..2,5,1|3,1", "--cap", "100")
        assert code == 0
        body = [l for l in out.splitlines() if l and not l.startswith(("#", "ic,"))]
        starts = [l.split(",")[0] for l in body]
        assert starts == ["1 5 1 1", "1 5 3 1", "2 5 1 1", "2 5 3 1"]

    def test_duplicate_candidates_deduplicated(self, capsys, tmp_path):
        ics = tmp_path / "dup.txt"
        ics.write_text("1,1,1,1\n1,1,1,1\n")
        code, out, _ = run(capsys, "scan", "--preset", "V",
                           "--ic-list", str(ics), "--cap", "100")
        assert code == 0
        assert sum(1 for l in out.splitlines() if l.startswith("1 1 1 1,")) == 1

    def test_overflow_is_its_own_category(self, capsys, tmp_path):
        spec = tmp_path / "doubling.json"
        spec.write_text('{"terms": [[0, 1], [0, 1]]}')
        ics = tmp_path / "big.txt"
        ics.write_text(f"{(1 << 58) + 1},2\n")
        code, out, _ = run(capsys, "scan", "--spec", str(spec),
                           "--ic-list", str(ics), "--cap", "100")
        assert code == 0
        lines = out.splitlines()
        assert lines[1].endswith(",Overflow,2,overflow")
        assert "# histogram overflow: 1" in lines

    def test_empty_list_yields_header_only(self, capsys, tmp_path):
        ics = tmp_path / "empty.txt"
        ics.write_text("# nothing\n")
        code, out, _ = run(capsys, "scan", "--preset", "V",
                           "--ic-list", str(ics), "--cap", "100")
        assert code == 0
        assert out == "ic,outcome,lifespan,classification\n"

    def test_json_format(self, capsys, tmp_path):
        ics = tmp_path / "one.txt"
        ics.write_text("1,1,1,1\n")
        code, out, _ = run(capsys, "scan", "--preset", "V",
                           "--ic-list", str(ics), "--cap", "500",
                           "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["records"][0] == {"ic": [1, 1, 1, 1], "outcome": "Alive",
                                      "lifespan": 500, "classification": "slow"}
        assert data["histogram"] == {"alive@500": 1}

    def test_requires_exactly_one_candidate_source(self, capsys, tmp_path):
        code, _, err = run(capsys, "scan", "--preset", "V", "--cap", "100")
        assert code == 2
        ics = tmp_path / "ics.txt"
        ics.write_text("1,1\n")
        code, _, err = run(capsys, "scan", "--preset", "V", "--cap", "100",
                           "--ic-space", "1,1", "--ic-list", str(ics))
        assert code == 2
        assert "exactly one" in err

    def test_oversized_space_rejected(self, capsys):
        code, _, err = run(capsys, "scan", "--preset", "V", "--cap", "100",
                           "--ic-space", "1..100,1..100,1..100")
        assert code == 2
        assert "too large" in err


class TestUsageErrors:
    def test_unknown_preset(self, capsys):
        code, _, err = run(capsys, "lifespan", "--preset", "nope")
        assert code == 2
        assert "unknown preset" in err

    def test_missing_source(self, capsys):
        code, _, err = run(capsys, "eval", "--limit", "5")
        assert code == 2
        assert "--preset" in err

    def test_bad_ic_string(self, capsys):
        code, _, err = run(capsys, "eval", "--preset", "V", "--ic", "a,b",
                           "--limit", "4")
        assert code == 2

    def test_missing_required_flag(self, capsys):
        assert run(capsys, "eval", "--preset", "V")[0] == 2

    def test_unknown_subcommand(self, capsys):
        assert run(capsys, "bogus")[0] == 2

    def test_limit_below_ic_length(self, capsys):
        code, _, err = run(capsys, "eval", "--preset", "V", "--limit", "2")
        assert code == 2
        assert "smaller than the initial condition" in err

    def test_missing_spec_file(self, capsys):
        code, _, err = run(capsys, "eval", "--spec", "/does/not/exist.json",
                           "--ic", "1", "--limit", "3")
        assert code == 2
        assert "cannot read spec file" in err

    def test_malformed_spec_file(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("not json at all")
        code, _, err = run(capsys, "eval", "--spec", str(bad), "--ic", "1",
                           "--limit", "3")
        assert code == 2


@pytest.mark.skipif(shutil.which("metafib") is None,
                    reason="console script not on PATH")
def test_installed_entry_point_smoke():
    proc = subprocess.run(["metafib", "eval", "--preset", "V", "--limit", "4"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert proc.stdout == "1 1\n2 1\n3 1\n4 1\n"
