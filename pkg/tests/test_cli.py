"""End-to-end command line checks: round trips, exit codes, determinism."""

import json

import numpy as np
import pytest

from diffspec import cli
from diffspec.delone import PointSet1D
from diffspec.modelset import silver_mean_chain


def run(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestGen:
    def test_window_file_round_trip(self, capsys, tmp_path):
        path = tmp_path / "tm.txt"
        code, _, _ = run(capsys, ["gen", "--rule", "thue-morse", "--len", "64", "--out", str(path)])
        assert code == 0
        text = path.read_text()
        assert text.startswith("window lo ")

        # correlations computed from the file match the in-process source
        csv_file = tmp_path / "from_file.csv"
        csv_rule = tmp_path / "from_rule.csv"
        args_tail = ["--weights", "a=1,b=-1", "--lags", "8"]
        assert cli.main(["autocorr", "--in", str(path), "--out", str(csv_file)] + args_tail) == 0
        assert (
            cli.main(
                ["autocorr", "--rule", "thue-morse", "--len", "64", "--out", str(csv_rule)]
                + args_tail
            )
            == 0
        )
        assert csv_file.read_bytes() == csv_rule.read_bytes()

    def test_pointset_file_round_trip(self, capsys, tmp_path):
        path = tmp_path / "chain.txt"
        code, _, _ = run(
            capsys, ["gen", "--silver-mean", "--points", "500", "--out", str(path)]
        )
        assert code == 0
        ps = PointSet1D.parse(path.read_text())
        np.testing.assert_allclose(ps.coords, silver_mean_chain(500).coords, rtol=1e-12)


class TestAutocorr:
    def test_lag_one_value(self, capsys):
        code, out, _ = run(
            capsys,
            ["autocorr", "--rule", "thue-morse", "--weights", "a=1,b=-1",
             "--len", "8192", "--lags", "2"],
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "lag_or_diff,re,im,n_used"
        # lags -2..2 plus the header
        assert len(lines) == 6
        lag1 = next(ln for ln in lines[1:] if ln.startswith("1,")).split(",")
        assert float(lag1[1]) == pytest.approx(-1.0 / 3.0, abs=1e-3)
        assert float(lag1[2]) == 0.0

    def test_too_many_lags_is_usage_error(self, capsys):
        code, _, err = run(
            capsys, ["autocorr", "--rule", "thue-morse", "--len", "32", "--lags", "100000"]
        )
        assert code == 2
        assert err.startswith("error:")


class TestDiffract:
    ARGS = [
        "diffract", "--rule", "period-doubling", "--weights", "a=1,b=-1",
        "--len", "2048", "--dyadic", "2", "--rel-tol", "0.1",
    ]

    def test_json_shape_and_known_atoms(self, capsys):
        code, out, _ = run(capsys, self.ARGS)
        assert code == 0
        data = json.loads(out)
        sched = data["schedule"]
        assert len(sched) == 4
        assert sched == sorted(sched)
        assert sched[-1] >= 2 * 2048
        ks = {a["k"] for a in data["atoms"]}
        assert 0.0 in ks and 0.5 in ks
        for atom in data["atoms"]:
            assert atom["stability"] <= 0.1
            assert atom["intensity"] > 0

    def test_byte_identical_reruns(self, tmp_path):
        p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
        assert cli.main(self.ARGS + ["--out", str(p1)]) == 0
        assert cli.main(self.ARGS + ["--out", str(p2), "--threads", "2"]) == 0
        assert p1.read_bytes() == p2.read_bytes()

    def test_exactly_one_candidate_source(self, capsys):
        base = ["diffract", "--rule", "thue-morse", "--len", "256"]
        code, _, err = run(capsys, base + ["--dyadic", "2", "--sobol", "8"])
        assert code == 2 and "exactly one" in err
        code, _, err = run(capsys, base)
        assert code == 2 and "exactly one" in err


class TestFactorAndFreq:
    def test_factor_reports_equivariance(self, capsys):
        code, out, _ = run(
            capsys,
            ["factor", "--rule", "thue-morse", "--len", "256", "--g", "xor", "--shifts", "8"],
        )
        assert code == 0
        assert "equivariance ok shifts 8" in out

    def test_letter_frequencies_with_pf_column(self, capsys):
        code, out, _ = run(
            capsys, ["freq", "--rule", "fibonacci", "--len", "4096", "--maxlen", "1"]
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "word,frequency,pf_frequency"
        row_a = next(ln for ln in lines[1:] if ln.startswith("a,")).split(",")
        assert float(row_a[1]) == pytest.approx(0.618034, abs=1e-3)
        assert float(row_a[2]) == pytest.approx(0.618034, abs=1e-6)

    def test_cluster_frequencies_sum_to_one(self, capsys):
        code, out, _ = run(
            capsys, ["freq", "--silver-mean", "--points", "400", "--k-radius", "1.1"]
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "offsets,count,absolute,relative"
        assert len(lines) == 4
        total = sum(float(ln.split(",")[-1]) for ln in lines[1:])
        assert total == pytest.approx(1.0, abs=1e-9)


class TestVerifyAndModelset:
    def test_dual_route_suite_passes(self, capsys):
        code, out, _ = run(capsys, ["verify", "dual-route", "--len", "2048", "--lags", "8"])
        assert code == 0
        assert "suite dual-route: PASS" in out

    def test_k_evaluation_lines(self, capsys):
        code, out, _ = run(capsys, ["modelset", "--points", "2000", "--k", "1,1"])
        assert code == 0
        assert out.startswith("k ") and "extinct false" in out
        code, out, _ = run(capsys, ["modelset", "--points", "2000", "--k", "2,0"])
        assert code == 0
        assert "extinct true" in out

    def test_inflated_chain_file(self, capsys, tmp_path):
        path = tmp_path / "inflated.txt"
        code, _, _ = run(
            capsys, ["modelset", "--points", "1000", "--inflate", "--out", str(path)]
        )
        assert code == 0
        ps = PointSet1D.parse(path.read_text())
        assert len(ps) > 100
        assert min(ps.distinct_gaps()) == pytest.approx(1 + np.sqrt(2.0), rel=1e-9)


class TestConfigAndErrors:
    def test_config_file_overrides_flags(self, capsys, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("rule=fibonacci\nlen=2048\n")
        code, out, _ = run(
            capsys,
            ["freq", "--rule", "thue-morse", "--len", "65536", "--maxlen", "1",
             "--config", str(cfg)],
        )
        assert code == 0
        row_a = next(ln for ln in out.splitlines() if ln.startswith("a,")).split(",")
        assert float(row_a[1]) == pytest.approx(0.618034, abs=2e-3)

    def test_unknown_config_key(self, capsys, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("no_such_option=1\n")
        code, _, err = run(
            capsys, ["freq", "--rule", "fibonacci", "--len", "256", "--config", str(cfg)]
        )
        assert code == 2
        assert err.startswith("error:")

    def test_unknown_rule_lists_builtins(self, capsys):
        code, _, err = run(capsys, ["gen", "--rule", "nope"])
        assert code == 2
        assert "unknown rule" in err and "fibonacci" in err

    def test_missing_source(self, capsys):
        code, _, err = run(capsys, ["gen"])
        assert code == 2
        assert "no source" in err
