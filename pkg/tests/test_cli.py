"""CLI contract: flags, CSV outputs, exit codes, determinism."""

import numpy as np
import pytest

from plausets import dataio
from plausets.cli import main
from plausets.errors import DomainError


class TestInterval:
    def test_spec_example(self, capsys):
        """The documented power-law call emits the exact one-line CSV."""
        code = main(["interval", "--model", "powerlaw", "--n", "2",
                     "--t", "1", "--alpha", "0.1"])
        assert code == 0
        assert capsys.readouterr().out == "0.051293,2.995732,0.1\n"

    def test_missing_required_flag_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["interval", "--t", "1"])
        assert exc.value.code == 2
        assert "usage" in capsys.readouterr().err

    def test_synthetic_requires_theta(self, capsys):
        code = main(["interval", "--model", "powerlaw", "--n", "5"])
        assert code == 2
        assert "theta" in capsys.readouterr().err

    def test_expreg_interval_runs(self, capsys):
        code = main(["interval", "--model", "expreg", "--n", "5",
                     "--theta", "1", "--seed", "3", "--mc-size", "1000"])
        assert code == 0
        lo, hi, alpha = capsys.readouterr().out.strip().split(",")
        assert float(lo) < float(hi)
        assert alpha == "0.05"

    def test_conflicting_sources_rejected(self, capsys):
        code = main(["interval", "--model", "powerlaw", "--n", "3",
                     "--t", "1", "--data", "nope.csv"])
        assert code == 2


class TestPlCurve:
    def test_byte_identical_reruns(self, tmp_path, capsys):
        args = ["pl-curve", "--model", "powerlaw", "--n", "8", "--theta", "1.5",
                "--alpha", "0.1", "--seed", "4"]
        f1, f2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(f1)]) == 0
        out1 = capsys.readouterr().out
        assert main(args + ["--out", str(f2)]) == 0
        out2 = capsys.readouterr().out
        assert f1.read_bytes() == f2.read_bytes()
        assert out1 == out2

    def test_curve_peaks_near_one(self, tmp_path):
        """Some theta on the grid reaches the contour maximum."""
        out = tmp_path / "c.csv"
        main(["pl-curve", "--model", "powerlaw", "--n", "10", "--theta", "2",
              "--seed", "5", "--alpha", "0.05", "--out", str(out)])
        rows = [line for line in out.read_text().splitlines()
                if not line.startswith("#") and line != "theta,pl"]
        pls = np.array([float(r.split(",")[1]) for r in rows])
        assert pls.max() > 0.99

    def test_crossings_match_interval_command(self, tmp_path, capsys):
        main(["pl-curve", "--model", "powerlaw", "--n", "6", "--theta", "1",
              "--alpha", "0.1", "--seed", "11", "--out", str(tmp_path / "c.csv")])
        crossings = capsys.readouterr().out.splitlines()[0]
        main(["interval", "--model", "powerlaw", "--n", "6", "--theta", "1",
              "--alpha", "0.1", "--seed", "11"])
        line = capsys.readouterr().out.strip()
        assert crossings == f"alpha_crossings,{line}"

    def test_expreg_prints_wald(self, tmp_path, capsys):
        main(["pl-curve", "--model", "expreg", "--n", "5", "--theta", "1",
              "--seed", "3", "--mc-size", "1000",
              "--out", str(tmp_path / "e.csv")])
        out = capsys.readouterr().out
        assert "alpha_crossings," in out
        assert "wald_endpoints," in out


class TestRegion2d:
    def test_lognormal_grid_csv(self, tmp_path, capsys):
        out = tmp_path / "r.csv"
        code = main(["region2d", "--model", "lognormal", "--n", "25",
                     "--mu", "0", "--sigma2", "1", "--alpha", "0.1",
                     "--seed", "9", "--out", str(out)])
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "mu,sigma2,pl,inside"
        assert len(lines) > 32 * 32
        assert capsys.readouterr().out.startswith("region_area,")

    def test_locscale_runs(self, tmp_path):
        out = tmp_path / "ls.csv"
        code = main(["region2d", "--model", "locscale", "--n", "20",
                     "--mu", "0", "--sigma2", "1", "--alpha", "0.1",
                     "--seed", "2", "--out", str(out)])
        assert code == 0
        assert out.read_text().startswith("mu,sigma2,pl,inside\n")

    def test_explicit_grid_must_contain_level_set(self, tmp_path, capsys):
        code = main(["region2d", "--model", "lognormal", "--n", "25",
                     "--alpha", "0.1", "--seed", "9",
                     "--grid=-0.05:0.05:40,0.9:1.1:40",
                     "--out", str(tmp_path / "r.csv")])
        assert code == 2
        assert "expand" in capsys.readouterr().err


class TestCoverageCmd:
    def test_csv_to_stdout(self, capsys):
        code = main(["coverage", "--model", "lognormal", "--n", "25",
                     "--alpha", "0.1", "--reps", "200", "--seed", "5",
                     "--method", "plausibility,mle_ellipse"])
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "method,alpha,reps,estimate,stderr,seed"
        assert lines[1].startswith("plausibility,0.1,200,")
        assert lines[2].startswith("mle_ellipse,0.1,200,")

    def test_file_output_plus_table(self, tmp_path, capsys):
        out = tmp_path / "cov.csv"
        code = main(["coverage", "--model", "powerlaw", "--n", "5",
                     "--theta", "2", "--alpha", "0.1", "--reps", "150",
                     "--seed", "5", "--out", str(out)])
        assert code == 0
        assert out.read_text().startswith("method,alpha,reps")
        assert "coverage" in capsys.readouterr().out

    def test_unknown_method_exits_2(self, capsys):
        code = main(["coverage", "--model", "powerlaw", "--n", "5",
                     "--theta", "2", "--reps", "150", "--method", "wald"])
        assert code == 2


class TestValidityCmd:
    def test_default_passes(self, capsys):
        code = main(["validity", "--set", "default", "--reps", "20000",
                     "--seed", "1"])
        assert code == 0
        out = capsys.readouterr().out
        assert "pass,1" in out

    def test_shrunken_fails(self, capsys):
        main(["validity", "--set", "shrunken", "--reps", "20000", "--seed", "1"])
        assert "pass,0" in capsys.readouterr().out


class TestSeedFallback:
    def test_env_seed_used(self, tmp_path, capsys, monkeypatch):
        args = ["pl-curve", "--model", "powerlaw", "--n", "6", "--theta", "1",
                "--alpha", "0.1"]
        monkeypatch.setenv("PLAUSETS_SEED", "21")
        main(args + ["--out", str(tmp_path / "env.csv")])
        capsys.readouterr()
        monkeypatch.delenv("PLAUSETS_SEED")
        main(args + ["--seed", "21", "--out", str(tmp_path / "flag.csv")])
        assert (tmp_path / "env.csv").read_bytes() == \
            (tmp_path / "flag.csv").read_bytes()

    def test_bad_env_seed_exits_2(self, capsys, monkeypatch):
        monkeypatch.setenv("PLAUSETS_SEED", "not-a-number")
        code = main(["interval", "--model", "powerlaw", "--n", "3",
                     "--theta", "1"])
        assert code == 2


class TestDataio:
    def test_powerlaw_roundtrip(self, tmp_path, capsys):
        path = tmp_path / "times.csv"
        path.write_text("time\n1.0\n2.5\n4.0\n")
        times = dataio.read_powerlaw_csv(path)
        np.testing.assert_array_equal(times, [1.0, 2.5, 4.0])
        code = main(["interval", "--model", "powerlaw", "--data", str(path),
                     "--alpha", "0.1"])
        assert code == 0
        assert capsys.readouterr().out.count(",") == 2

    def test_expreg_columns(self, tmp_path):
        path = tmp_path / "xy.csv"
        path.write_text("x,y\n1,2.0\n2,3.5\n")
        x, y = dataio.read_expreg_csv(path)
        np.testing.assert_array_equal(x, [1.0, 2.0])
        np.testing.assert_array_equal(y, [2.0, 3.5])

    def test_expreg_interval_from_file(self, tmp_path, capsys):
        path = tmp_path / "xy.csv"
        rows = "\n".join(f"{i},{np.exp(1.0 * i) * v}" for i, v in
                         enumerate([0.8, 1.3, 0.9, 1.1, 1.0], start=1))
        path.write_text("x,y\n" + rows + "\n")
        code = main(["interval", "--model", "expreg", "--data", str(path),
                     "--alpha", "0.1", "--seed", "2", "--mc-size", "1000"])
        assert code == 0
        lo, hi, _ = capsys.readouterr().out.strip().split(",")
        assert float(lo) < 1.0 < float(hi)

    def test_malformed_row_reports_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("time\n1.0\noops\n")
        with pytest.raises(DomainError, match="line 3"):
            dataio.read_powerlaw_csv(path)

    def test_wrong_header_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("wrong\n1.0\n")
        with pytest.raises(DomainError, match="line 1"):
            dataio.read_y_csv(path)

    def test_wrong_column_count_reports_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,y\n1,2\n3\n")
        with pytest.raises(DomainError, match="line 3"):
            dataio.read_expreg_csv(path)

    def test_missing_file_exits_2(self, capsys):
        code = main(["interval", "--model", "powerlaw",
                     "--data", "/nonexistent/file.csv", "--alpha", "0.1"])
        assert code == 2
