"""Coverage harness: exactness, method agreement, scheduler independence."""

import numpy as np
import pytest

from plausets import coverage as cv
from plausets import models as md
from plausets.errors import ConvergenceError, DomainError


def _spec(**kw):
    base = dict(model="lognormal", method="plausibility", alpha=0.1,
                reps=1000, master_seed=101, n=25)
    base.update(kw)
    return cv.CoverageSpec(**base)


class TestSpecValidation:
    def test_rejects_unknown_method(self):
        with pytest.raises(DomainError):
            _spec(method="bootstrap")

    def test_rejects_method_model_mismatch(self):
        with pytest.raises(DomainError):
            _spec(model="powerlaw", method="wald")

    def test_rejects_small_reps(self):
        with pytest.raises(DomainError):
            _spec(reps=10)

    def test_rejects_bad_alpha(self):
        with pytest.raises(DomainError):
            _spec(alpha=1.1)

    def test_expreg_default_covariates(self):
        spec = _spec(model="expreg", method="wald", n=6)
        np.testing.assert_array_equal(spec.x, np.arange(1.0, 7.0))


class TestRunCoverage:
    def test_whole_space_sanity(self):
        """The trivial whole-space region always covers."""
        report = cv.run_coverage(_spec(method="whole_space", reps=200))
        assert report.estimate == 1.0
        assert report.stderr == 0.0

    def test_exactness_powerlaw(self):
        """|coverage - (1 - alpha)| within 3 stderr for the exact set."""
        report = cv.run_coverage(_spec(model="powerlaw", method="plausibility",
                                       n=5, theta=2.0, alpha=0.1, reps=2000))
        assert abs(report.estimate - 0.9) <= 3.0 * max(report.stderr, 1e-9)

    def test_exactness_lognormal(self):
        report = cv.run_coverage(_spec(reps=2000))
        assert abs(report.estimate - 0.9) <= 3.0 * max(report.stderr, 1e-9)

    def test_fixed_s_agrees_with_plausibility(self):
        """Same region up to its boundary, so the estimates nearly coincide."""
        a = cv.run_coverage(_spec(method="plausibility", reps=1500))
        b = cv.run_coverage(_spec(method="fixed_s", reps=1500))
        tol = 2.0 * max(a.stderr, b.stderr)
        assert abs(a.estimate - b.estimate) <= tol

    def test_fixed_s_agrees_powerlaw(self):
        a = cv.run_coverage(_spec(model="powerlaw", method="plausibility",
                                  n=5, theta=2.0, reps=1500))
        b = cv.run_coverage(_spec(model="powerlaw", method="fixed_s",
                                  n=5, theta=2.0, reps=1500))
        assert abs(a.estimate - b.estimate) <= 2.0 * max(a.stderr, b.stderr)

    def test_scheduler_independence(self):
        """CSV reports are byte-identical for 1 and 3 workers."""
        r1 = cv.run_coverage(_spec(reps=600), workers=1)
        r3 = cv.run_coverage(_spec(reps=600), workers=3)
        assert r1.csv_line() == r3.csv_line()

    def test_scheduler_independence_expreg(self):
        spec = _spec(model="expreg", method="plausibility", n=5, theta=1.0,
                     alpha=0.1, reps=120, mc_size=1000)
        r1 = cv.run_coverage(spec, workers=1)
        r2 = cv.run_coverage(spec, workers=2)
        assert r1.csv_line() == r2.csv_line()

    def test_determinism_in_seed(self):
        r1 = cv.run_coverage(_spec(reps=400, master_seed=7))
        r2 = cv.run_coverage(_spec(reps=400, master_seed=7))
        r3 = cv.run_coverage(_spec(reps=400, master_seed=8))
        assert r1.estimate == r2.estimate
        assert r1.estimate != r3.estimate or r1.csv_line() != r3.csv_line()

    def test_csv_line_format(self):
        report = cv.run_coverage(_spec(reps=200))
        fields = report.csv_line().split(",")
        assert len(fields) == 6
        assert fields[0] == "plausibility"
        assert fields[2] == "200"

    def test_replicate_failure_reports_index(self, monkeypatch):
        """Solver failures surface the replicate index and seed for replay."""

        def boom(*args, **kwargs):
            raise ConvergenceError("bracket not found")

        monkeypatch.setattr(md, "expreg_pivot_table", boom)
        spec = _spec(model="expreg", method="plausibility", n=5,
                     reps=100, mc_size=1000)
        with pytest.raises(ConvergenceError, match=r"replicate 0 \(seed 101"):
            cv.run_coverage(spec)


class TestUniformityCheck:
    def test_powerlaw_exact(self):
        rep = cv.uniformity_check("powerlaw", n=5, reps=50_000, master_seed=2,
                                  theta=2.0)
        assert rep.passed_two_sided

    def test_lognormal_exact(self):
        rep = cv.uniformity_check("lognormal", n=25, reps=50_000, master_seed=2)
        assert rep.passed_two_sided

    def test_shrunken_fails_one_sided(self):
        rep = cv.uniformity_check("powerlaw", n=5, reps=50_000, master_seed=2,
                                  theta=2.0, shrunken=True)
        assert not rep.passed_one_sided
        assert rep.ks_plus > 0.2

    def test_deterministic(self):
        a = cv.uniformity_check("powerlaw", n=4, reps=5000, master_seed=9)
        b = cv.uniformity_check("powerlaw", n=4, reps=5000, master_seed=9)
        assert a == b

    def test_rejects_unknown_model(self):
        with pytest.raises(DomainError):
            cv.uniformity_check("expreg", n=5, reps=5000, master_seed=0)
