"""Random-set contours, the plausibility identity, validity diagnostics."""

import math

import numpy as np
import pytest

from plausets import imcore as im
from plausets import models as md
from plausets import numerics as nm
from plausets.errors import DomainError


class TestContourDefault:
    def test_pinned_values(self):
        assert im.contour_default(0.5) == 1.0
        assert im.contour_default(0.0) == 0.0
        assert im.contour_default(1.0) == 0.0
        assert im.contour_default(0.25) == 0.5

    def test_range_and_peak(self):
        u = np.linspace(0.0, 1.0, 101)
        f = im.contour_default(u)
        assert f.min() >= 0.0 and f.max() <= 1.0
        assert f[50] == 1.0

    def test_domain(self):
        with pytest.raises(DomainError):
            im.contour_default(-0.1)
        with pytest.raises(DomainError):
            im.contour_default(1.1)


class TestContourBox:
    def test_pinned_values(self):
        assert im.contour_box(0.5, 0.5) == 1.0
        assert im.contour_box(0.0, 0.7) == 0.0

    def test_monte_carlo_brute_force(self):
        """Closed form equals the catch probability, 1e6 draws, 3-sigma."""
        rng = np.random.default_rng(123)
        draws = rng.random((1_000_000, 2))
        m_draws = np.abs(draws - 0.5).max(axis=1)
        for u1, u2 in [(0.25, 0.5), (0.1, 0.8), (0.5, 0.62)]:
            m = max(abs(u1 - 0.5), abs(u2 - 0.5))
            p_mc = float(np.mean(m_draws >= m))
            sigma = math.sqrt(p_mc * (1.0 - p_mc) / 1e6)
            assert abs(im.contour_box(u1, u2) - p_mc) < 3.0 * sigma + 1e-9

    def test_domain(self):
        with pytest.raises(DomainError):
            im.contour_box(1.2, 0.5)


class TestContourH:
    def test_recovers_default(self):
        """h(u) = |u - 1/2| reproduces the default contour within MC error."""
        prs = im.default_random_set()
        state = nm.derive_stream(1, 0)
        mc = 40_000
        tol = 3.0 / (2.0 * math.sqrt(mc))
        for u in (0.1, 0.33, 0.5, 0.77):
            est = im.contour_h(u, lambda v: abs(v - 0.5), prs.aux_sampler(), mc, state)
            assert abs(est - im.contour_default(u)) <= tol

    def test_recovers_box(self):
        sampler = im.box_random_set().aux_sampler()
        state = nm.derive_stream(2, 0)
        mc = 40_000
        tol = 3.0 / (2.0 * math.sqrt(mc))

        def h(u):
            return max(abs(u[0] - 0.5), abs(u[1] - 0.5))

        for u1, u2 in [(0.3, 0.6), (0.5, 0.5), (0.15, 0.9)]:
            est = im.contour_h(np.array([u1, u2]), h, sampler, mc, state)
            assert abs(est - im.contour_box(u1, u2)) <= tol

    def test_shift_invariance(self):
        """Adding a constant to h cannot change the ordering probabilities."""
        sampler = im.default_random_set().aux_sampler()
        state = nm.derive_stream(3, 0)
        a = im.contour_h(0.3, lambda v: abs(v - 0.5), sampler, 5000, state)
        b = im.contour_h(0.3, lambda v: abs(v - 0.5) + 17.0, sampler, 5000, state)
        assert a == b

    def test_rejects_bad_mc_size(self):
        with pytest.raises(DomainError):
            im.contour_h(0.3, abs, im.default_random_set().aux_sampler(), 0,
                         nm.derive_stream(0, 0))


class TestNestedness:
    """Realizations are totally ordered by inclusion under the scalar index."""

    @staticmethod
    def _member(kind, u, m):
        if kind == "box2d":
            return max(abs(u[0] - 0.5), abs(u[1] - 0.5)) <= m
        return abs(u - 0.5) <= m

    @pytest.mark.parametrize("kind,dim", [("default1d", 1), ("box2d", 2),
                                          ("shrunken1d", 1)])
    def test_membership_monotone_in_index(self, kind, dim):
        rng = np.random.default_rng(17)
        for _ in range(500):
            m1, m2 = np.sort(rng.random(2) * 0.5)
            u = rng.random(dim) if dim == 2 else float(rng.random())
            if self._member(kind, u, m1):
                assert self._member(kind, u, m2)


class TestPlausibilityPoint:
    def test_gamma_median_gives_one(self):
        n = 6
        assoc = md.powerlaw_association(n)
        t = 2.3
        theta_star = nm.gamma_quantile(0.5, n - 1, 1.0) / t
        pl = im.plausibility_point(assoc, im.default_random_set(), t, theta_star)
        assert abs(pl - 1.0) < 1e-12

    def test_n2_closed_form(self):
        """Shape-1 gamma: pl = 1 - |1 - 2 exp(-theta t)|."""
        assoc = md.powerlaw_association(2)
        prs = im.default_random_set()
        for t, theta in [(1.0, 0.3), (2.0, 1.7), (0.5, 0.9)]:
            want = 1.0 - abs(1.0 - 2.0 * math.exp(-theta * t))
            got = im.plausibility_point(assoc, prs, t, theta)
            assert abs(got - want) < 1e-12

    def test_lognormal_center_gives_one(self):
        n = 12
        assoc = md.lognormal_association(n)
        stats_t1 = 0.4
        t2 = 7.0
        sigma2 = t2 / nm.chisq_quantile(0.5, n - 1)
        pl = im.plausibility_point(
            assoc, im.box_random_set(), (stats_t1, t2), (stats_t1, sigma2)
        )
        assert abs(pl - 1.0) < 1e-12

    def test_identity_against_membership_simulation(self):
        """pl equals the simulated catch frequency of the propagated set."""
        n = 4
        assoc = md.powerlaw_association(n)
        t = 1.9
        state = nm.derive_stream(8, 0)
        mc = 40_000
        tol = 3.0 / (2.0 * math.sqrt(mc))
        sampler = im.default_random_set().aux_sampler()
        for theta in (0.7, 1.5, 3.0):
            u_star = assoc.inverse(t, theta)
            est = im.contour_h(u_star, lambda v: abs(v - 0.5), sampler, mc, state)
            want = im.plausibility_point(assoc, im.default_random_set(), t, theta)
            assert abs(est - want) <= tol

    def test_inverse_domain_error(self):
        assoc = md.lognormal_association(5)
        with pytest.raises(DomainError):
            im.plausibility_point(assoc, im.box_random_set(), (0.0, 1.0), (0.0, -1.0))


class TestPlausibilitySet:
    def _curve(self):
        thetas = np.linspace(0.1, 5.0, 200)
        pls = md.powerlaw_pl_arr(2.0, thetas, 5)
        return im.PlausibilityCurve(thetas, pls, {"model": "powerlaw"})

    def test_whole_domain_is_max(self):
        curve = self._curve()
        full = im.plausibility_set(curve, (0.1, 5.0))
        assert full == curve.pls.max()

    def test_singleton_reduces_to_point(self):
        curve = self._curve()
        theta = curve.thetas[37]
        assert im.plausibility_set(curve, float(theta)) == curve.pls[37]

    def test_monotone_under_nesting(self):
        curve = self._curve()
        rng = np.random.default_rng(5)
        for _ in range(100):
            a, b, c, d = np.sort(rng.uniform(0.1, 5.0, size=4))
            inner = im.plausibility_set(curve, (b, c))
            outer = im.plausibility_set(curve, (a, d))
            assert inner <= outer

    def test_callable_interval_uses_bracketed_max(self):
        pl = lambda th: md.powerlaw_pl(2.0, th, 5)
        val = im.plausibility_set(pl, (0.1, 8.0))
        assert abs(val - 1.0) < 1e-9

    def test_empty_region_rejected(self):
        with pytest.raises(DomainError):
            im.plausibility_set(self._curve(), np.array([]))


class TestValidityDiagnostic:
    @pytest.mark.parametrize("seed", [1, 2, 3])
    def test_default_passes(self, seed):
        """f(U) is exactly uniform for the default set."""
        rep = im.validity_diagnostic(im.default_random_set(), 100_000,
                                     nm.derive_stream(seed, 0))
        assert rep.passed and rep.passed_two_sided

    def test_box_passes(self):
        rep = im.validity_diagnostic(im.box_random_set(), 100_000,
                                     nm.derive_stream(4, 0))
        assert rep.passed and rep.passed_two_sided

    def test_generalized_h_exact(self):
        """One-sided set S = {u': u' <= U} has contour 1 - u, exactly uniform."""
        prs = im.h_random_set(h=lambda u: u, dim=1,
                              closed_form=lambda u: 1.0 - np.asarray(u))
        rep = im.validity_diagnostic(prs, 100_000, nm.derive_stream(6, 0))
        assert rep.passed and rep.passed_two_sided

    def test_shrunken_fails(self):
        """The squared contour is stochastically smaller than uniform."""
        rep = im.validity_diagnostic(im.shrunken_random_set(), 100_000,
                                     nm.derive_stream(5, 0))
        assert not rep.passed
        # the empirical CDF of f(U) sits near sqrt(x), so D+ is near 1/4
        assert rep.ks_plus > 0.2

    def test_requires_enough_draws(self):
        with pytest.raises(DomainError):
            im.validity_diagnostic(im.default_random_set(), 10,
                                   nm.derive_stream(0, 0))


class TestFixedSRegion:
    def test_matches_powerlaw_closed_form(self):
        """Smallest-S region equals the gamma-quantile interval."""
        rng = np.random.default_rng(21)
        for _ in range(20):
            n = int(rng.integers(2, 30))
            t = float(rng.uniform(0.3, 10.0))
            alpha = float(rng.uniform(0.02, 0.4))
            got = im.fixed_s_region(md.powerlaw_association(n), t, alpha)
            want = md.powerlaw_interval(t, n, alpha)
            assert abs(got.lo - want.lo) < 1e-8 * max(1.0, want.lo)
            assert abs(got.hi - want.hi) < 1e-8 * max(1.0, want.hi)
            assert not got.open and want.open

    def test_alpha_near_one_pinches(self):
        """The region degenerates toward the CDF median point."""
        n = 5
        assoc = md.powerlaw_association(n)
        t = 2.0
        region = im.fixed_s_region(assoc, t, 0.999)
        center = nm.gamma_quantile(0.5, n - 1, 1.0) / t
        assert region.width < 0.01 * center
        assert region.contains(center)


class TestPlausibilityCurveCsv:
    def test_roundtrip(self, tmp_path):
        thetas = np.linspace(0.5, 2.0, 50)
        pls = md.powerlaw_pl_arr(3.0, thetas, 8)
        curve = im.PlausibilityCurve(
            thetas, pls,
            {"model": "powerlaw", "t": 3.0, "n": 8, "alpha": 0.1, "seed": 7},
        )
        path = tmp_path / "curve.csv"
        curve.write_csv(path)
        text = path.read_text()
        assert text.startswith("# model=powerlaw\n")
        assert "theta,pl\n" in text
        back = im.PlausibilityCurve.read_csv(path)
        np.testing.assert_allclose(back.thetas, thetas, atol=1e-10)
        np.testing.assert_allclose(back.pls, pls, atol=1e-10)
        assert back.meta["model"] == "powerlaw"

    def test_invariants_enforced(self):
        with pytest.raises(DomainError):
            im.PlausibilityCurve(np.array([1.0, 1.0]), np.array([0.5, 0.5]))
        with pytest.raises(DomainError):
            im.PlausibilityCurve(np.array([1.0, 2.0]), np.array([0.5, 1.5]))
