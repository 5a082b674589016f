"""Predictive random sets and the plausibility identity.

A consonant random set is represented by its contour function alone: the
families shipped here are nested by construction, so the contour determines
every probability the region constructions need. The central computation is

    pl_t(theta) = contour(inverse(t, theta))

which turns a model association plus a random-set family into a point
plausibility function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError
from .numerics import RngState, rng_uniforms
from .regions import Interval1D, _golden_max

__all__ = [
    "PredictiveRandomSet",
    "Association",
    "PlausibilityCurve",
    "ValidityReport",
    "contour_default",
    "contour_box",
    "contour_h",
    "default_random_set",
    "box_random_set",
    "h_random_set",
    "shrunken_random_set",
    "plausibility_point",
    "plausibility_set",
    "validity_diagnostic",
    "fixed_s_region",
]


def _check_unit(u: np.ndarray | float, name: str) -> np.ndarray:
    arr = np.asarray(u, dtype=np.float64)
    if np.any(arr < 0.0) or np.any(arr > 1.0) or not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must lie in [0, 1]")
    return arr


def contour_default(u):
    """Contour of the default 1-D set: 1 - |2u - 1|."""
    arr = _check_unit(u, "u")
    out = 1.0 - np.abs(2.0 * arr - 1.0)
    return float(out) if np.isscalar(u) or arr.ndim == 0 else out


def contour_box(u1, u2):
    """Contour of the 2-D box set: 1 - max(|2u1-1|, |2u2-1|)**2."""
    a1 = _check_unit(u1, "u1")
    a2 = _check_unit(u2, "u2")
    m = np.maximum(np.abs(2.0 * a1 - 1.0), np.abs(2.0 * a2 - 1.0))
    out = 1.0 - m * m
    scalar = np.isscalar(u1) and np.isscalar(u2)
    return float(out) if scalar else out


def _contour_shrunken(u):
    # deliberately invalid family for diagnostics: square of the default
    arr = _check_unit(u, "u")
    base = 1.0 - np.abs(2.0 * arr - 1.0)
    out = base * base
    return float(out) if np.isscalar(u) or arr.ndim == 0 else out


def _uniform_sampler(dim: int):
    def sampler(state: RngState, n: int):
        u, state = rng_uniforms(state, n * dim)
        return (u if dim == 1 else u.reshape(n, dim)), state

    return sampler


@dataclass(frozen=True)
class PredictiveRandomSet:
    """A nested random-set family given by its contour function.

    ``kind`` is one of ``default1d``, ``box2d``, ``generalized_h`` or the
    diagnostics-only ``shrunken1d`` (nested but deliberately invalid). For
    ``generalized_h``, ``h`` orders the auxiliary space; ``closed_form``,
    when registered, evaluates the contour exactly, otherwise it is
    estimated by Monte Carlo (see ``contour_h``).
    """

    kind: str
    dim: int
    h: Callable | None = None
    closed_form: Callable | None = None
    sampler: Callable | None = None

    def aux_sampler(self):
        return self.sampler if self.sampler is not None else _uniform_sampler(self.dim)

    def contour(self, u, mc_size: int = 0, state: RngState | None = None):
        if self.kind == "default1d":
            return contour_default(u)
        if self.kind == "box2d":
            arr = np.asarray(u, dtype=np.float64)
            if arr.shape[-1] != 2:
                raise DomainError("box2d expects points with two coordinates")
            return contour_box(arr[..., 0], arr[..., 1])
        if self.kind == "shrunken1d":
            return _contour_shrunken(u)
        if self.kind == "generalized_h":
            if self.closed_form is not None:
                return self.closed_form(u)
            if state is None or mc_size <= 0:
                raise DomainError(
                    "generalized_h without a closed form needs mc_size and state"
                )
            return contour_h(u, self.h, self.aux_sampler(), mc_size, state)
        raise DomainError(f"unknown random-set kind {self.kind!r}")


def default_random_set() -> PredictiveRandomSet:
    return PredictiveRandomSet(kind="default1d", dim=1)


def box_random_set() -> PredictiveRandomSet:
    return PredictiveRandomSet(kind="box2d", dim=2)


def shrunken_random_set() -> PredictiveRandomSet:
    """Nested but invalid family; exists to exercise the diagnostics."""
    return PredictiveRandomSet(kind="shrunken1d", dim=1)


def h_random_set(h: Callable, dim: int = 1,
                 closed_form: Callable | None = None,
                 sampler: Callable | None = None) -> PredictiveRandomSet:
    """Family S = {u: h(u) <= h(U)} for continuous h.

    The caller guarantees h is constant only on null sets of the auxiliary
    distribution; that makes the family nested with an exact contour.
    """
    return PredictiveRandomSet(
        kind="generalized_h", dim=dim, h=h, closed_form=closed_form, sampler=sampler
    )


def contour_h(u, h: Callable, sampler: Callable, mc_size: int,
              state: RngState):
    """Monte Carlo contour: the frequency of draws U with h(u) <= h(U).

    Standard error is at most 1 / (2 sqrt(mc_size)).
    """
    if mc_size <= 0:
        raise DomainError("mc_size must be positive")
    draws, _ = sampler(state, mc_size)
    h_draws = np.asarray([h(d) for d in draws], dtype=np.float64)
    hu = h(u)
    return float(np.mean(hu <= h_draws))


# ---------------------------------------------------------------------------
# Associations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Association:
    """Auxiliary-variable representation of a sampling model.

    ``forward(u, theta)`` maps an auxiliary draw to a statistic value;
    ``inverse(t, theta)`` recovers the auxiliary point compatible with the
    observation, defined everywhere on the model's domain (the models here
    impose no parameter constraints, so the solution set is never empty and
    is a single point).
    """

    model_id: str
    theta_dim: int
    aux_dim: int
    forward: Callable
    inverse: Callable
    aux_sampler: Callable | None = None
    theta_support: tuple[float, float] = (-math.inf, math.inf)
    theta_hint: Callable | None = None

    def sampler(self):
        return self.aux_sampler if self.aux_sampler is not None else _uniform_sampler(self.aux_dim)


def plausibility_point(assoc: Association, prs: PredictiveRandomSet,
                       t, theta, mc_size: int = 0,
                       state: RngState | None = None) -> float:
    """pl_t(theta): the contour evaluated at the inverse auxiliary point."""
    try:
        u = assoc.inverse(t, theta)
    except (ArithmeticError, ValueError) as exc:
        raise DomainError(
            f"model {assoc.model_id}: inverse undefined at t={t!r}, "
            f"theta={theta!r} ({exc})"
        ) from exc
    arr = np.asarray(u, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise DomainError(
            f"model {assoc.model_id}: inverse not finite at t={t!r}, theta={theta!r}"
        )
    value = prs.contour(u, mc_size=mc_size, state=state)
    return float(value)


# ---------------------------------------------------------------------------
# Plausibility curves and set plausibility
# ---------------------------------------------------------------------------


@dataclass
class PlausibilityCurve:
    """Tabulated (theta, pl) pairs plus provenance metadata."""

    thetas: np.ndarray
    pls: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.thetas = np.asarray(self.thetas, dtype=np.float64)
        self.pls = np.asarray(self.pls, dtype=np.float64)
        if self.thetas.ndim != 1 or self.thetas.shape != self.pls.shape:
            raise DomainError("curve needs matching 1-D theta and pl arrays")
        if not np.all(np.diff(self.thetas) > 0.0):
            raise DomainError("theta grid must be strictly increasing")
        if np.any(self.pls < 0.0) or np.any(self.pls > 1.0):
            raise DomainError("pl values must lie in [0, 1]")

    _META_KEYS = ("model", "t", "n", "alpha", "seed", "mc_size")

    def write_csv(self, path) -> None:
        with open(path, "w") as fh:
            for key in self._META_KEYS:
                if key in self.meta and self.meta[key] is not None:
                    fh.write(f"# {key}={self.meta[key]}\n")
            fh.write("theta,pl\n")
            for th, pl in zip(self.thetas, self.pls):
                fh.write(f"{th:.12g},{pl:.12g}\n")

    @classmethod
    def read_csv(cls, path) -> "PlausibilityCurve":
        meta: dict = {}
        thetas: list[float] = []
        pls: list[float] = []
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    key, _, value = line[1:].strip().partition("=")
                    meta[key.strip()] = value.strip()
                    continue
                if line == "theta,pl":
                    continue
                a, b = line.split(",")
                thetas.append(float(a))
                pls.append(float(b))
        return cls(np.array(thetas), np.array(pls), meta)


def plausibility_set(source, region) -> float:
    """Consonant set plausibility: the supremum of point plausibility.

    ``source`` is a PlausibilityCurve or a unimodal callable; ``region`` is
    a scalar (singleton), an (lo, hi) interval, or a sequence of theta
    points. Interval queries on a callable use a bracketed maximum search;
    everything else reduces to a grid maximum.
    """
    if isinstance(source, PlausibilityCurve):
        if np.isscalar(region):
            idx = np.searchsorted(source.thetas, region)
            if idx >= source.thetas.size or source.thetas[idx] != region:
                raise DomainError("singleton not on the tabulated grid")
            return float(source.pls[idx])
        if isinstance(region, tuple) and len(region) == 2:
            lo, hi = region
            if not lo < hi:
                raise DomainError("interval must satisfy lo < hi")
            if hi < source.thetas[0] or lo > source.thetas[-1]:
                raise DomainError("interval lies outside the evaluated domain")
            # piecewise-linear reading: interior grid points plus endpoints
            sel = (source.thetas >= lo) & (source.thetas <= hi)
            best = float(source.pls[sel].max()) if sel.any() else -math.inf
            ends = np.interp([lo, hi], source.thetas, source.pls)
            return float(max(best, ends[0], ends[1]))
        points = np.asarray(region, dtype=np.float64)
        if points.size == 0:
            raise DomainError("region must be nonempty")
        vals = np.interp(points, source.thetas, source.pls)
        return float(vals.max())

    if np.isscalar(region):
        return float(source(region))
    if isinstance(region, tuple) and len(region) == 2:
        lo, hi = map(float, region)
        if not lo < hi:
            raise DomainError("interval must satisfy lo < hi")
        _, fmax = _golden_max(source, lo, hi)
        edge = max(source(lo), source(hi))
        return float(max(fmax, edge))
    points = np.asarray(region, dtype=np.float64)
    if points.size == 0:
        raise DomainError("region must be nonempty")
    return float(max(source(p) for p in points))


# ---------------------------------------------------------------------------
# Validity diagnostic
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ValidityReport:
    ks_plus: float
    ks_minus: float
    ks_two_sided: float
    threshold: float
    n: int
    passed: bool
    passed_two_sided: bool


def ks_one_sample_uniform(values: np.ndarray) -> tuple[float, float]:
    """One-sided D+ and D- of a sample against Unif(0, 1)."""
    w = np.sort(np.asarray(values, dtype=np.float64))
    n = w.size
    grid_hi = np.arange(1, n + 1) / n
    grid_lo = np.arange(0, n) / n
    d_plus = float(np.max(grid_hi - w))
    d_minus = float(np.max(w - grid_lo))
    return d_plus, d_minus


def validity_diagnostic(prs: PredictiveRandomSet, n_draws: int,
                        state: RngState,
                        sampler: Callable | None = None,
                        mc_size: int = 0) -> ValidityReport:
    """Empirical check that contour(U) is stochastically >= Unif(0, 1).

    D+ measures how far the empirical CDF of the contour values rises above
    the diagonal; a valid family keeps it inside the Kolmogorov band
    1.63 / sqrt(N). The two-sided statistic is reported as well, since the
    shipped families are exact, not merely valid.
    """
    if n_draws < 1000:
        raise DomainError("need at least 1000 draws for the diagnostic")
    draw = sampler if sampler is not None else prs.aux_sampler()
    u, state = draw(state, n_draws)
    if prs.kind == "generalized_h" and prs.closed_form is None:
        w = np.array([
            prs.contour(ui, mc_size=mc_size, state=state) for ui in u
        ])
    else:
        w = np.asarray(prs.contour(u), dtype=np.float64)
    d_plus, d_minus = ks_one_sample_uniform(w)
    two_sided = max(d_plus, d_minus)
    threshold = 1.63 / math.sqrt(n_draws)
    return ValidityReport(
        ks_plus=d_plus,
        ks_minus=d_minus,
        ks_two_sided=two_sided,
        threshold=threshold,
        n=n_draws,
        passed=d_plus <= threshold,
        passed_two_sided=two_sided <= threshold,
    )


# ---------------------------------------------------------------------------
# Fixed-S confidence region (scalar-CDF associations)
# ---------------------------------------------------------------------------


def _solve_u_level(assoc: Association, t, q: float) -> float:
    """theta with inverse(t, theta) = q, for a monotone scalar inverse."""
    hint = assoc.theta_hint(t) if assoc.theta_hint is not None else 1.0
    lo_sup, hi_sup = assoc.theta_support
    multiplicative = lo_sup == 0.0 and math.isinf(hi_sup)

    def u_of(theta: float) -> float:
        return float(assoc.inverse(t, theta))

    sign = 1.0 if u_of(hint * 2.0 if multiplicative else hint + 1.0) > u_of(hint) else -1.0

    def g(theta: float) -> float:
        return sign * (u_of(theta) - q)

    lo = hi = hint
    for k in range(1, 200):
        if g(lo) < 0.0:
            break
        lo = hint / 2.0 ** k if multiplicative else hint - 2.0 ** k
    for k in range(1, 200):
        if g(hi) > 0.0:
            break
        hi = hint * 2.0 ** k if multiplicative else hint + 2.0 ** k
    if not (g(lo) < 0.0 < g(hi)):
        raise DomainError("could not bracket the CDF level; check the model")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-13 * max(1.0, abs(hi)):
            break
    return 0.5 * (lo + hi)


def fixed_s_region(assoc: Association, t, alpha: float) -> Interval1D:
    """Closed region {theta: alpha/2 <= inverse(t, theta) <= 1 - alpha/2}.

    This is the image of the smallest support set with auxiliary
    probability 1 - alpha; it coincides with the plausibility region's
    closure.
    """
    if assoc.aux_dim != 1 or assoc.theta_dim != 1:
        raise DomainError("fixed_s_region requires a scalar-CDF association")
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must be in (0, 1)")
    a = _solve_u_level(assoc, t, alpha / 2.0)
    b = _solve_u_level(assoc, t, 1.0 - alpha / 2.0)
    lo, hi = (a, b) if a < b else (b, a)
    return Interval1D(lo, hi, alpha, open=False)
