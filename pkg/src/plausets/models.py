"""Reliability models packaged as associations with plausibility functions.

Each model provides: data container with validation, sufficient statistic,
MLE, closed-form or Monte Carlo plausibility, the matching interval/region
construction, and a sampler for coverage experiments.

* power-law process: statistic T = n/theta_hat, gamma-distributed, default
  1-D random set, closed-form interval from gamma quantiles
* exponential regression through the origin: statistic = the MLE, CDF by
  Monte Carlo; theta_hat - theta is a pivot, so one table of solved draws
  at slope zero serves every (t, theta)
* lognormal: independent pair (mean, centered sum of squares), 2-D box
  random set, closed-form plausibility surface
* generic location-scale: one auxiliary variable per observation, box set,
  closed-form plausibility surface
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._accel import kernels
from ._special import norm_cdf_s
from .errors import ConvergenceError, DomainError
from .imcore import Association
from .numerics import (
    RngState,
    chisq_cdf,
    chisq_quantile,
    gamma_cdf,
    gamma_quantile,
    logistic_cdf,
    norm_cdf,
    norm_quantile,
    rng_exponentials,
    rng_normals,
    rng_uniforms,
    student_t_quantile,
)
from .regions import Interval1D


# ---------------------------------------------------------------------------
# Power-law process
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerLawData:
    """Ordered event times of a power-law process."""

    event_times: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.event_times, dtype=np.float64)
        object.__setattr__(self, "event_times", times)
        if times.ndim != 1 or times.size < 2:
            raise DomainError("need at least two event times")
        if np.any(times <= 0.0) or not np.all(np.isfinite(times)):
            raise DomainError("event times must be positive and finite")
        if np.any(np.diff(times) <= 0.0):
            raise DomainError("event times must be strictly increasing (no ties)")

    @property
    def n(self) -> int:
        return self.event_times.size


def powerlaw_statistic(data: PowerLawData) -> float:
    """t = sum_{i<n} log(Y_n / Y_i); gamma(n-1, 1/theta) under the model."""
    y = data.event_times
    return float(np.sum(np.log(y[-1] / y[:-1])))


def powerlaw_mle(data: PowerLawData) -> tuple[float, float]:
    """Closed-form (theta_hat, psi_hat)."""
    t = powerlaw_statistic(data)
    theta_hat = data.n / t
    psi_hat = data.n / data.event_times[-1] ** theta_hat
    return theta_hat, psi_hat


def powerlaw_pl(t: float, theta: float, n: int) -> float:
    """1 - |2 F(t; n-1, 1/theta) - 1| for the default random set."""
    if t <= 0.0 or theta <= 0.0 or n < 2:
        raise DomainError("need t > 0, theta > 0, n >= 2")
    return 1.0 - abs(2.0 * gamma_cdf(t, n - 1, 1.0 / theta) - 1.0)


def powerlaw_pl_arr(t: float, thetas: np.ndarray, n: int) -> np.ndarray:
    thetas = np.asarray(thetas, dtype=np.float64)
    f = kernels.gammainc_arr(float(n - 1), thetas * t)
    return 1.0 - np.abs(2.0 * f - 1.0)


def powerlaw_interval(t: float, n: int, alpha: float) -> Interval1D:
    """Plausibility interval: gamma(n-1) quantiles over t."""
    if t <= 0.0 or n < 2:
        raise DomainError("need t > 0 and n >= 2")
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must be in (0, 1)")
    lo = gamma_quantile(alpha / 2.0, n - 1, 1.0) / t
    hi = gamma_quantile(1.0 - alpha / 2.0, n - 1, 1.0) / t
    return Interval1D(lo, hi, alpha, open=True)


def powerlaw_association(n: int) -> Association:
    if n < 2:
        raise DomainError("need n >= 2")
    shape = float(n - 1)

    def forward(u, theta):
        return gamma_quantile(u, shape, 1.0) / theta

    def inverse(t, theta):
        return gamma_cdf(t * theta, shape, 1.0)

    def hint(t):
        return gamma_quantile(0.5, shape, 1.0) / t

    return Association(
        model_id="powerlaw",
        theta_dim=1,
        aux_dim=1,
        forward=forward,
        inverse=inverse,
        theta_support=(0.0, math.inf),
        theta_hint=hint,
    )


def powerlaw_sample_times(n: int, theta: float, psi: float,
                          state: RngState) -> tuple[np.ndarray, RngState]:
    """Event times with mean function psi * y**theta (failure truncation)."""
    if theta <= 0.0 or psi <= 0.0:
        raise DomainError("theta and psi must be positive")
    e, state = rng_exponentials(state, n)
    arrivals = np.cumsum(e)
    return (arrivals / psi) ** (1.0 / theta), state


# ---------------------------------------------------------------------------
# Exponential regression through the origin
# ---------------------------------------------------------------------------


def _check_covariates(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size == 0 or not np.all(np.isfinite(x)):
        raise DomainError("covariates must be a finite 1-D vector")
    nonzero = x[x != 0.0]
    if nonzero.size == 0:
        raise DomainError("covariates must not be all zero")
    if np.any(nonzero > 0.0) and np.any(nonzero < 0.0):
        raise DomainError(
            "mixed-sign covariates are rejected; the solver requires sign "
            "homogeneity"
        )
    return x


@dataclass(frozen=True)
class ExpRegData:
    """Fixed covariates with positive exponential responses."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = _check_covariates(self.x)
        y = np.asarray(self.y, dtype=np.float64)
        if y.shape != x.shape:
            raise DomainError("x and y must have the same length")
        if np.any(y <= 0.0) or not np.all(np.isfinite(y)):
            raise DomainError("responses must be positive and finite")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.x.size


def expreg_loglik(theta: float, data: ExpRegData) -> float:
    return float(-np.sum(theta * data.x + np.exp(np.log(data.y) - theta * data.x)))


def expreg_score(theta: float, data: ExpRegData) -> float:
    return float(np.sum((np.exp(np.log(data.y) - theta * data.x) - 1.0) * data.x))


def _solve_mle_rows(logy: np.ndarray, x: np.ndarray) -> np.ndarray:
    theta = kernels.expreg_mle_block(logy, x)
    bad = np.flatnonzero(~np.isfinite(theta))
    if bad.size:
        raise ConvergenceError(
            f"score bracket not found within 100 doublings (replicate {bad[0]})"
        )
    return theta


def expreg_mle(data: ExpRegData) -> float:
    """Unique root of the score equation."""
    logy = np.log(data.y)[None, :]
    return float(_solve_mle_rows(logy, data.x)[0])


def expreg_sample(theta: float, x: np.ndarray,
                  state: RngState) -> tuple[np.ndarray, RngState]:
    """Responses with mean exp(theta * x_i)."""
    x = _check_covariates(x)
    e, state = rng_exponentials(state, x.size)
    return np.exp(theta * x) * e, state


@dataclass(frozen=True)
class PivotTable:
    """Sorted Monte Carlo draws of the pivot theta_hat - theta."""

    draws: np.ndarray  # ascending
    state: RngState    # stream the table was built from

    def __post_init__(self):
        d = np.asarray(self.draws, dtype=np.float64)
        if d.size < 1000:
            raise DomainError("pivot table needs at least 1000 draws")
        if np.any(np.diff(d) < 0.0):
            raise DomainError("pivot draws must be sorted ascending")
        object.__setattr__(self, "draws", d)

    @property
    def size(self) -> int:
        return self.draws.size


def expreg_pivot_table(x: np.ndarray, mc_size: int,
                       state: RngState) -> PivotTable:
    """Solve the score equation on ``mc_size`` slope-zero datasets.

    Because log Y_i = theta x_i + log E_i, solving on the same exponential
    draws at any slope just shifts the root; the zero-slope table therefore
    represents the statistic's distribution at every theta.
    """
    x = _check_covariates(x)
    if mc_size < 1000:
        raise DomainError("mc_size must be at least 1000")
    u, _ = rng_uniforms(state, mc_size * x.size)
    loge = np.log(-np.log1p(-u)).reshape(mc_size, x.size)
    draws = np.sort(_solve_mle_rows(loge, x))
    return PivotTable(draws=draws, state=state)


def expreg_ghat(table: PivotTable, v: float) -> float:
    """Empirical CDF of the pivot draws."""
    return float(np.searchsorted(table.draws, v, side="right")) / table.size


def expreg_pl(t: float, theta: float, table: PivotTable) -> float:
    """Step-function plausibility 1 - |2 Ghat(t - theta) - 1|."""
    return 1.0 - abs(2.0 * expreg_ghat(table, t - theta) - 1.0)


def _type1_quantile(draws: np.ndarray, p: float) -> float:
    # left-continuous inverse of the empirical CDF; the 1e-9 slack keeps
    # p*B at exact multiples from rounding up to the next order statistic
    idx = math.ceil(p * draws.size - 1e-9) - 1
    return float(draws[min(max(idx, 0), draws.size - 1)])


def expreg_interval(t: float, alpha: float, table: PivotTable) -> Interval1D:
    """Interval from pivot-table order statistics."""
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must be in (0, 1)")
    if alpha * table.size < 1.0:
        raise DomainError(
            f"alpha {alpha} is below the table resolution 1/{table.size}"
        )
    lo = t - _type1_quantile(table.draws, 1.0 - alpha / 2.0)
    hi = t - _type1_quantile(table.draws, alpha / 2.0)
    return Interval1D(lo, hi, alpha, open=True)


def expreg_pl_fresh(t: float, theta: float, x: np.ndarray, mc_size: int,
                    state: RngState) -> float:
    """Per-theta re-simulation of the statistic's CDF (fidelity mode).

    With the same stream as ``expreg_pivot_table`` this reproduces the
    pivot-mode value, because the solved roots differ by exactly theta.
    """
    x = _check_covariates(x)
    if mc_size < 1000:
        raise DomainError("mc_size must be at least 1000")
    u, _ = rng_uniforms(state, mc_size * x.size)
    loge = np.log(-np.log1p(-u)).reshape(mc_size, x.size)
    logy = theta * x[None, :] + loge
    roots = _solve_mle_rows(logy, x)
    ghat = float(np.mean(roots <= t))
    return 1.0 - abs(2.0 * ghat - 1.0)


def expreg_observed_information(data: ExpRegData, theta: float) -> float:
    return float(np.sum(data.x ** 2 * np.exp(np.log(data.y) - theta * data.x)))


def expreg_wald_interval(data: ExpRegData, alpha: float) -> Interval1D:
    """theta_hat +/- z_{1-alpha/2} / sqrt(observed information)."""
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must be in (0, 1)")
    theta_hat = expreg_mle(data)
    info = expreg_observed_information(data, theta_hat)
    if info <= 0.0:
        raise ConvergenceError("observed information is not positive")
    half = norm_quantile(1.0 - alpha / 2.0) / math.sqrt(info)
    return Interval1D(theta_hat - half, theta_hat + half, alpha, open=False)


def expreg_association(x: np.ndarray, table: PivotTable) -> Association:
    x = _check_covariates(x)

    def forward(u, theta):
        return theta + _type1_quantile(table.draws, u)

    def inverse(t, theta):
        return expreg_ghat(table, t - theta)

    def hint(t):
        return t - _type1_quantile(table.draws, 0.5)

    return Association(
        model_id="expreg",
        theta_dim=1,
        aux_dim=1,
        forward=forward,
        inverse=inverse,
        theta_support=(-math.inf, math.inf),
        theta_hint=hint,
    )


# ---------------------------------------------------------------------------
# Lognormal (log-lifetime) model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LognormalStats:
    """Sufficient pair: sample mean and centered sum of squares."""

    n: int
    t1: float
    t2: float

    def __post_init__(self):
        if self.n < 2:
            raise DomainError("need n >= 2")
        if not self.t2 > 0.0:
            raise DomainError("centered sum of squares must be positive")


def lognormal_stats(y: np.ndarray) -> LognormalStats:
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 1 or y.size < 2 or not np.all(np.isfinite(y)):
        raise DomainError("need a finite 1-D sample of size >= 2")
    t1 = float(np.mean(y))
    t2 = float(np.sum((y - t1) ** 2))
    return LognormalStats(n=y.size, t1=t1, t2=t2)


def lognormal_pl(stats: LognormalStats, mu: float, sigma2: float) -> float:
    """Box-set plausibility 1 - max(|2F1-1|, |2F2-1|)**2."""
    if sigma2 <= 0.0:
        raise DomainError("sigma2 must be positive")
    z = (stats.t1 - mu) * math.sqrt(stats.n) / math.sqrt(sigma2)
    f1 = norm_cdf_s(z)
    f2 = chisq_cdf(stats.t2 / sigma2, stats.n - 1)
    m = max(abs(2.0 * f1 - 1.0), abs(2.0 * f2 - 1.0))
    return 1.0 - m * m


def lognormal_pl_arr(stats: LognormalStats, mu: np.ndarray,
                     sigma2: np.ndarray) -> np.ndarray:
    """Vectorized plausibility surface over broadcast (mu, sigma2) arrays."""
    mu = np.asarray(mu, dtype=np.float64)
    sigma2 = np.asarray(sigma2, dtype=np.float64)
    if np.any(sigma2 <= 0.0):
        raise DomainError("sigma2 must be positive")
    mu_b, s2_b = np.broadcast_arrays(mu, sigma2)
    z = (stats.t1 - mu_b) * math.sqrt(stats.n) / np.sqrt(s2_b)
    f1 = kernels.norm_cdf_arr(z.ravel()).reshape(z.shape)
    f2 = kernels.gammainc_arr(
        0.5 * (stats.n - 1), (stats.t2 / s2_b.ravel()) * 0.5
    ).reshape(s2_b.shape)
    m = np.maximum(np.abs(2.0 * f1 - 1.0), np.abs(2.0 * f2 - 1.0))
    return 1.0 - m * m


def lognormal_sample(n: int, mu: float, sigma2: float,
                     state: RngState) -> tuple[np.ndarray, RngState]:
    if n < 2 or sigma2 <= 0.0:
        raise DomainError("need n >= 2 and sigma2 > 0")
    z, state = rng_normals(state, n)
    return mu + math.sqrt(sigma2) * z, state


def lognormal_association(n: int) -> Association:
    if n < 2:
        raise DomainError("need n >= 2")
    df = n - 1

    def forward(u, theta):
        mu, sigma2 = theta
        t1 = mu + math.sqrt(sigma2 / n) * norm_quantile(u[0])
        t2 = sigma2 * chisq_quantile(u[1], df)
        return t1, t2

    def inverse(t, theta):
        mu, sigma2 = theta
        t1, t2 = t
        if sigma2 <= 0.0:
            raise ValueError("sigma2 must be positive")
        u1 = norm_cdf((t1 - mu) * math.sqrt(n) / math.sqrt(sigma2))
        u2 = chisq_cdf(t2 / sigma2, df)
        return np.array([u1, u2])

    return Association(
        model_id="lognormal",
        theta_dim=2,
        aux_dim=2,
        forward=forward,
        inverse=inverse,
    )


@dataclass(frozen=True)
class EllipseRegion:
    """Quadratic-form region around the MLE at a chi-square threshold."""

    center: tuple[float, float]
    weights: tuple[float, float]  # coefficients of the squared deviations
    threshold: float
    alpha: float

    def contains(self, mu: float, sigma2: float) -> bool:
        d1 = mu - self.center[0]
        d2 = sigma2 - self.center[1]
        return self.weights[0] * d1 * d1 + self.weights[1] * d2 * d2 <= self.threshold


@dataclass(frozen=True)
class RectRegion:
    """Cartesian product of two marginal intervals (closed)."""

    mu_lo: float
    mu_hi: float
    s2_lo: float
    s2_hi: float
    alpha: float

    def contains(self, mu: float, sigma2: float) -> bool:
        return self.mu_lo <= mu <= self.mu_hi and self.s2_lo <= sigma2 <= self.s2_hi


def lognormal_mle_region(y: np.ndarray, alpha: float) -> EllipseRegion:
    """Wald ellipse from the Fisher information at the MLE.

    Information is diag(n/sigma2, n/(2 sigma2^2)) evaluated at
    (mean, t2/n); the threshold is the chi-square(2) quantile.
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must be in (0, 1)")
    stats = lognormal_stats(y)
    mu_hat = stats.t1
    s2_hat = stats.t2 / stats.n
    weights = (stats.n / s2_hat, stats.n / (2.0 * s2_hat * s2_hat))
    return EllipseRegion(
        center=(mu_hat, s2_hat),
        weights=weights,
        threshold=chisq_quantile(1.0 - alpha, 2),
        alpha=alpha,
    )


def lognormal_naive_region(y: np.ndarray, alpha: float) -> RectRegion:
    """Bonferroni box: level 1-alpha/2 Student-t interval for the mean
    crossed with the equal-tailed chi-square interval for the variance."""
    if not 0.0 < alpha < 1.0:
        raise DomainError("alpha must be in (0, 1)")
    stats = lognormal_stats(y)
    df = stats.n - 1
    s = math.sqrt(stats.t2 / df)
    half = student_t_quantile(1.0 - alpha / 4.0, df) * s / math.sqrt(stats.n)
    return RectRegion(
        mu_lo=stats.t1 - half,
        mu_hi=stats.t1 + half,
        s2_lo=stats.t2 / chisq_quantile(1.0 - alpha / 4.0, df),
        s2_hi=stats.t2 / chisq_quantile(alpha / 4.0, df),
        alpha=alpha,
    )


# ---------------------------------------------------------------------------
# Generic location-scale model
# ---------------------------------------------------------------------------

_BASE_CDFS = {"normal": norm_cdf, "logistic": logistic_cdf}


def locscale_pl(y: np.ndarray, mu: float, sigma: float,
                base: str = "normal") -> float:
    """Box-set plausibility with one auxiliary variable per observation:
    1 - (max_i |2F((y_i - mu)/sigma) - 1|)**n."""
    if sigma <= 0.0:
        raise DomainError("sigma must be positive")
    try:
        cdf = _BASE_CDFS[base]
    except KeyError:
        raise DomainError(f"base must be one of {sorted(_BASE_CDFS)}") from None
    y = np.asarray(y, dtype=np.float64)
    if y.ndim != 1 or y.size == 0 or not np.all(np.isfinite(y)):
        raise DomainError("need a finite 1-D sample")
    m = max(abs(2.0 * cdf((yi - mu) / sigma) - 1.0) for yi in y)
    return 1.0 - m ** y.size


def locscale_pl_arr(y: np.ndarray, mu: np.ndarray, sigma: np.ndarray,
                    base: str = "normal") -> np.ndarray:
    """Vectorized location-scale surface over broadcast (mu, sigma)."""
    if base not in _BASE_CDFS:
        raise DomainError(f"base must be one of {sorted(_BASE_CDFS)}")
    y = np.asarray(y, dtype=np.float64)
    mu_b, sg_b = np.broadcast_arrays(
        np.asarray(mu, dtype=np.float64), np.asarray(sigma, dtype=np.float64)
    )
    if np.any(sg_b <= 0.0):
        raise DomainError("sigma must be positive")
    z = (y.reshape((1,) * mu_b.ndim + (-1,)) - mu_b[..., None]) / sg_b[..., None]
    if base == "normal":
        f = kernels.norm_cdf_arr(z.ravel()).reshape(z.shape)
    else:
        f = 1.0 / (1.0 + np.exp(-z))
    m = np.max(np.abs(2.0 * f - 1.0), axis=-1)
    return 1.0 - m ** y.size
