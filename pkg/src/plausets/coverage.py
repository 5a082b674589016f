"""Repeated-sampling coverage estimation and exactness diagnostics.

Each replicate draws its own derived stream (stream index = replicate
index, with sub-streams for data and for the per-dataset Monte Carlo
table), so reports are independent of how replicates are scheduled across
workers. Truth membership in 2-D regions is decided by comparing pl at the
truth against the threshold, never through a grid mask, so no resolution
bias enters the estimates.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from multiprocessing import get_context

import numpy as np

from ._accel import kernels
from .errors import ConvergenceError, DomainError
from . import models as md
from .imcore import ks_one_sample_uniform
from .numerics import derive_stream, derive_substream, gamma_cdf, rng_uniforms

_METHODS = {
    "powerlaw": ("plausibility", "fixed_s", "whole_space"),
    "expreg": ("plausibility", "wald", "fixed_s", "whole_space"),
    "lognormal": ("plausibility", "mle_ellipse", "naive_rect", "fixed_s", "whole_space"),
}


@dataclass(frozen=True)
class CoverageSpec:
    """One coverage experiment: model, truth, method, level, replication."""

    model: str
    method: str
    alpha: float
    reps: int
    master_seed: int
    n: int
    theta: float = 1.0
    mu: float = 0.0
    sigma2: float = 1.0
    x: np.ndarray | None = None
    mc_size: int = 10_000
    psi: float = 1.0

    def __post_init__(self):
        if self.model not in _METHODS:
            raise DomainError(f"unknown model {self.model!r}")
        if self.method not in _METHODS[self.model]:
            raise DomainError(
                f"method {self.method!r} not available for {self.model}; "
                f"choose from {_METHODS[self.model]}"
            )
        if self.reps < 100:
            raise DomainError("reps must be at least 100")
        if not 0.0 < self.alpha < 1.0:
            raise DomainError("alpha must be in (0, 1)")
        if self.n < 2:
            raise DomainError("n must be at least 2")
        if self.model == "expreg":
            x = np.arange(1.0, self.n + 1) if self.x is None else np.asarray(
                self.x, dtype=np.float64
            )
            if x.size != self.n:
                raise DomainError("len(x) must equal n")
            object.__setattr__(self, "x", x)


@dataclass(frozen=True)
class CoverageReport:
    """Empirical coverage with its binomial standard error."""

    estimate: float
    stderr: float
    reps: int
    spec: CoverageSpec
    wall_time: float

    def csv_line(self) -> str:
        return (
            f"{self.spec.method},{self.spec.alpha:g},{self.reps},"
            f"{self.estimate:.6f},{self.stderr:.6f},{self.spec.master_seed}"
        )

    CSV_HEADER = "method,alpha,reps,estimate,stderr,seed"


def _replicate_hit(spec: CoverageSpec, rep: int) -> bool:
    base = derive_stream(spec.master_seed, rep)
    data_state = derive_substream(base, 0)
    alpha = spec.alpha

    if spec.model == "powerlaw":
        times, _ = md.powerlaw_sample_times(spec.n, spec.theta, spec.psi, data_state)
        t = md.powerlaw_statistic(md.PowerLawData(times))
        if spec.method == "whole_space":
            return True
        f = gamma_cdf(t, spec.n - 1, 1.0 / spec.theta)
        if spec.method == "plausibility":
            return 1.0 - abs(2.0 * f - 1.0) > alpha
        return alpha / 2.0 <= f <= 1.0 - alpha / 2.0  # fixed_s

    if spec.model == "expreg":
        y, _ = md.expreg_sample(spec.theta, spec.x, data_state)
        data = md.ExpRegData(spec.x, y)
        t = md.expreg_mle(data)
        if spec.method == "whole_space":
            return True
        if spec.method == "wald":
            return md.expreg_wald_interval(data, alpha).contains(spec.theta)
        table = md.expreg_pivot_table(
            spec.x, spec.mc_size, derive_substream(base, 1)
        )
        g = md.expreg_ghat(table, t - spec.theta)
        if spec.method == "plausibility":
            return 1.0 - abs(2.0 * g - 1.0) > alpha
        return alpha / 2.0 <= g <= 1.0 - alpha / 2.0  # fixed_s

    # lognormal
    y, _ = md.lognormal_sample(spec.n, spec.mu, spec.sigma2, data_state)
    if spec.method == "whole_space":
        return True
    if spec.method == "mle_ellipse":
        return md.lognormal_mle_region(y, alpha).contains(spec.mu, spec.sigma2)
    if spec.method == "naive_rect":
        return md.lognormal_naive_region(y, alpha).contains(spec.mu, spec.sigma2)
    stats = md.lognormal_stats(y)
    pl = md.lognormal_pl(stats, spec.mu, spec.sigma2)
    if spec.method == "plausibility":
        return pl > alpha
    return pl >= alpha  # fixed_s: closed box boundary


def _count_hits(spec: CoverageSpec, lo: int, hi: int) -> int:
    count = 0
    for rep in range(lo, hi):
        try:
            count += _replicate_hit(spec, rep)
        except ConvergenceError as exc:
            raise ConvergenceError(
                f"replicate {rep} (seed {spec.master_seed}, stream {rep}): {exc}"
            ) from exc
    return count


def run_coverage(spec: CoverageSpec, workers: int = 1) -> CoverageReport:
    """Estimate the coverage probability of the chosen method.

    Deterministic in ``spec.master_seed`` for any worker count: replicates
    use streams derived from their index and the total is a plain sum.
    """
    start = time.time()
    if workers <= 1:
        hits = _count_hits(spec, 0, spec.reps)
    else:
        bounds = np.linspace(0, spec.reps, workers + 1).astype(int)
        jobs = [
            (spec, int(lo), int(hi))
            for lo, hi in zip(bounds[:-1], bounds[1:])
            if hi > lo
        ]
        try:
            ctx = get_context("fork")
        except ValueError:
            ctx = get_context()
        with ctx.Pool(len(jobs)) as pool:
            hits = sum(pool.starmap(_count_hits, jobs))
    estimate = hits / spec.reps
    stderr = math.sqrt(estimate * (1.0 - estimate) / spec.reps)
    return CoverageReport(
        estimate=estimate,
        stderr=stderr,
        reps=spec.reps,
        spec=spec,
        wall_time=time.time() - start,
    )


# ---------------------------------------------------------------------------
# Uniformity of pl_T at the truth
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UniformityReport:
    ks_plus: float
    ks_minus: float
    ks_two_sided: float
    threshold: float
    reps: int
    passed_one_sided: bool
    passed_two_sided: bool


def uniformity_check(model: str, n: int, reps: int, master_seed: int,
                     theta: float = 1.0, mu: float = 0.0, sigma2: float = 1.0,
                     shrunken: bool = False) -> UniformityReport:
    """Simulate pl_T(truth) and test it against Unif(0, 1).

    Exact random sets with continuous statistics keep both Kolmogorov
    statistics inside 1.63/sqrt(reps); the deliberately shrunken contour
    (the squared default) fails the one-sided band.
    """
    if reps < 1000:
        raise DomainError("reps must be at least 1000")
    if n < 2:
        raise DomainError("n must be at least 2")
    state = derive_stream(master_seed, 0)

    if model == "powerlaw":
        if theta <= 0.0:
            raise DomainError("theta must be positive")
        u, _ = rng_uniforms(state, reps * n)
        arrivals = np.cumsum(
            -np.log1p(-u).reshape(reps, n), axis=1
        )
        times = arrivals ** (1.0 / theta)  # unit psi
        t = np.sum(np.log(times[:, -1:] / times[:, :-1]), axis=1)
        f = kernels.gammainc_arr(float(n - 1), theta * t)
        pl = 1.0 - np.abs(2.0 * f - 1.0)
    elif model == "lognormal":
        if sigma2 <= 0.0:
            raise DomainError("sigma2 must be positive")
        u, _ = rng_uniforms(state, reps * n)
        z = kernels.norm_quantile_arr(u).reshape(reps, n)
        y = mu + math.sqrt(sigma2) * z
        t1 = y.mean(axis=1)
        t2 = np.sum((y - t1[:, None]) ** 2, axis=1)
        f1 = kernels.norm_cdf_arr((t1 - mu) * math.sqrt(n) / math.sqrt(sigma2))
        f2 = kernels.gammainc_arr(0.5 * (n - 1), 0.5 * t2 / sigma2)
        m = np.maximum(np.abs(2.0 * f1 - 1.0), np.abs(2.0 * f2 - 1.0))
        pl = 1.0 - m * m
    else:
        raise DomainError(f"uniformity_check supports powerlaw and lognormal, not {model!r}")

    if shrunken:
        pl = pl * pl
    d_plus, d_minus = ks_one_sample_uniform(pl)
    threshold = 1.63 / math.sqrt(reps)
    return UniformityReport(
        ks_plus=d_plus,
        ks_minus=d_minus,
        ks_two_sided=max(d_plus, d_minus),
        threshold=threshold,
        reps=reps,
        passed_one_sided=d_plus <= threshold,
        passed_two_sided=max(d_plus, d_minus) <= threshold,
    )
