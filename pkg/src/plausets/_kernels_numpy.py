"""Pure-numpy fallback for the hot kernels.

Same API and algorithms as ``_kernels_numba``; scalar loops are replaced by
vectorized array sweeps with per-element convergence masks. The generator
kernel is integer arithmetic and reproduces the numba backend bit for bit;
transcendental kernels agree to roughly machine precision.
"""

from __future__ import annotations

import math

import numpy as np

from ._special import GOLDEN

BACKEND_NAME = "numpy"

_EPS = 2.220446049250313e-16
_TINY = 1e-300
_INV53 = 1.0 / (1 << 53)

_erfc_obj = np.frompyfunc(math.erfc, 1, 1)


def uniform_block(key: int, start: int, n: int) -> np.ndarray:
    counters = np.arange(1, n + 1, dtype=np.uint64) + np.uint64(start)
    z = np.uint64(key) + counters * np.uint64(GOLDEN)
    z ^= z >> np.uint64(30)
    z *= np.uint64(0xBF58476D1CE4E5B9)
    z ^= z >> np.uint64(27)
    z *= np.uint64(0x94D049BB133111EB)
    z ^= z >> np.uint64(31)
    return ((z >> np.uint64(11)).astype(np.float64) + 0.5) * _INV53


def norm_cdf_arr(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return 0.5 * _erfc_obj(-x / math.sqrt(2.0)).astype(np.float64)


def norm_quantile_arr(p: np.ndarray) -> np.ndarray:
    """AS241 PPND16, branch split expressed with masks."""
    p = np.asarray(p, dtype=np.float64)
    q = p - 0.5
    out = np.empty_like(p)

    central = np.abs(q) <= 0.425
    if central.any():
        qc = q[central]
        r = 0.180625 - qc * qc
        num = (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r
                    + 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r
                  + 1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r
                + 1.3314166789178437745e2) * r + 3.3871328727963666080e0)
        den = (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r
                    + 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r
                  + 5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r
                + 4.2313330701600911252e1) * r + 1.0)
        out[central] = qc * num / den

    tails = ~central
    if tails.any():
        qt = q[tails]
        r = np.where(qt < 0.0, p[tails], 1.0 - p[tails])
        r = np.sqrt(-np.log(r))
        near = r <= 5.0
        val = np.empty_like(r)

        rn = r[near] - 1.6
        num = (((((((7.74545014278341407640e-4 * rn + 2.27238449892691845833e-2) * rn
                    + 2.41780725177450611770e-1) * rn + 1.27045825245236838258e0) * rn
                  + 3.64784832476320460504e0) * rn + 5.76949722146069140550e0) * rn
                + 4.63033784615654529590e0) * rn + 1.42343711074968357734e0)
        den = (((((((1.05075007164441684324e-9 * rn + 5.47593808499534494600e-4) * rn
                    + 1.51986665636164571966e-2) * rn + 1.48103976427480074590e-1) * rn
                  + 6.89767334985100004550e-1) * rn + 1.67638483018380384940e0) * rn
                + 2.05319162663775882187e0) * rn + 1.0)
        val[near] = num / den

        far = ~near
        rf = r[far] - 5.0
        num = (((((((2.01033439929228813265e-7 * rf + 2.71155556874348757815e-5) * rf
                    + 1.24266094738807843860e-3) * rf + 2.65321895265761230930e-2) * rf
                  + 2.96560571828504891230e-1) * rf + 1.78482653991729133580e0) * rf
                + 5.46378491116411436990e0) * rf + 6.65790464350110377720e0)
        den = (((((((2.04426310338993978564e-15 * rf + 1.42151175831644588870e-7) * rf
                    + 1.84631831751005468180e-5) * rf + 7.86869131145613259100e-4) * rf
                  + 1.48753612908506148525e-2) * rf + 1.36929880922735805310e-1) * rf
                + 5.99832206555887937690e-1) * rf + 1.0)
        val[far] = num / den

        out[tails] = np.where(qt < 0.0, -val, val)
    return out


def _gammainc_series(a: float, x: np.ndarray) -> np.ndarray:
    term = np.full_like(x, 1.0 / a)
    total = term.copy()
    active = np.ones(x.shape, dtype=bool)
    ap = a
    for _ in range(800):
        ap += 1.0
        step = term * (x / ap)
        term = np.where(active, step, term)
        total = np.where(active, total + step, total)
        active &= np.abs(term) >= np.abs(total) * _EPS
        if not active.any():
            break
    return total * np.exp(-x + a * np.log(x) - math.lgamma(a))


def _gammainc_contfrac(a: float, x: np.ndarray) -> np.ndarray:
    b = x + 1.0 - a
    c = np.full_like(x, 1.0 / _TINY)
    d = 1.0 / b
    h = d.copy()
    active = np.ones(x.shape, dtype=bool)
    for i in range(1, 800):
        an = -i * (i - a)
        b = np.where(active, b + 2.0, b)
        d_new = an * d + b
        d_new = np.where(np.abs(d_new) < _TINY, _TINY, d_new)
        c_new = b + an / c
        c_new = np.where(np.abs(c_new) < _TINY, _TINY, c_new)
        d_new = 1.0 / d_new
        delta = d_new * c_new
        d = np.where(active, d_new, d)
        c = np.where(active, c_new, c)
        h = np.where(active, h * delta, h)
        active &= np.abs(delta - 1.0) >= _EPS
        if not active.any():
            break
    q = np.exp(-x + a * np.log(x) - math.lgamma(a)) * h
    return 1.0 - q


def gammainc_arr(a: float, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    pos = x > 0.0
    series = pos & (x < a + 1.0)
    tail = pos & ~series
    if series.any():
        out[series] = _gammainc_series(a, x[series])
    if tail.any():
        out[tail] = _gammainc_contfrac(a, x[tail])
    return out


def expreg_mle_block(logy: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Vectorized safeguarded Newton across all rows of ``logy``."""
    logy = np.asarray(logy, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    sx = float(x.sum())
    sxx = float((x * x).sum())

    def score_and_slope(t):
        e = np.exp(logy - t[:, None] * x[None, :])
        return e @ x - sx, e @ (x * x)

    def score(t):
        return np.exp(logy - t[:, None] * x[None, :]) @ x - sx

    theta0 = (logy @ x) / sxx
    width = np.ones_like(theta0)
    lo = theta0 - width
    hi = theta0 + width
    pending = np.ones(theta0.shape, dtype=bool)
    for _ in range(100):
        s_lo = score(lo)
        s_hi = score(hi)
        pending &= ~((s_lo > 0.0) & (s_hi < 0.0))
        if not pending.any():
            break
        lo = np.where(pending & (s_lo <= 0.0), lo - width, lo)
        hi = np.where(pending & (s_hi >= 0.0), hi + width, hi)
        width = np.where(pending, width * 2.0, width)
    failed = pending.copy()

    t = 0.5 * (lo + hi)
    active = ~failed
    for _ in range(200):
        s, sp = score_and_slope(t)
        done = np.abs(s) <= 1e-10
        active &= ~done
        if not active.any():
            break
        lo = np.where(active & (s > 0.0), t, lo)
        hi = np.where(active & (s <= 0.0), t, hi)
        t_new = t + s / sp
        inside = (t_new > lo) & (t_new < hi)
        t_new = np.where(inside, t_new, 0.5 * (lo + hi))
        stalled = (t_new == t) | (hi - lo <= _EPS * np.maximum(1.0, np.abs(t)))
        active &= ~stalled
        t = np.where(active, t_new, t)
    return np.where(failed, np.nan, t)
