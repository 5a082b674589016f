"""Scalar special-function and generator algorithms.

Everything here is written as plain float/int arithmetic on scalars so the
same source compiles under ``numba.njit`` (see ``_kernels_numba``) and runs
unmodified in interpreted mode. The vectorized numpy backend re-expresses
the same algorithms on arrays.

Algorithms:

* normal CDF via ``math.erfc``
* normal quantile: Wichura's AS241 (PPND16) rational approximations
* regularized lower incomplete gamma: power series for ``x < a + 1``,
  Lentz continued fraction otherwise
* gamma quantile: Newton with Wilson-Hilferty start, bisection safeguard
* regularized incomplete beta (for the Student-t CDF): Lentz continued
  fraction with the standard argument swap
* SplitMix64-style avalanche mixing for the counter-based generator

Generator contract (fixed; golden files depend on it): with
``GOLDEN = 0x9E3779B97F4A7C15`` and ``mix64`` the SplitMix64 finalizer,

* stream key   = ``mix64(mix64(master_seed) + stream_index * GOLDEN)``
* substream j  = ``mix64(key ^ mix64((j + 1) * SUBSTREAM_SALT))``
* draw k       = ``mix64(key + (k + 1) * GOLDEN)``, mapped to (0, 1) by
  ``((bits >> 11) + 0.5) * 2**-53`` (never exactly 0 or 1)
"""

from __future__ import annotations

import math

GOLDEN = 0x9E3779B97F4A7C15
SUBSTREAM_SALT = 0xD1B54A32D192ED03
_MASK64 = (1 << 64) - 1
_INV53 = 1.0 / (1 << 53)


def mix64_py(z: int) -> int:
    """SplitMix64 finalizer on python ints (exact, mod 2**64)."""
    z &= _MASK64
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK64
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK64
    z ^= z >> 31
    return z


def stream_key_py(master_seed: int, stream_index: int) -> int:
    return mix64_py(mix64_py(master_seed) + stream_index * GOLDEN)


def substream_key_py(key: int, index: int) -> int:
    return mix64_py(key ^ mix64_py((index + 1) * SUBSTREAM_SALT))


def draw_bits_py(key: int, counter: int) -> int:
    return mix64_py(key + (counter + 1) * GOLDEN)


def bits_to_unit(bits: int) -> float:
    """Map 64 random bits to a double strictly inside (0, 1)."""
    return ((bits >> 11) + 0.5) * _INV53


# ---------------------------------------------------------------------------
# Normal distribution
# ---------------------------------------------------------------------------

_SQRT2 = math.sqrt(2.0)


def norm_cdf_s(x: float) -> float:
    return 0.5 * math.erfc(-x / _SQRT2)


def norm_quantile_s(p: float) -> float:
    """AS241 PPND16: relative error below 1e-15 on (0, 1)."""
    q = p - 0.5
    if abs(q) <= 0.425:
        r = 0.180625 - q * q
        num = (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r
                    + 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r
                  + 1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r
                + 1.3314166789178437745e2) * r + 3.3871328727963666080e0)
        den = (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r
                    + 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r
                  + 5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r
                + 4.2313330701600911252e1) * r + 1.0)
        return q * num / den
    if q < 0.0:
        r = p
    else:
        r = 1.0 - p
    r = math.sqrt(-math.log(r))
    if r <= 5.0:
        r = r - 1.6
        num = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r
                    + 2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r
                  + 3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r
                + 4.63033784615654529590e0) * r + 1.42343711074968357734e0)
        den = (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r
                    + 1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r
                  + 6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r
                + 2.05319162663775882187e0) * r + 1.0)
    else:
        r = r - 5.0
        num = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r
                    + 1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r
                  + 2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r
                + 5.46378491116411436990e0) * r + 6.65790464350110377720e0)
        den = (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r
                    + 1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r
                  + 1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r
                + 5.99832206555887937690e-1) * r + 1.0)
    val = num / den
    if q < 0.0:
        return -val
    return val


# ---------------------------------------------------------------------------
# Incomplete gamma
# ---------------------------------------------------------------------------

_TINY = 1e-300
_EPS = 2.220446049250313e-16


def gammainc_s(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x), a > 0, x >= 0."""
    if x <= 0.0:
        return 0.0
    if x < a + 1.0:
        # power series around 0
        ap = a
        term = 1.0 / a
        total = term
        for _ in range(800):
            ap += 1.0
            term *= x / ap
            total += term
            if abs(term) < abs(total) * _EPS:
                break
        return total * math.exp(-x + a * math.log(x) - math.lgamma(a))
    # Lentz continued fraction for Q(a, x)
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, 800):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    q = math.exp(-x + a * math.log(x) - math.lgamma(a)) * h
    return 1.0 - q


def _gamma_logpdf(a: float, x: float) -> float:
    return -x + (a - 1.0) * math.log(x) - math.lgamma(a)


def gamma_quantile_s(q: float, a: float) -> float:
    """Inverse of P(a, .) at q in (0, 1), unit scale.

    Newton from a Wilson-Hilferty start; falls back to bisection whenever a
    step leaves the maintained bracket. Terminates when the CDF residual is
    below 4 ulp or the bracket collapses.
    """
    z = norm_quantile_s(q)
    w = 1.0 - 1.0 / (9.0 * a) + z / (3.0 * math.sqrt(a))
    x = a * w * w * w
    if x <= 0.0 or not math.isfinite(x):
        x = a * math.exp(z / math.sqrt(a))  # crude but positive
    lo = 0.0
    hi = x
    # ensure hi brackets: P(a, hi) > q
    for _ in range(200):
        if gammainc_s(a, hi) > q:
            break
        lo = hi
        hi *= 2.0
    for _ in range(300):
        f = gammainc_s(a, x) - q
        if f > 0.0:
            hi = x
        else:
            lo = x
        lpdf = _gamma_logpdf(a, x)
        if lpdf > -700.0:
            x_new = x - f * math.exp(-lpdf)
        else:
            x_new = lo  # force bisection
        if not (lo < x_new < hi):
            x_new = 0.5 * (lo + hi)
        # converge in x, not in the CDF residual: flat tails would otherwise
        # stop far from the float-limited root
        if abs(x_new - x) <= 1e-15 * max(x, 1e-300) or hi - lo <= 4.0 * _EPS * hi:
            return x_new
        x = x_new
    return x


# ---------------------------------------------------------------------------
# Incomplete beta and Student-t
# ---------------------------------------------------------------------------


def _betacf(a: float, b: float, x: float) -> float:
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, 500):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h


def betainc_s(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    lbeta = math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
    bt = math.exp(lbeta + a * math.log(x) + b * math.log(1.0 - x))
    if x < (a + 1.0) / (a + b + 2.0):
        return bt * _betacf(a, b, x) / a
    return 1.0 - bt * _betacf(b, a, 1.0 - x) / b


def t_cdf_s(x: float, df: float) -> float:
    p = betainc_s(0.5 * df, 0.5, df / (df + x * x))
    if x >= 0.0:
        return 1.0 - 0.5 * p
    return 0.5 * p


def _t_logpdf(x: float, df: float) -> float:
    return (math.lgamma(0.5 * (df + 1.0)) - math.lgamma(0.5 * df)
            - 0.5 * math.log(df * math.pi)
            - 0.5 * (df + 1.0) * math.log1p(x * x / df))


def t_quantile_s(q: float, df: float) -> float:
    """Inverse Student-t CDF via safeguarded Newton on t_cdf_s."""
    if q == 0.5:
        return 0.0
    if q < 0.5:
        return -t_quantile_s(1.0 - q, df)
    z = norm_quantile_s(q)
    x = z + (z * z * z + z) / (4.0 * df)  # first Cornish-Fisher term
    lo = 0.0
    hi = max(x, 1.0)
    for _ in range(300):
        if t_cdf_s(hi, df) > q:
            break
        lo = hi
        hi *= 2.0
    for _ in range(200):
        f = t_cdf_s(x, df) - q
        if abs(f) <= 4.0 * _EPS:
            return x
        if f > 0.0:
            hi = x
        else:
            lo = x
        x_new = x - f * math.exp(-_t_logpdf(x, df))
        if not (lo < x_new < hi):
            x_new = 0.5 * (lo + hi)
        if x_new == x or hi - lo <= _EPS * max(1.0, hi):
            return x
        x = x_new
    return x


# ---------------------------------------------------------------------------
# Exponential-regression score solver (single dataset)
# ---------------------------------------------------------------------------


def expreg_mle_row(logy, x) -> float:
    """Root of sum_i x_i*(exp(logy_i - t*x_i) - 1) in t for one dataset.

    ``logy`` and ``x`` are 1-D float64 arrays of equal length. The score is
    strictly decreasing; the start value (least squares of logy on x) is
    shift-equivariant, so solutions on shifted data differ by exactly the
    shift up to solver tolerance.
    """
    n = logy.shape[0]
    sx = 0.0
    sxx = 0.0
    sxl = 0.0
    for i in range(n):
        sx += x[i]
        sxx += x[i] * x[i]
        sxl += x[i] * logy[i]
    theta = sxl / sxx
    # expanding bracket: score(lo) > 0 > score(hi)
    width = 1.0
    lo = theta - width
    hi = theta + width
    bracketed = False
    for _ in range(100):
        s_lo = 0.0
        s_hi = 0.0
        for i in range(n):
            s_lo += x[i] * math.exp(logy[i] - lo * x[i])
            s_hi += x[i] * math.exp(logy[i] - hi * x[i])
        s_lo -= sx
        s_hi -= sx
        if s_lo > 0.0 and s_hi < 0.0:
            bracketed = True
            break
        if s_lo <= 0.0:
            lo -= width
        if s_hi >= 0.0:
            hi += width
        width *= 2.0
    if not bracketed:
        return math.nan  # caller raises ConvergenceError
    t = 0.5 * (lo + hi)
    for _ in range(200):
        s = 0.0
        sp = 0.0
        for i in range(n):
            e = math.exp(logy[i] - t * x[i])
            s += x[i] * e
            sp += x[i] * x[i] * e
        s -= sx
        if abs(s) <= 1e-10:
            return t
        if s > 0.0:
            lo = t
        else:
            hi = t
        t_new = t + s / sp  # score' = -sp
        if not (lo < t_new < hi):
            t_new = 0.5 * (lo + hi)
        if t_new == t or hi - lo <= _EPS * max(1.0, abs(t)):
            return t
        t = t_new
    return t
