"""Distribution functions and the reproducible counter-based generator.

Scalar API with strict domain validation; the array-valued equivalents used
by hot loops live in the backend kernel modules (see ``plausets._accel``).

The generator is counter-based (SplitMix64 avalanche over a per-stream key;
constants documented in ``plausets._special``), so a stream can be sampled
in blocks of any size, in any order, with identical results. States are
immutable values: every draw returns the value together with the advanced
state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _special
from ._accel import kernels
from .errors import DomainError

__all__ = [
    "RngState",
    "derive_stream",
    "derive_substream",
    "rng_uniform",
    "rng_uniforms",
    "rng_normal",
    "rng_normals",
    "rng_exponential",
    "rng_exponentials",
    "norm_cdf",
    "norm_quantile",
    "gamma_cdf",
    "gamma_quantile",
    "chisq_cdf",
    "chisq_quantile",
    "student_t_quantile",
    "logistic_cdf",
]


# ---------------------------------------------------------------------------
# Random number generation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RngState:
    """Immutable position inside one pseudorandom stream.

    ``key`` determines the stream, ``counter`` the next draw index. Equal
    ``(master_seed, stream_index)`` always reproduce the same sequence.
    """

    key: int
    counter: int
    master_seed: int
    stream_index: int

    def advanced(self, n: int) -> "RngState":
        return RngState(self.key, self.counter + n, self.master_seed, self.stream_index)


def derive_stream(master_seed: int, index: int) -> RngState:
    """Stream ``index`` of the family seeded by ``master_seed``.

    Injective in ``index`` for a fixed seed: the key is an avalanche of
    ``mix64(seed) + index * GOLDEN`` and both steps are bijections mod 2**64.
    """
    key = _special.stream_key_py(int(master_seed), int(index))
    return RngState(key, 0, int(master_seed), int(index))


def derive_substream(state: RngState, index: int) -> RngState:
    """Child stream ``index`` of ``state``'s stream (independent salt)."""
    key = _special.substream_key_py(state.key, int(index))
    return RngState(key, 0, state.master_seed, state.stream_index)


def rng_uniform(state: RngState) -> tuple[float, RngState]:
    """One draw strictly inside (0, 1)."""
    bits = _special.draw_bits_py(state.key, state.counter)
    return _special.bits_to_unit(bits), state.advanced(1)


def rng_uniforms(state: RngState, n: int) -> tuple[np.ndarray, RngState]:
    """Block of ``n`` uniforms; identical to ``n`` scalar draws."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    u = kernels.uniform_block(state.key, state.counter, int(n))
    return u, state.advanced(int(n))


def rng_normal(state: RngState) -> tuple[float, RngState]:
    """Standard normal by the inverse-CDF transform of one uniform."""
    u, state = rng_uniform(state)
    return _special.norm_quantile_s(u), state


def rng_normals(state: RngState, n: int) -> tuple[np.ndarray, RngState]:
    u, state = rng_uniforms(state, n)
    return kernels.norm_quantile_arr(u), state


def rng_exponential(state: RngState, mean: float = 1.0) -> tuple[float, RngState]:
    """Exponential with the given mean, via ``-mean * log(1 - u)``."""
    if mean <= 0:
        raise DomainError("mean must be positive")
    u, state = rng_uniform(state)
    return -mean * math.log1p(-u), state


def rng_exponentials(
    state: RngState, n: int, mean: float = 1.0
) -> tuple[np.ndarray, RngState]:
    if mean <= 0:
        raise DomainError("mean must be positive")
    u, state = rng_uniforms(state, n)
    return -mean * np.log1p(-u), state


# ---------------------------------------------------------------------------
# Distribution functions
# ---------------------------------------------------------------------------


def _check_prob_open(q: float, name: str = "q") -> float:
    q = float(q)
    if not (0.0 < q < 1.0):
        raise DomainError(f"{name} must lie strictly inside (0, 1); got {q!r}")
    return q


def norm_cdf(x: float) -> float:
    """Standard normal CDF."""
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"x must be finite; got {x!r}")
    return _special.norm_cdf_s(x)


def norm_quantile(q: float) -> float:
    """Inverse standard normal CDF on (0, 1)."""
    return _special.norm_quantile_s(_check_prob_open(q))


def gamma_cdf(t: float, shape: float, scale: float = 1.0) -> float:
    """Gamma CDF: regularized lower incomplete gamma at ``t / scale``."""
    t, shape, scale = float(t), float(shape), float(scale)
    if shape <= 0.0 or scale <= 0.0:
        raise DomainError("shape and scale must be positive")
    if not math.isfinite(t) or t < 0.0:
        raise DomainError(f"t must be finite and nonnegative; got {t!r}")
    return _special.gammainc_s(shape, t / scale)


def gamma_quantile(q: float, shape: float, scale: float = 1.0) -> float:
    """Inverse gamma CDF on (0, 1)."""
    q = _check_prob_open(q)
    shape, scale = float(shape), float(scale)
    if shape <= 0.0 or scale <= 0.0:
        raise DomainError("shape and scale must be positive")
    return scale * _special.gamma_quantile_s(q, shape)


def _check_df(df: int) -> int:
    if int(df) != df or df < 1:
        raise DomainError(f"df must be a positive integer; got {df!r}")
    return int(df)


def chisq_cdf(x: float, df: int) -> float:
    """Chi-square CDF: gamma with shape df/2, scale 2."""
    return gamma_cdf(x, 0.5 * _check_df(df), 2.0)


def chisq_quantile(q: float, df: int) -> float:
    return gamma_quantile(q, 0.5 * _check_df(df), 2.0)


def student_t_quantile(q: float, df: int) -> float:
    """Inverse Student-t CDF (incomplete-beta inversion)."""
    return _special.t_quantile_s(_check_prob_open(q), float(_check_df(df)))


def logistic_cdf(x: float) -> float:
    """Standard logistic CDF 1 / (1 + exp(-x))."""
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"x must be finite; got {x!r}")
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)
