"""numba-compiled hot kernels (scalar loops over the shared algorithms)."""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from . import _special

BACKEND_NAME = "numba"

_GOLDEN = np.uint64(_special.GOLDEN)
_SH11 = np.uint64(11)
_INV53 = 1.0 / (1 << 53)

_norm_quantile = njit(cache=True)(_special.norm_quantile_s)
_gammainc = njit(cache=True)(_special.gammainc_s)
_expreg_mle_row = njit(cache=True)(_special.expreg_mle_row)


@njit(cache=True)
def _mix64(z):
    z ^= z >> np.uint64(30)
    z *= np.uint64(0xBF58476D1CE4E5B9)
    z ^= z >> np.uint64(27)
    z *= np.uint64(0x94D049BB133111EB)
    z ^= z >> np.uint64(31)
    return z


@njit(cache=True)
def _uniform_block(key, start, n):
    out = np.empty(n, dtype=np.float64)
    for k in range(n):
        bits = _mix64(key + (start + np.uint64(k) + np.uint64(1)) * _GOLDEN)
        out[k] = (float(bits >> _SH11) + 0.5) * _INV53
    return out


def uniform_block(key: int, start: int, n: int) -> np.ndarray:
    return _uniform_block(np.uint64(key), np.uint64(start), np.int64(n))


@njit(cache=True)
def _norm_cdf_arr(x):
    out = np.empty_like(x)
    for i in range(x.shape[0]):
        out[i] = 0.5 * math.erfc(-x[i] / 1.4142135623730951)
    return out


def norm_cdf_arr(x: np.ndarray) -> np.ndarray:
    return _norm_cdf_arr(np.ascontiguousarray(x, dtype=np.float64))


@njit(cache=True)
def _norm_quantile_arr(p):
    out = np.empty_like(p)
    for i in range(p.shape[0]):
        out[i] = _norm_quantile(p[i])
    return out


def norm_quantile_arr(p: np.ndarray) -> np.ndarray:
    return _norm_quantile_arr(np.ascontiguousarray(p, dtype=np.float64))


@njit(cache=True)
def _gammainc_arr(a, x):
    out = np.empty_like(x)
    for i in range(x.shape[0]):
        out[i] = _gammainc(a, x[i])
    return out


def gammainc_arr(a: float, x: np.ndarray) -> np.ndarray:
    return _gammainc_arr(float(a), np.ascontiguousarray(x, dtype=np.float64))


@njit(cache=True)
def _expreg_mle_block(logy, x):
    out = np.empty(logy.shape[0], dtype=np.float64)
    for b in range(logy.shape[0]):
        out[b] = _expreg_mle_row(logy[b], x)
    return out


def expreg_mle_block(logy: np.ndarray, x: np.ndarray) -> np.ndarray:
    return _expreg_mle_block(
        np.ascontiguousarray(logy, dtype=np.float64),
        np.ascontiguousarray(x, dtype=np.float64),
    )
