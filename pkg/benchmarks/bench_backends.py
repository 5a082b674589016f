#!/usr/bin/env python3
"""Time the hot kernels on the numba backend against the numpy fallback.

Run from the repo root:

    python benchmarks/bench_backends.py

Numbers are best-of-3 wall times after a warm-up call (the warm-up also
absorbs JIT compilation). The generator kernel is bit-identical across
backends; the others agree to ~1e-13.
"""

import time

import numpy as np

from plausets import _kernels_numpy as knp

try:
    from plausets import _kernels_numba as knb
except ImportError:
    knb = None


def best_of(fn, repeats=3):
    fn()  # warm-up / compile
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    x_big = np.linspace(-6.0, 6.0, 1_000_000)
    p_big = np.linspace(1e-9, 1 - 1e-9, 1_000_000)
    g_big = np.linspace(0.01, 60.0, 1_000_000)
    xcov = np.arange(1.0, 11.0)
    logy = 1.0 * xcov + np.log(
        -np.log1p(-knp.uniform_block(42, 0, 10_000 * 10).reshape(10_000, 10))
    )
    return [
        ("uniform_block 1e6", lambda k: k.uniform_block(12345, 0, 1_000_000)),
        ("norm_cdf 1e6", lambda k: k.norm_cdf_arr(x_big)),
        ("norm_quantile 1e6", lambda k: k.norm_quantile_arr(p_big)),
        ("gammainc(a=12) 1e6", lambda k: k.gammainc_arr(12.0, g_big)),
        ("expreg_mle 1e4x10", lambda k: k.expreg_mle_block(logy, xcov)),
    ]


def main():
    rows = []
    for name, call in cases():
        t_np = best_of(lambda: call(knp))
        if knb is not None:
            t_nb = best_of(lambda: call(knb))
            rows.append((name, t_nb, t_np, t_np / t_nb))
        else:
            rows.append((name, float("nan"), t_np, float("nan")))

    header = f"{'kernel':<22}{'numba [ms]':>12}{'numpy [ms]':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, t_nb, t_np, speed in rows:
        nb = f"{t_nb * 1e3:.2f}" if knb is not None else "n/a"
        sp = f"{speed:.1f}x" if knb is not None else "n/a"
        print(f"{name:<22}{nb:>12}{t_np * 1e3:>12.2f}{sp:>10}")


if __name__ == "__main__":
    main()
