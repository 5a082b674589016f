"""Backend selection for the hot numeric kernels.

Two interchangeable kernel modules exist:

* ``plausets._kernels_numba`` -- scalar loops compiled with ``numba.njit``
* ``plausets._kernels_numpy`` -- vectorized pure-numpy equivalents

The active backend is chosen once at import time from the environment
variable ``PLAUSETS_BACKEND``:

* ``auto`` (default): use numba when importable, else fall back to numpy
* ``numba``: require numba, raise if unavailable
* ``numpy``: force the pure-numpy path

Both backends produce bit-identical pseudorandom streams (the generator is
integer arithmetic); transcendental kernels agree to ~1e-14, which every
caller tolerance absorbs. ``benchmarks/bench_backends.py`` times one against
the other.
"""

from __future__ import annotations

import os


def _detect() -> tuple[str, object]:
    choice = os.environ.get("PLAUSETS_BACKEND", "auto").strip().lower()
    if choice not in {"auto", "numba", "numpy"}:
        raise RuntimeError(
            f"PLAUSETS_BACKEND={choice!r} not understood (use auto|numba|numpy)"
        )
    if choice in {"auto", "numba"}:
        try:
            from . import _kernels_numba as mod

            return "numba", mod
        except ImportError:
            if choice == "numba":
                raise RuntimeError(
                    "PLAUSETS_BACKEND=numba but numba is not importable"
                ) from None
    from . import _kernels_numpy as mod

    return "numpy", mod


BACKEND, kernels = _detect()


def using_numba() -> bool:
    return BACKEND == "numba"
