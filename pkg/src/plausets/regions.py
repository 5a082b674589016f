"""Turn plausibility functions into concrete regions.

1-D regions come from bisecting the two flanks of a unimodal curve at the
threshold; 2-D regions are strict-inequality level-set masks on a grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ConvergenceError, DomainError

_GOLDEN_RATIO = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Interval1D:
    """An interval region at nominal threshold ``alpha``.

    ``open`` records the boundary convention: plausibility regions use the
    strict inequality pl > alpha, fixed-support regions are closed.
    Infinite endpoints mark one-sided regions.
    """

    lo: float
    hi: float
    alpha: float
    open: bool = True

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"need lo < hi; got ({self.lo}, {self.hi})")
        if not 0.0 < self.alpha < 1.0:
            raise DomainError("alpha must be in (0, 1)")

    def contains(self, theta: float) -> bool:
        if self.open:
            return self.lo < theta < self.hi
        return self.lo <= theta <= self.hi

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def csv_line(self) -> str:
        return f"{self.lo:.6f},{self.hi:.6f},{self.alpha:g}"


def _golden_max(f: Callable[[float], float], lo: float, hi: float,
                iters: int = 200) -> tuple[float, float]:
    """Golden-section maximum of a unimodal function on [lo, hi]."""
    a, b = lo, hi
    x1 = b - _GOLDEN_RATIO * (b - a)
    x2 = a + _GOLDEN_RATIO * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN_RATIO * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN_RATIO * (b - a)
            f1 = f(x1)
        if b - a <= 1e-14 * max(1.0, abs(a) + abs(b)):
            break
    if f1 >= f2:
        return x1, f1
    return x2, f2


def _bisect_crossing(f: Callable[[float], float], alpha: float,
                     below: float, above: float, tol: float) -> float:
    """Point where f crosses alpha between a sub- and a super-level point."""
    a, b = below, above
    for _ in range(400):
        if abs(b - a) <= tol:
            break
        m = 0.5 * (a + b)
        if f(m) > alpha:
            b = m
        else:
            a = m
    return 0.5 * (a + b)


def invert_unimodal(pl: Callable[[float], float], alpha: float,
                    bracket: tuple[float, float], tol: float = 1e-10,
                    maximizer: float | None = None) -> Interval1D:
    """Endpoints of {theta: pl(theta) > alpha} for a unimodal curve.

    ``bracket`` endpoints must lie strictly below the threshold; the caller
    widens and retries otherwise (see ``auto_bracket``). ``maximizer``, when
    known analytically, skips the golden-section search. Works on Monte
    Carlo step functions too: each returned endpoint then localizes the
    discrete jump within ``tol``.
    """
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise DomainError("bracket must satisfy lo < hi")
    if pl(lo) >= alpha or pl(hi) >= alpha:
        raise DomainError(
            "bracket endpoints must have pl below alpha; widen the bracket"
        )
    if maximizer is not None:
        xm = float(maximizer)
        if not lo < xm < hi:
            raise DomainError("maximizer must lie inside the bracket")
        fm = pl(xm)
    else:
        xm, fm = _golden_max(pl, lo, hi)
    if fm <= alpha:
        raise DomainError(
            f"empty region: maximum plausibility {fm:.3g} <= alpha {alpha:.3g}"
        )
    left = _bisect_crossing(pl, alpha, lo, xm, tol)
    right = _bisect_crossing(pl, alpha, hi, xm, tol)
    return Interval1D(left, right, alpha, open=True)


def auto_bracket(pl: Callable[[float], float], theta0: float, alpha: float,
                 support: tuple[float, float] = (-math.inf, math.inf),
                 max_steps: int = 200) -> tuple[float, float]:
    """Expand geometrically from the maximizer until pl < alpha/10 flanks it.

    Positive-support models expand multiplicatively, real-line models by
    doubling an additive step.
    """
    target = alpha / 10.0
    lo_sup, hi_sup = support
    multiplicative = lo_sup == 0.0 and math.isinf(hi_sup)

    def expand(direction: int) -> float:
        for k in range(max_steps):
            if multiplicative:
                point = theta0 * 2.0 ** (direction * (k + 1))
            else:
                point = theta0 + direction * 2.0 ** k
            if lo_sup < point < hi_sup and pl(point) < target:
                return point
        raise ConvergenceError(
            f"could not expand bracket {'up' if direction > 0 else 'down'} "
            f"from {theta0}"
        )

    return expand(-1), expand(+1)


@dataclass
class GridRegion2D:
    """Strict level-set mask {pl > alpha} on a rectangular grid.

    Axis 0 indexes the first parameter (``mu``), axis 1 the second
    (``sigma2`` for the lognormal model, the scale for location-scale).
    """

    bounds: tuple[float, float, float, float]  # mu_min, mu_max, s_min, s_max
    resolution: tuple[int, int]
    pl: np.ndarray
    mask: np.ndarray
    alpha: float
    boundary_cells: list[tuple[int, int]] = field(default_factory=list)

    def __post_init__(self):
        if self.mask.shape != tuple(self.resolution):
            raise DomainError("mask shape must match resolution")
        if self.pl.shape != tuple(self.resolution):
            raise DomainError("pl shape must match resolution")

    @property
    def mu_axis(self) -> np.ndarray:
        return np.linspace(self.bounds[0], self.bounds[1], self.resolution[0])

    @property
    def s_axis(self) -> np.ndarray:
        return np.linspace(self.bounds[2], self.bounds[3], self.resolution[1])

    def write_csv(self, path) -> None:
        mu = self.mu_axis
        s = self.s_axis
        with open(path, "w") as fh:
            fh.write("mu,sigma2,pl,inside\n")
            for i in range(self.resolution[0]):
                for j in range(self.resolution[1]):
                    fh.write(
                        f"{mu[i]:.12g},{s[j]:.12g},"
                        f"{self.pl[i, j]:.12g},{int(self.mask[i, j])}\n"
                    )


def _boundary_cells(mask: np.ndarray) -> list[tuple[int, int]]:
    """Inside cells with at least one 4-neighbor outside, in scan order."""
    inside = mask
    shrunk = inside.copy()
    shrunk[1:, :] &= inside[:-1, :]
    shrunk[:-1, :] &= inside[1:, :]
    shrunk[:, 1:] &= inside[:, :-1]
    shrunk[:, :-1] &= inside[:, 1:]
    edge = inside & ~shrunk
    return [tuple(ij) for ij in np.argwhere(edge)]


def evaluate_grid(pl2d: Callable[[np.ndarray, np.ndarray], np.ndarray],
                  alpha: float,
                  bounds: tuple[float, float, float, float],
                  resolution: tuple[int, int]) -> GridRegion2D:
    """Tabulate pl and its strict super-level mask on a grid window.

    No containment check: callers that need the level set fully inside the
    bounds go through ``extract_grid_region``.
    """
    nx, ny = int(resolution[0]), int(resolution[1])
    if nx < 32 or ny < 32:
        raise DomainError("resolution must be at least 32 per axis")
    mu_min, mu_max, s_min, s_max = map(float, bounds)
    if not (mu_min < mu_max and s_min < s_max):
        raise DomainError("bounds must be ordered")
    mu = np.linspace(mu_min, mu_max, nx)
    s = np.linspace(s_min, s_max, ny)
    mu_g, s_g = np.meshgrid(mu, s, indexing="ij")
    pl = np.asarray(pl2d(mu_g, s_g), dtype=np.float64)
    if pl.shape != (nx, ny):
        raise DomainError("pl2d must return an array matching the grid")
    mask = pl > alpha
    return GridRegion2D(
        bounds=(mu_min, mu_max, s_min, s_max),
        resolution=(nx, ny),
        pl=pl,
        mask=mask,
        alpha=float(alpha),
        boundary_cells=_boundary_cells(mask),
    )


def extract_grid_region(pl2d: Callable[[np.ndarray, np.ndarray], np.ndarray],
                        alpha: float,
                        bounds: tuple[float, float, float, float],
                        resolution: tuple[int, int] = (64, 64)) -> GridRegion2D:
    """Evaluate pl on the grid and keep the strict super-level mask.

    ``pl2d`` must accept broadcast (mu, sigma2) arrays. The mask must not
    touch the grid edge: that means the level set is clipped and the bounds
    need expanding.
    """
    region = evaluate_grid(pl2d, alpha, bounds, resolution)
    mask = region.mask
    if mask[0, :].any() or mask[-1, :].any() or mask[:, 0].any() or mask[:, -1].any():
        raise DomainError(
            "level set touches the grid edge; expand the bounds and retry"
        )
    return region


def region_area(region: GridRegion2D) -> float:
    """Cell-counting area estimate of the masked region."""
    nx, ny = region.resolution
    dx = (region.bounds[1] - region.bounds[0]) / (nx - 1)
    dy = (region.bounds[3] - region.bounds[2]) / (ny - 1)
    return float(region.mask.sum()) * dx * dy
