"""Strict CSV dataset readers.

Formats: power-law = one ``time`` column; exponential regression = ``x,y``
columns; lognormal / location-scale = one ``y`` column of log-lifetimes.
Malformed rows abort with their line number.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError


def _rows(path, expected_header: str, n_cols: int):
    out: list[list[float]] = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != expected_header:
            raise DomainError(
                f"{path}: line 1: expected header {expected_header!r}, "
                f"got {header!r}"
            )
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != n_cols:
                raise DomainError(
                    f"{path}: line {lineno}: expected {n_cols} column(s), "
                    f"got {len(parts)}"
                )
            try:
                out.append([float(p) for p in parts])
            except ValueError:
                raise DomainError(
                    f"{path}: line {lineno}: could not parse {line!r}"
                ) from None
    if not out:
        raise DomainError(f"{path}: no data rows")
    return np.asarray(out, dtype=np.float64)


def read_powerlaw_csv(path) -> np.ndarray:
    """Event times from a one-column ``time`` file."""
    return _rows(path, "time", 1)[:, 0]


def read_expreg_csv(path) -> tuple[np.ndarray, np.ndarray]:
    """Covariate/response pairs from an ``x,y`` file."""
    data = _rows(path, "x,y", 2)
    return data[:, 0], data[:, 1]


def read_y_csv(path) -> np.ndarray:
    """Log-lifetimes from a one-column ``y`` file."""
    return _rows(path, "y", 1)[:, 0]
