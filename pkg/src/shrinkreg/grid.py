"""Parsing and validation of ``start:stop:step`` penalty grids."""

from __future__ import annotations

import math

import numpy as np

from .errors import ConfigError

__all__ = ["parse_grid", "format_grid", "validate_grid", "DEFAULT_GRID", "TRACE_GRID"]

DEFAULT_GRID = "0:1:0.01"
TRACE_GRID = "0:100:0.01"


def parse_grid(text: str) -> np.ndarray:
    """Expand ``start:stop:step`` into an inclusive, strictly increasing array.

    Points are computed as ``start + i * step`` and rounded to 12 decimals so
    that, e.g., the 8th point of ``0:1:0.01`` is exactly ``0.08``.

    >>> parse_grid("0:0.05:0.01").tolist()
    [0.0, 0.01, 0.02, 0.03, 0.04, 0.05]
    """
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(x) for x in parts)
    except ValueError:
        raise ConfigError(f"non-numeric grid {text!r}") from None
    if not all(math.isfinite(v) for v in (start, stop, step)):
        raise ConfigError(f"non-finite grid {text!r}")
    if step <= 0 or stop < start:
        raise ConfigError(f"grid needs step > 0 and stop >= start, got {text!r}")
    if start < 0:
        raise ConfigError("grid values must be >= 0")
    m = (stop - start) / step
    count = int(math.floor(m + 1e-9)) + 1
    if count > 10_000_000:
        raise ConfigError(f"grid {text!r} has too many points")
    return np.round(start + step * np.arange(count), 12)


def format_grid(grid) -> str:
    g = np.asarray(grid)
    if g.size >= 2:
        step = float(np.round(g[1] - g[0], 12))
        if np.allclose(np.diff(g), step, rtol=0, atol=1e-9):
            return f"{g[0]:g}:{g[-1]:g}:{step:g}"
    return ",".join(f"{v:g}" for v in g)


def validate_grid(grid, min_points: int = 1, from_zero: bool = False) -> np.ndarray:
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size < min_points:
        raise ConfigError(f"grid needs at least {min_points} point(s)")
    if not np.all(np.isfinite(g)) or np.any(g < 0):
        raise ConfigError("grid values must be finite and >= 0")
    if np.any(np.diff(g) <= 0):
        raise ConfigError("grid must be strictly increasing")
    if from_zero and g[0] != 0:
        raise ConfigError("grid must start at 0")
    return g
