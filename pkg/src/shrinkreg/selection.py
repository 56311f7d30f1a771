"""Choosing k: penalty weights and the threshold / minimum-MSE / distance rules."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .data import Dataset
from .diagnostics import condition_number_extended, vif_extended
from .errors import ConfigError
from .estimation import Spectral
from .grid import format_grid, validate_grid
from .risk import minimize_mse_grid

__all__ = [
    "Criterion",
    "PenaltyWeights",
    "SelectionResult",
    "weights_from_k",
    "alpha_distance",
    "select_k",
]


class Criterion(str, Enum):
    VIF_THRESHOLD = "vif_threshold"
    CN_THRESHOLD = "cn_threshold"
    MIN_MSE = "min_mse"
    ALPHA_DISTANCE = "alpha_distance"
    STABILITY_VISUAL = "stability_visual"

    @classmethod
    def parse(cls, name: str) -> "Criterion":
        aliases = {"vif": cls.VIF_THRESHOLD, "cn": cls.CN_THRESHOLD, "mse": cls.MIN_MSE, "distance": cls.ALPHA_DISTANCE}
        if name in aliases:
            return aliases[name]
        try:
            return cls(name)
        except ValueError:
            raise ConfigError(f"unknown criterion {name!r}") from None


DEFAULT_THRESHOLDS = {
    Criterion.VIF_THRESHOLD: 10.0,
    Criterion.CN_THRESHOLD: 20.0,
    Criterion.ALPHA_DISTANCE: 0.10,
}


@dataclass(frozen=True)
class PenaltyWeights:
    k1: float
    k2: float


def weights_from_k(k: float) -> PenaltyWeights:
    """Normalised weights on the residual and penalty terms, ``k1 + k2 = 1``."""
    if not (k >= 0 and math.isfinite(k)):
        raise ConfigError(f"k must be finite and >= 0, got {k}")
    return PenaltyWeights(1.0 / (1.0 + k), k / (1.0 + k))


def alpha_distance(data: Dataset, alpha, k: float, h: float, spectral: Spectral | None = None) -> float:
    """Relative gap ``||alpha - beta(k,h)|| / ||alpha||`` between target and estimate."""
    alpha = np.asarray(alpha, dtype=float)
    na = float(np.linalg.norm(alpha))
    if na == 0:
        raise ConfigError("alpha is the zero vector")
    sp = spectral if spectral is not None else Spectral(data)
    return float(np.linalg.norm(alpha - sp.beta(k, h, alpha)) / na)


@dataclass(frozen=True)
class SelectionResult:
    criterion: Criterion
    k_selected: float | None
    attained_value: float | None
    threshold: float | None
    grid: np.ndarray

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion.value,
            "k_selected": self.k_selected,
            "attained_value": self.attained_value,
            "threshold": self.threshold,
            "grid_spec": format_grid(self.grid),
        }


def _first_below(grid, fn, threshold):
    for k in grid:
        v = fn(float(k))
        if v < threshold:
            return float(k), float(v)
    return None, None


def select_k(
    data: Dataset,
    alpha,
    h: float,
    grid,
    criterion: Criterion | str,
    threshold: float | None = None,
    spectral: Spectral | None = None,
) -> SelectionResult:
    """Smallest grid k meeting ``criterion``; ``k_selected`` is ``None`` if none does.

    ``vif_threshold`` and ``cn_threshold`` ignore ``alpha`` and ``h``.
    ``min_mse`` delegates to :func:`minimize_mse_grid` with OLS plug-ins.
    ``stability_visual`` has no automatic rule; inspect a trace instead.
    """
    crit = criterion if isinstance(criterion, Criterion) else Criterion.parse(criterion)
    g = validate_grid(grid, min_points=1)
    if crit is Criterion.STABILITY_VISUAL:
        raise ConfigError("stability_visual is a visual rule; use the trace output to inspect coefficient paths")
    if crit is Criterion.MIN_MSE:
        gm = minimize_mse_grid(data, alpha, h, g, spectral=spectral)
        return SelectionResult(crit, gm.k_star, gm.mse_star, None, g)
    if threshold is None:
        threshold = DEFAULT_THRESHOLDS[crit]
    if crit is Criterion.VIF_THRESHOLD:
        fn = lambda k: float(vif_extended(data, k).max())  # noqa: E731
    elif crit is Criterion.CN_THRESHOLD:
        fn = lambda k: condition_number_extended(data, k)  # noqa: E731
    else:
        sp = spectral if spectral is not None else Spectral(data)
        fn = lambda k: alpha_distance(data, alpha, k, h, sp)  # noqa: E731
    k_sel, v = _first_below(g, fn, threshold)
    return SelectionResult(crit, k_sel, v, float(threshold), g)
