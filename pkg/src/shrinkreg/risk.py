"""Mean squared error of the penalized estimator and the grid minimiser."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .data import Dataset
from .estimation import PenaltyConfig, Spectral, ols_sigma2, variance_covariance
from .grid import format_grid, validate_grid
from .numerics import solve_spd

__all__ = [
    "MseBreakdown",
    "GridMinimum",
    "Uniqueness",
    "mse",
    "s_term",
    "mse_curve",
    "mse_asymptote",
    "minimize_mse_grid",
    "plug_ins",
]


@dataclass(frozen=True)
class MseBreakdown:
    k: float
    h: float
    variance_term: float
    bias_term: float
    total: float
    ridge_mse: float
    s_term: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


class Uniqueness(str, Enum):
    NONE = "none"
    UNIQUE = "unique"
    MULTIPLE = "multiple"


@dataclass(frozen=True)
class GridMinimum:
    k_star: float | None
    mse_star: float | None
    uniqueness: Uniqueness
    grid: np.ndarray
    minima: tuple[float, ...] = ()

    @property
    def found(self) -> bool:
        return self.k_star is not None

    def to_dict(self) -> dict:
        return {
            "k_star": self.k_star,
            "mse_star": self.mse_star,
            "uniqueness": self.uniqueness.value,
            "grid_spec": format_grid(self.grid),
            "minima": list(self.minima),
        }


def plug_ins(data: Dataset, divisor: str = "n-p") -> tuple[np.ndarray, float]:
    """OLS coefficients and residual variance, the default stand-ins for the truth."""
    beta = solve_spd(data.X.T @ data.X, data.X.T @ data.y)
    return beta, ols_sigma2(data, divisor)


def _resolve(data, beta_plug, sigma2):
    if beta_plug is None or sigma2 is None:
        b, s = plug_ins(data)
        beta_plug = b if beta_plug is None else beta_plug
        sigma2 = s if sigma2 is None else sigma2
    return np.asarray(beta_plug, dtype=float), float(sigma2)


def _spectral_parts(spectral, alpha, beta, k):
    lam = spectral.values
    G = spectral.vectors
    b = G.T @ np.asarray(alpha, dtype=float)
    e = G.T @ beta
    w = (np.asarray(k, dtype=float)[..., None] / (lam + np.asarray(k, dtype=float)[..., None])) ** 2
    return lam, b, e, w


def s_term(spectral: Spectral, alpha, beta, k, h) -> np.ndarray | float:
    """Penalized-minus-ridge MSE gap from its spectral closed form.

    ``S = -2h sum e_i b_i k^2/(l_i+k)^2 + h^2 sum b_i^2 k^2/(l_i+k)^2`` with
    ``b = G'alpha`` and ``e = G'beta``.
    """
    _, b, e, w = _spectral_parts(spectral, alpha, np.asarray(beta, dtype=float), k)
    out = -2 * h * (w @ (e * b)) + h * h * (w @ (b * b))
    return float(out) if np.ndim(out) == 0 else out


def mse(
    data: Dataset,
    alpha,
    config: PenaltyConfig,
    beta_plug=None,
    sigma2: float | None = None,
    spectral: Spectral | None = None,
) -> MseBreakdown:
    """MSE = trace(var) + ||bias||^2, bias = (Z X'X - I) beta + k h Z alpha.

    ``beta_plug`` and ``sigma2`` default to the OLS estimates.
    """
    beta, s2 = _resolve(data, beta_plug, sigma2)
    alpha = np.asarray(alpha, dtype=float)
    k, h = config.k, config.h
    xtx = data.X.T @ data.X
    A = xtx + k * np.eye(data.p)
    var_term = float(np.trace(variance_covariance(data, k, s2)))
    ridge_bias = solve_spd(A, xtx @ beta) - beta
    bias = ridge_bias + k * h * solve_spd(A, alpha)
    bias_term = float(bias @ bias)
    ridge = var_term + float(ridge_bias @ ridge_bias)
    sp = spectral if spectral is not None else Spectral(data)
    return MseBreakdown(k, h, var_term, bias_term, var_term + bias_term, ridge, s_term(sp, alpha, beta, k, h))


def mse_curve(spectral: Spectral, alpha, h: float, grid, beta, sigma2: float) -> np.ndarray:
    """Vectorised total MSE over a k grid using the cached decomposition."""
    lam, b, e, w = _spectral_parts(spectral, alpha, np.asarray(beta, dtype=float), np.asarray(grid))
    k = np.asarray(grid, dtype=float)[:, None]
    var = sigma2 * np.sum(lam / (lam + k) ** 2, axis=1)
    bias = w @ ((e - h * b) ** 2)
    return var + bias


def mse_asymptote(alpha, beta_plug, h: float) -> float:
    """Large-k limit ``b'b - 2h b'a + h^2 a'a``."""
    a = np.asarray(alpha, dtype=float)
    b = np.asarray(beta_plug, dtype=float)
    return float(b @ b - 2 * h * b @ a + h * h * a @ a)


def find_minima(values) -> np.ndarray:
    """Indices ``j`` with ``v[j] < v[j-1]`` and ``v[j] < v[j+1]`` (interior points only)."""
    v = np.asarray(values)
    mid = v[1:-1]
    return np.flatnonzero((mid < v[:-2]) & (mid < v[2:])) + 1


def minimize_mse_grid(
    data: Dataset,
    alpha,
    h: float,
    grid,
    beta_plug=None,
    sigma2: float | None = None,
    spectral: Spectral | None = None,
) -> GridMinimum:
    """Scan interior grid points for strict local minima of the MSE curve.

    Returns the smallest-k minimum; ``uniqueness`` reports whether there were
    none, one or several. An absent minimum is a valid outcome.
    """
    g = validate_grid(grid, min_points=3, from_zero=True)
    PenaltyConfig(0.0, h)
    beta, s2 = _resolve(data, beta_plug, sigma2)
    sp = spectral if spectral is not None else Spectral(data)
    curve = mse_curve(sp, alpha, h, g, beta, s2)
    idx = find_minima(curve)
    if idx.size == 0:
        return GridMinimum(None, None, Uniqueness.NONE, g)
    j = int(idx[0])
    u = Uniqueness.UNIQUE if idx.size == 1 else Uniqueness.MULTIPLE
    return GridMinimum(float(g[j]), float(curve[j]), u, g, tuple(float(g[i]) for i in idx))
