"""Shrinkage target, penalized fits, variance, goodness of fit and the augmented model.

The penalized estimator minimises ``e'e + k (b - h a)'(b - h a)`` and has the
closed form ``(X'X + kI)^{-1} (X'y + k h a)``. ``h = 0`` gives ridge and
``k = 0`` gives OLS.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .data import Dataset, TransformMode, transform_columns
from .errors import ConfigError, DegenerateColumnError, NotPositiveDefiniteError
from .numerics import EigenDecomposition, eig_sym, inv_spd, solve_spd

__all__ = [
    "PenaltyConfig",
    "FitResult",
    "AugmentedModel",
    "Spectral",
    "compute_alpha",
    "alpha_alpr",
    "fit_penalized",
    "fit_penalized_two_k",
    "fit_v_form",
    "ols_sigma2",
    "variance_covariance",
    "gof",
    "gof_numerator_form",
    "augment",
]

SIGMA2_DIVISORS = ("n-p", "n")


@dataclass(frozen=True)
class PenaltyConfig:
    """Penalty strength ``k >= 0`` and target switch ``h`` in {0, 1}.

    ``k1``/``k2`` optionally record the two-weight form, with ``k = k2 / k1``.
    """

    k: float
    h: float = 1.0
    k1: float | None = None
    k2: float | None = None

    def __post_init__(self):
        k = float(self.k)
        if not math.isfinite(k) or k < 0:
            raise ConfigError(f"k must be finite and >= 0, got {self.k}")
        if self.h not in (0, 1):
            raise ConfigError(f"h must be 0 or 1, got {self.h}")
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "h", float(self.h))
        if (self.k1 is None) != (self.k2 is None):
            raise ConfigError("k1 and k2 must be given together")
        if self.k1 is not None:
            if not self.k1 > 0:
                raise ConfigError(f"k1 must be > 0, got {self.k1}")
            if not self.k2 >= 0:
                raise ConfigError(f"k2 must be >= 0, got {self.k2}")
            if abs(k - self.k2 / self.k1) >= 1e-12 * max(1.0, k):
                raise ConfigError("k must equal k2 / k1")

    @classmethod
    def from_two_k(cls, k1: float, k2: float, h: float = 1.0) -> "PenaltyConfig":
        if not k1 > 0:
            raise ConfigError(f"k1 must be > 0, got {k1}")
        if not k2 >= 0:
            raise ConfigError(f"k2 must be >= 0, got {k2}")
        return cls(k=k2 / k1, h=h, k1=float(k1), k2=float(k2))

    def to_dict(self) -> dict:
        d = {"k": self.k, "h": self.h}
        if self.k1 is not None:
            d.update(k1=self.k1, k2=self.k2)
        return d


class Spectral:
    """Cached eigendecomposition of ``X'X`` for repeated shifted solves.

    ``(X'X + kI)^{-1} b = G diag(1/(l + k)) G' b`` costs O(p^2) per k once
    the decomposition is known.
    """

    def __init__(self, data: Dataset):
        self.data = data
        self.xtx = data.X.T @ data.X
        self.xty = data.X.T @ data.y
        self.eig: EigenDecomposition = eig_sym(self.xtx)

    @property
    def values(self) -> np.ndarray:
        return self.eig.values

    @property
    def vectors(self) -> np.ndarray:
        return self.eig.vectors

    def _check(self, k):
        if k < 0:
            raise ConfigError(f"k must be >= 0, got {k}")
        if np.any(self.values + k <= 0):
            raise NotPositiveDefiniteError(f"X'X + {k} I is not positive definite")

    def solve(self, k: float, b) -> np.ndarray:
        self._check(k)
        G = self.vectors
        d = self.values + k
        c = G.T @ b
        return G @ (c / d if c.ndim == 1 else c / d[:, None])

    def z(self, k: float) -> np.ndarray:
        """``Z(k) = (X'X + kI)^{-1}``."""
        self._check(k)
        G = self.vectors
        return (G / (self.values + k)) @ G.T

    def beta(self, k: float, h: float, alpha) -> np.ndarray:
        return self.solve(k, self.xty + k * h * np.asarray(alpha))

    def variance(self, k: float, sigma2: float) -> np.ndarray:
        self._check(k)
        G = self.vectors
        w = self.values / (self.values + k) ** 2
        return sigma2 * (G * w) @ G.T


def compute_alpha(data: Dataset) -> np.ndarray:
    """Shrinkage target: the mean of ``y`` and each simple-regression slope.

    ``alpha_i = cov(y, X_i) / var(X_i)`` with divisor-n moments, so that for
    centred orthogonal designs ``alpha`` coincides with the OLS coefficients.
    """
    y = data.y
    Z = data.regressors
    Zc = Z - Z.mean(axis=0)
    var = np.einsum("ij,ij->j", Zc, Zc) / data.n
    scale = np.maximum(np.abs(Z).max(axis=0), 1.0) ** 2
    bad = var <= 1e-28 * scale
    if np.any(bad):
        raise DegenerateColumnError(f"constant regressor(s): {np.flatnonzero(bad) + 1}")
    cov = Zc.T @ (y - y.mean()) / data.n
    return np.concatenate([[y.mean()], cov / var])


def alpha_alpr(data: Dataset, beta_ols) -> np.ndarray:
    """Common-value target ``d (d'X'Xd)^{-1} d'X'X beta`` with ``d`` the ones vector."""
    beta_ols = np.asarray(beta_ols, dtype=float)
    xtx = data.X.T @ data.X
    d = np.ones(data.p)
    denom = d @ xtx @ d
    if denom == 0:
        raise NotPositiveDefiniteError("d'X'Xd is zero")
    return d * ((d @ xtx @ beta_ols) / denom)


def ols_sigma2(data: Dataset, divisor: str = "n-p") -> float:
    """Residual variance of the OLS fit, ``e'e / (n - p)`` by default."""
    if divisor not in SIGMA2_DIVISORS:
        raise ConfigError(f"divisor must be one of {SIGMA2_DIVISORS}")
    beta = solve_spd(data.X.T @ data.X, data.X.T @ data.y)
    e = data.y - data.X @ beta
    dof = data.n - data.p if divisor == "n-p" else data.n
    return float(e @ e / dof)


def variance_covariance(data: Dataset, k: float, sigma2: float) -> np.ndarray:
    """``sigma2 Z(k) X'X Z(k)``; the target switch ``h`` does not enter."""
    if k < 0:
        raise ConfigError(f"k must be >= 0, got {k}")
    if not sigma2 > 0:
        raise ConfigError(f"sigma2 must be > 0, got {sigma2}")
    xtx = data.X.T @ data.X
    Z = inv_spd(xtx + k * np.eye(data.p))
    V = sigma2 * Z @ xtx @ Z
    return 0.5 * (V + V.T)


@dataclass(frozen=True)
class FitResult:
    config: PenaltyConfig
    beta: np.ndarray
    residuals: np.ndarray
    gof: float
    sigma2_hat: float
    se: np.ndarray
    names: tuple[str, ...] = ()

    @property
    def k(self) -> float:
        return self.config.k

    @property
    def h(self) -> float:
        return self.config.h

    @cached_property
    def residual_sum(self) -> float:
        return float(np.sum(self.residuals))

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "h": self.h,
            "beta": self.beta.tolist(),
            "se": self.se.tolist(),
            "gof": self.gof,
            "residual_sum": self.residual_sum,
        }


def gof(data: Dataset, fit: FitResult, alpha=None) -> float:
    """Goodness of fit ``1 - e'e / y'y``.

    ``alpha`` is accepted for signature symmetry with
    :func:`gof_numerator_form`; the residual form does not need it.
    """
    yty = float(data.y @ data.y)
    if yty <= 0:
        raise ConfigError("y'y must be positive")
    e = fit.residuals
    return 1.0 - float(e @ e) / yty


def gof_numerator_form(data: Dataset, beta, alpha, k: float, h: float) -> float:
    """``[b'(X'X + 2kI)b - 2kh b'a] / y'y``, algebraically equal to :func:`gof`."""
    beta = np.asarray(beta, dtype=float)
    xtx = data.X.T @ data.X
    num = beta @ xtx @ beta + 2 * k * beta @ beta - 2 * k * h * beta @ np.asarray(alpha)
    return float(num / (data.y @ data.y))


def _make_fit(data, config, beta, sigma2, spectral=None):
    beta = np.asarray(beta, dtype=float)
    e = data.y - data.X @ beta
    yty = float(data.y @ data.y)
    if yty <= 0:
        raise ConfigError("y'y must be positive")
    if spectral is not None:
        V = spectral.variance(config.k, sigma2)
    else:
        V = variance_covariance(data, config.k, sigma2)
    se = np.sqrt(np.clip(np.diag(V), 0.0, None))
    for a in (beta, e, se):
        a.setflags(write=False)
    return FitResult(config, beta, e, 1.0 - float(e @ e) / yty, sigma2, se, data.names)


def fit_penalized(
    data: Dataset,
    alpha,
    config: PenaltyConfig,
    sigma2: float | None = None,
    divisor: str = "n-p",
    spectral: Spectral | None = None,
) -> FitResult:
    """Penalized least squares ``(X'X + kI)^{-1}(X'y + k h alpha)``.

    Parameters
    ----------
    data : Dataset
    alpha : array_like of length p
        Shrinkage target, usually :func:`compute_alpha`.
    config : PenaltyConfig
    sigma2 : float, optional
        Error variance for the standard errors; defaults to the OLS plug-in
        with the given ``divisor``.
    spectral : Spectral, optional
        Cached decomposition of ``X'X``; when given the solve uses it instead
        of a fresh Cholesky factorisation.

    Returns
    -------
    FitResult
    """
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (data.p,):
        raise ConfigError(f"alpha must have length {data.p}")
    if sigma2 is None:
        sigma2 = ols_sigma2(data, divisor)
    k, h = config.k, config.h
    rhs = data.X.T @ data.y + k * h * alpha
    if spectral is not None:
        beta = spectral.solve(k, rhs)
    else:
        beta = solve_spd(data.X.T @ data.X + k * np.eye(data.p), rhs)
    return _make_fit(data, config, beta, sigma2, spectral)


def fit_penalized_two_k(data: Dataset, alpha, k1: float, k2: float, h: float = 1.0, **kw) -> FitResult:
    """Two-weight form ``k1 e'e + k2 (b - h a)'(b - h a)``; same minimiser as ``k = k2/k1``."""
    return fit_penalized(data, alpha, PenaltyConfig.from_two_k(k1, k2, h), **kw)


def fit_v_form(data: Dataset, k: float, h: float) -> np.ndarray:
    """Coefficients via ``(X'X + kI)^{-1} (I + k h V / n) X'y``, ``V = diag(1, n / sum x_i^2)``.

    Only valid when every regressor is centred; then ``alpha = V X'y / n``.
    """
    Z = data.regressors
    if not np.allclose(Z.mean(axis=0), 0.0, atol=1e-10 * max(1.0, float(np.abs(Z).max()))):
        raise ConfigError("V-form requires centred regressors")
    n = data.n
    v = np.concatenate([[1.0], n / np.einsum("ij,ij->j", Z, Z)])
    xty = data.X.T @ data.y
    rhs = xty + (k * h / n) * v * xty
    return solve_spd(data.X.T @ data.X + k * np.eye(data.p), rhs)


@dataclass(frozen=True)
class AugmentedModel:
    """Stacked design ``[X; sqrt(k) I]`` and response ``[y; sqrt(k) h alpha]``."""

    X_A: np.ndarray
    y_A: np.ndarray

    def ols(self) -> np.ndarray:
        return solve_spd(self.X_A.T @ self.X_A, self.X_A.T @ self.y_A)


def augment(data: Dataset, alpha, config: PenaltyConfig, transform: TransformMode | str | None = None) -> AugmentedModel:
    """Augmented model whose OLS solution is the penalized estimator."""
    X = data.X if transform is None else transform_columns(data.X, transform)
    r = math.sqrt(config.k)
    X_A = np.vstack([X, r * np.eye(data.p)])
    y_A = np.concatenate([data.y, r * config.h * np.asarray(alpha, dtype=float)])
    return AugmentedModel(X_A, y_A)
