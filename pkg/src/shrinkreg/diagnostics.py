"""Multicollinearity diagnostics: CV, VIF(i,k), CN(k) and the correlation determinant."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .data import Dataset, TransformMode, transform_columns
from .errors import ConfigError
from .numerics import correlation_det, eig_sym, solve_spd

__all__ = [
    "Thresholds",
    "DiagnosticsReport",
    "coefficient_of_variation",
    "vif_extended",
    "vif_auxiliary",
    "condition_number_extended",
    "full_report",
]


@dataclass(frozen=True)
class Thresholds:
    cv: float = 0.1002506
    vif: float = 10.0
    cn_moderate: float = 20.0
    cn_severe: float = 30.0
    det: float = 0.1013


THRESHOLDS = Thresholds()


def coefficient_of_variation(X) -> np.ndarray:
    """Population sd over absolute mean for each non-intercept column.

    A zero-mean column yields ``inf`` and a :class:`RuntimeWarning`.
    """
    X = np.asarray(X, dtype=float)
    Z = X[:, 1:]
    mean = Z.mean(axis=0)
    sd = Z.std(axis=0)
    out = np.empty_like(mean)
    zero = mean == 0.0
    if np.any(zero):
        warnings.warn(f"zero-mean column(s) {np.flatnonzero(zero) + 1}: CV is infinite", RuntimeWarning, stacklevel=2)
    out[zero] = np.inf
    out[~zero] = sd[~zero] / np.abs(mean[~zero])
    return out


def _standardized_regressors(data: Dataset) -> np.ndarray:
    return transform_columns(data.X, TransformMode.STANDARDIZE)[:, 1:]


def vif_extended(data: Dataset, k: float = 0.0) -> np.ndarray:
    """VIF(i,k) from the standardized design augmented with ``sqrt(k) I``.

    Each auxiliary regression is the no-intercept fit of augmented column i
    on the remaining augmented columns, with the uncentered R^2 of that fit.
    The closed form is ``VIF_i = (1 + k) [(X_s'X_s + kI)^{-1}]_{ii}``; at
    ``k = 0`` this is the classical VIF.
    """
    if not k >= 0:
        raise ConfigError(f"k must be >= 0, got {k}")
    Xs = _standardized_regressors(data)
    q = Xs.shape[1]
    if q == 1:
        return np.ones(1)
    M = Xs.T @ Xs + k * np.eye(q)
    diag = np.diag(solve_spd(M, np.eye(q)))
    return (1.0 + k) * diag


def vif_auxiliary(data: Dataset, k: float = 0.0, centered: bool = False) -> np.ndarray:
    """VIF(i,k) by explicitly running each auxiliary regression.

    ``centered=False`` matches :func:`vif_extended`. ``centered=True`` measures
    R^2 against the mean of the augmented dependent column instead, which is
    the other reading of the construction; both coincide at ``k = 0``.
    """
    Xs = _standardized_regressors(data)
    q = Xs.shape[1]
    XA = np.vstack([Xs, math.sqrt(k) * np.eye(q)])
    out = np.empty(q)
    for i in range(q):
        yi = XA[:, i]
        others = np.delete(XA, i, axis=1)
        if others.shape[1]:
            coef = solve_spd(others.T @ others, others.T @ yi)
            resid = yi - others @ coef
        else:
            resid = yi
        tss = yi @ yi if not centered else np.sum((yi - yi.mean()) ** 2)
        out[i] = tss / (resid @ resid)
    return out


def condition_number_extended(data: Dataset, k: float = 0.0) -> float:
    """CN(k) = sqrt((xi_max + k) / (xi_min + k)) on the unit-length design (intercept included)."""
    if not k >= 0:
        raise ConfigError(f"k must be >= 0, got {k}")
    XT = transform_columns(data.X, TransformMode.UNIT_LENGTH, skip_intercept=False)
    eig = eig_sym(XT.T @ XT)
    xi_min = max(eig.min, 0.0)
    if xi_min + k == 0:
        return math.inf
    return math.sqrt((eig.max + k) / (xi_min + k))


@dataclass(frozen=True)
class DiagnosticsReport:
    k: float
    cv: np.ndarray
    vif: np.ndarray
    cn: float
    corr_det: float
    thresholds: Thresholds = THRESHOLDS

    @property
    def verdicts(self) -> dict:
        t = self.thresholds
        finite_cv = self.cv[np.isfinite(self.cv)]
        return {
            "cv_troubling": bool(finite_cv.size and finite_cv.min() < t.cv),
            "vif_troubling": bool(self.vif.max() > t.vif),
            "cn_moderate": bool(self.cn > t.cn_moderate),
            "cn_severe": bool(self.cn > t.cn_severe),
            "det_troubling": bool(self.corr_det < t.det),
        }

    @property
    def essential(self) -> bool:
        v = self.verdicts
        return v["vif_troubling"] or v["cn_severe"] or v["det_troubling"]

    @property
    def nonessential(self) -> bool:
        return self.verdicts["cv_troubling"]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "cv": [None if not math.isfinite(c) else float(c) for c in self.cv],
            "vif": self.vif.tolist(),
            "max_vif": float(self.vif.max()),
            "cn": self.cn,
            "corr_det": self.corr_det,
            "thresholds": dict(self.thresholds.__dict__),
            "verdicts": self.verdicts,
        }


def full_report(data: Dataset, k: float = 0.0, thresholds: Thresholds = THRESHOLDS) -> DiagnosticsReport:
    """All measures at one ``k``; the correlation determinant needs two or more regressors."""
    cv = coefficient_of_variation(data.X)
    det = correlation_det(data.regressors)[1] if data.p > 2 else 1.0
    return DiagnosticsReport(k, cv, vif_extended(data, k), condition_number_extended(data, k), det, thresholds)
