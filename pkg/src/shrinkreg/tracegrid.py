"""Per-k traces of estimates, norms, fit, risk and diagnostics."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .data import Dataset, TransformMode, transform_columns
from .estimation import PenaltyConfig, Spectral
from .grid import format_grid, validate_grid
from .numerics import eig_sym
from .risk import mse_curve, plug_ins

__all__ = ["TraceGrid", "compute_trace"]


@dataclass(frozen=True)
class TraceGrid:
    """Columns of a trace; row ``j`` corresponds to ``k[j]``."""

    h: float
    k: np.ndarray
    beta: np.ndarray
    norm2: np.ndarray
    gof: np.ndarray
    mse: np.ndarray
    max_vif: np.ndarray
    cn: np.ndarray
    alpha_dist: np.ndarray
    dataset: str = ""

    @property
    def columns(self) -> list[str]:
        p = self.beta.shape[1]
        return ["k", *[f"beta_{i + 1}" for i in range(p)], "norm2", "gof", "mse", "max_vif", "cn", "alpha_dist"]

    def rows(self):
        for j in range(self.k.size):
            yield [
                float(self.k[j]), *map(float, self.beta[j]), float(self.norm2[j]), float(self.gof[j]),
                float(self.mse[j]), float(self.max_vif[j]), float(self.cn[j]), float(self.alpha_dist[j]),
            ]

    def to_csv(self, fh=None) -> str | None:
        out = fh if fh is not None else io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows():
            w.writerow([repr(v) for v in row])
        return None if fh is not None else out.getvalue()

    def metadata(self) -> dict:
        return {"dataset": self.dataset, "h": self.h, "grid_spec": format_grid(self.k), "rows": int(self.k.size)}


def compute_trace(data: Dataset, alpha, h: float, grid, beta_plug=None, sigma2: float | None = None) -> TraceGrid:
    """Evaluate every trace column on ``grid`` from two cached decompositions.

    ``X'X`` is decomposed once for estimates, fit and MSE; the standardized
    and unit-length cross-products are decomposed once for VIF(i,k) and CN(k).
    """
    g = validate_grid(grid, min_points=1)
    PenaltyConfig(0.0, h)
    alpha = np.asarray(alpha, dtype=float)
    sp = Spectral(data)
    G, lam = sp.vectors, sp.values
    rhs = (G.T @ sp.xty)[None, :] + g[:, None] * h * (G.T @ alpha)[None, :]
    beta = (rhs / (lam[None, :] + g[:, None])) @ G.T
    resid = data.y[None, :] - beta @ data.X.T
    gof = 1.0 - np.einsum("ij,ij->i", resid, resid) / (data.y @ data.y)
    if beta_plug is None or sigma2 is None:
        b, s2 = plug_ins(data)
        beta_plug = b if beta_plug is None else beta_plug
        sigma2 = s2 if sigma2 is None else sigma2
    mse = mse_curve(sp, alpha, h, g, beta_plug, sigma2)

    Xs = transform_columns(data.X, TransformMode.STANDARDIZE)[:, 1:]
    es = eig_sym(Xs.T @ Xs)
    # diag of (Xs'Xs + kI)^{-1} for every k at once
    inv_diag = (1.0 / (es.values[None, :] + g[:, None])) @ (es.vectors.T**2)
    max_vif = ((1.0 + g)[:, None] * inv_diag).max(axis=1)

    XT = transform_columns(data.X, TransformMode.UNIT_LENGTH, skip_intercept=False)
    eu = eig_sym(XT.T @ XT)
    with np.errstate(divide="ignore"):
        cn = np.sqrt((eu.max + g) / (max(eu.min, 0.0) + g))

    dist = np.linalg.norm(alpha[None, :] - beta, axis=1) / np.linalg.norm(alpha)
    return TraceGrid(
        float(h), g, beta, np.einsum("ij,ij->i", beta, beta), gof, mse, max_vif, cn, dist, data.source
    )
