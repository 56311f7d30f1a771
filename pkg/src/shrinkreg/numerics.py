"""Dense symmetric linear algebra: Jacobi eigensolver, SPD solves, correlation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import ConvergenceError, DegenerateColumnError, NotPositiveDefiniteError

__all__ = [
    "EigenDecomposition",
    "eig_sym",
    "solve_spd",
    "inv_spd",
    "correlation_det",
]

SYM_TOL = 1e-10
JACOBI_TOL = 1e-12
MAX_SWEEPS = 100


@dataclass(frozen=True)
class EigenDecomposition:
    """``A = vectors @ diag(values) @ vectors.T`` with values sorted descending."""

    values: np.ndarray
    vectors: np.ndarray
    sweeps: int = 0

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.T

    @property
    def max(self) -> float:
        return float(self.values[0])

    @property
    def min(self) -> float:
        return float(self.values[-1])


def _check_symmetric(A):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(A)))) if A.size else 1.0
    if np.max(np.abs(A - A.T), initial=0.0) > SYM_TOL * scale:
        raise ValueError("matrix is not symmetric")
    return A


def _off_converged(a, tol):
    p = a.shape[0]
    d = np.abs(np.diag(a))
    for i in range(p - 1):
        for j in range(i + 1, p):
            if abs(a[i, j]) > tol * math.sqrt(d[i] * d[j]) and a[i, j] != 0.0:
                return False
    return True


def eig_sym(A, tol: float = JACOBI_TOL, max_sweeps: int = MAX_SWEEPS) -> EigenDecomposition:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps stop once every off-diagonal entry satisfies
    ``|a_ij| <= tol * sqrt(|a_ii a_jj|)``, a relative criterion that keeps
    small eigenvalues accurate when the spectrum spans many decades.

    Parameters
    ----------
    A : array_like of shape (p, p)
        Symmetric within 1e-10 (relative to its largest entry).
    tol : float
        Relative off-diagonal tolerance.
    max_sweeps : int
        Cap on full sweeps before :class:`ConvergenceError`.

    Returns
    -------
    EigenDecomposition
    """
    A = _check_symmetric(A)
    p = A.shape[0]
    a = 0.5 * (A + A.T)
    v = np.eye(p)
    sweeps = 0
    while not _off_converged(a, tol):
        if sweeps >= max_sweeps:
            raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")
        sweeps += 1
        for i in range(p - 1):
            for j in range(i + 1, p):
                aij = a[i, j]
                if aij == 0.0:
                    continue
                # rotation angle per Golub & Van Loan, Alg. 8.4.1
                theta = (a[j, j] - a[i, i]) / (2.0 * aij)
                t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(1.0 + theta * theta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                ai = a[:, i].copy()
                aj = a[:, j].copy()
                a[:, i] = c * ai - s * aj
                a[:, j] = s * ai + c * aj
                ri = a[i, :].copy()
                rj = a[j, :].copy()
                a[i, :] = c * ri - s * rj
                a[j, :] = s * ri + c * rj
                a[i, j] = a[j, i] = 0.0
                vi = v[:, i].copy()
                v[:, i] = c * vi - s * v[:, j]
                v[:, j] = s * vi + c * v[:, j]
    values = np.diag(a).copy()
    order = np.argsort(values)[::-1]
    return EigenDecomposition(values[order], v[:, order], sweeps)


def _as_spd_factor(A):
    A = _check_symmetric(A)
    try:
        factor = cho_factor(A, lower=True, check_finite=False)
    except np.linalg.LinAlgError:
        raise NotPositiveDefiniteError("matrix is not positive definite (non-positive pivot)") from None
    diag = np.diag(factor[0])
    if np.any(diag <= 0.0) or not np.all(np.isfinite(diag)):
        raise NotPositiveDefiniteError("matrix is not positive definite (non-positive pivot)")
    return factor


def solve_spd(A, b) -> np.ndarray:
    """Solve ``A x = b`` for symmetric positive definite ``A`` via Cholesky.

    ``b`` may be a vector or a matrix of right-hand sides.
    """
    factor = _as_spd_factor(A)
    return cho_solve(factor, np.asarray(b, dtype=float), check_finite=False)


def inv_spd(A) -> np.ndarray:
    """Inverse of an SPD matrix, built by solving against the identity columns."""
    A = np.asarray(A, dtype=float)
    inv = solve_spd(A, np.eye(A.shape[0]))
    return 0.5 * (inv + inv.T)


def correlation_det(X) -> tuple[np.ndarray, float]:
    """Pearson correlation matrix of the columns of ``X`` and its determinant.

    Parameters
    ----------
    X : array_like of shape (n, q)
        Regressors without the intercept, ``q >= 2``.

    Returns
    -------
    R : ndarray of shape (q, q)
    det : float
        Clipped to ``[0, 1]``; a singular correlation matrix yields 0.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] < 2:
        raise ValueError("need at least two columns")
    Xc = X - X.mean(axis=0)
    ss = np.einsum("ij,ij->j", Xc, Xc)
    scale = np.maximum(np.abs(X).max(axis=0), 1.0)
    if np.any(np.sqrt(ss) <= 1e-13 * scale * math.sqrt(X.shape[0])):
        raise DegenerateColumnError("constant column in correlation matrix")
    U = Xc / np.sqrt(ss)
    R = U.T @ U
    R = 0.5 * (R + R.T)
    np.fill_diagonal(R, 1.0)
    det = float(np.linalg.det(R))
    return R, min(1.0, max(0.0, det))
