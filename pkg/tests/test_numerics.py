import numpy as np
import pytest
from hypothesis import given, settings

from shrinkreg import NotPositiveDefiniteError, correlation_det, eig_sym, solve_spd
from shrinkreg.errors import ConvergenceError, DegenerateColumnError

from helpers import seeds


def test_identity():
    e = eig_sym(np.eye(3))
    np.testing.assert_allclose(e.values, [1, 1, 1])


def test_diagonal():
    e = eig_sym(np.diag([1.0, 4.0]))
    np.testing.assert_allclose(e.values, [4, 1])
    np.testing.assert_allclose(np.abs(e.vectors), [[0, 1], [1, 0]])


def test_credit_reconstruction(credit):
    A = credit.X.T @ credit.X
    e = eig_sym(A)
    assert np.linalg.norm(e.reconstruct() - A) / np.linalg.norm(A) < 1e-8
    np.testing.assert_allclose(e.vectors.T @ e.vectors, np.eye(4), atol=1e-10)
    # oracle: LAPACK; the tiny eigenvalue agrees to the LAPACK's own accuracy
    np.testing.assert_allclose(e.values, np.linalg.eigvalsh(A)[::-1], rtol=1e-6)


def test_nonsymmetric_rejected():
    with pytest.raises(ValueError):
        eig_sym(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_convergence_cap():
    rng = np.random.default_rng(1)
    M = rng.normal(size=(6, 6))
    with pytest.raises(ConvergenceError):
        eig_sym(M + M.T, max_sweeps=1)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_eig_properties(seed):
    rng = np.random.default_rng(seed)
    p = int(rng.integers(1, 8))
    M = rng.normal(size=(p, p)) * 10.0 ** rng.uniform(-3, 3)
    A = M + M.T
    e = eig_sym(A)
    scale = max(np.abs(A).max(), 1e-300)
    assert np.all(np.diff(e.values) <= 0)
    np.testing.assert_allclose(e.vectors.T @ e.vectors, np.eye(p), atol=1e-10)
    assert np.abs(e.reconstruct() - A).max() <= 1e-8 * scale
    assert abs(e.values.sum() - np.trace(A)) <= 1e-8 * max(1.0, np.abs(e.values).sum())
    np.testing.assert_allclose(e.values, np.linalg.eigvalsh(A)[::-1], atol=1e-9 * scale)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_psd_eigenvalues_nonnegative(seed):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(10, 4))
    X[:, 3] = X[:, 0] + X[:, 1]
    assert eig_sym(X.T @ X).values.min() >= -1e-10


def test_solve_identity():
    b = np.array([3.0, -1.0, 2.0])
    np.testing.assert_allclose(solve_spd(np.eye(3), b), b)


def test_solve_diagonal():
    np.testing.assert_allclose(solve_spd(np.diag([2.0, 5.0]), [2.0, 10.0]), [1.0, 2.0])


@pytest.mark.parametrize("A", [np.diag([1.0, -1.0]), np.zeros((2, 2)), np.array([[1.0, 2.0], [2.0, 1.0]])])
def test_solve_not_pd(A):
    with pytest.raises(NotPositiveDefiniteError):
        solve_spd(A, np.ones(2))


def _cofactor_inverse(A):
    p = A.shape[0]
    C = np.empty_like(A)
    for i in range(p):
        for j in range(p):
            minor = np.delete(np.delete(A, i, 0), j, 1)
            C[i, j] = (-1) ** (i + j) * (np.linalg.det(minor) if minor.size else 1.0)
    return C.T / np.linalg.det(A)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_solve_random_spd(seed):
    rng = np.random.default_rng(seed)
    p = int(rng.integers(1, 5))
    M = rng.normal(size=(p + 3, p))
    A = M.T @ M + 0.1 * np.eye(p)
    b = rng.normal(size=(p, 2)) if seed % 2 else rng.normal(size=p)
    x = solve_spd(A, b)
    assert np.linalg.norm(A @ x - b) / np.linalg.norm(b) < 1e-10
    np.testing.assert_allclose(x, _cofactor_inverse(A) @ b, rtol=1e-9, atol=1e-9)


def test_correlation_det_credit(credit):
    R, det = correlation_det(credit.regressors)
    np.testing.assert_allclose(np.diag(R), 1.0)
    assert det == pytest.approx(2.007699e-05, rel=1e-3)


def test_correlation_det_orthogonal():
    Z = np.array([[1, 1], [1, -1], [-1, 1], [-1, -1.0]])
    assert correlation_det(Z)[1] == pytest.approx(1.0, abs=1e-12)


def test_correlation_det_duplicate():
    rng = np.random.default_rng(0)
    z = rng.normal(size=20)
    assert correlation_det(np.column_stack([z, z, rng.normal(size=20)]))[1] == pytest.approx(0.0, abs=1e-10)


def test_correlation_constant():
    with pytest.raises(DegenerateColumnError):
        correlation_det(np.column_stack([np.ones(5), np.arange(5.0)]))


@settings(max_examples=50, deadline=None)
@given(seeds)
def test_correlation_det_scale_free(seed):
    rng = np.random.default_rng(seed)
    Z = rng.normal(size=(15, 3))
    s = rng.uniform(0.01, 100, 3)
    assert correlation_det(Z * s)[1] == pytest.approx(correlation_det(Z)[1], rel=1e-9, abs=1e-12)
    assert 0.0 <= correlation_det(Z)[1] <= 1.0
