import numpy as np
import pytest

from shrinkreg import Dataset, PenaltyConfig, compute_alpha, minimize_mse_grid, mse, mse_asymptote, parse_grid
from shrinkreg.errors import ConfigError
from shrinkreg.risk import Uniqueness, find_minima, plug_ins

from helpers import random_dataset

GRID = parse_grid("0:1:0.01")


@pytest.mark.parametrize(
    "k, h, expected",
    [
        (0.0, 1, 199.9497),
        (0.07, 1, 5.4749),
        (0.02, 0, 41.3225),
        (0.01, 1, 22.2729),
        (0.04, 1, 6.3279),
        (0.08, 1, 5.4808),
        (0.01, 0, 44.3756),
        (0.04, 0, 43.3614),
        (0.08, 0, 45.9795),
    ],
)
def test_mse_credit(credit, credit_alpha, k, h, expected):
    assert mse(credit, credit_alpha, PenaltyConfig(k, h)).total == pytest.approx(expected, rel=1e-3)


def test_mse_k0_has_no_bias(credit, credit_alpha):
    beta, s2 = plug_ins(credit)
    m = mse(credit, credit_alpha, PenaltyConfig(0.0), beta, s2)
    assert m.bias_term < 1e-18 * m.total
    assert m.total == pytest.approx(s2 * np.trace(np.linalg.inv(credit.X.T @ credit.X)), rel=1e-8)


def test_divisor_n_does_not_match(credit, credit_alpha):
    beta, s2 = plug_ins(credit, "n")
    assert abs(mse(credit, credit_alpha, PenaltyConfig(0.0), beta, s2).total - 199.9497) > 10


@pytest.mark.parametrize("h, k_star", [(1, 0.07), (0, 0.02)])
def test_grid_minimum_credit(credit, credit_alpha, h, k_star):
    gm = minimize_mse_grid(credit, credit_alpha, h, GRID)
    assert gm.k_star == k_star
    assert gm.uniqueness is Uniqueness.UNIQUE
    assert gm.to_dict()["grid_spec"] == "0:1:0.01"


def test_orthogonal_h1_no_interior_minimum():
    Z = np.array([[1, 1], [1, -1], [-1, 1], [-1, -1], [2, 0], [-2, 0.0]])
    d = Dataset.from_arrays(np.array([3.0, 1.0, 2.0, -1.0, 4.0, 0.5]), Z)
    gm = minimize_mse_grid(d, compute_alpha(d), 1, GRID)
    assert not gm.found and gm.uniqueness is Uniqueness.NONE and gm.mse_star is None


def test_asymptote_trivial():
    a = np.array([1.0, -2.0, 3.0])
    assert mse_asymptote(a, a, 1) == 0
    assert mse_asymptote(a, 2 * a, 0) == pytest.approx(4 * a @ a)


def test_asymptote_credit(credit, credit_alpha):
    beta, s2 = plug_ins(credit)
    far = mse(credit, credit_alpha, PenaltyConfig(1e8, 1), beta, s2).total
    assert far == pytest.approx(mse_asymptote(credit_alpha, beta, 1), rel=1e-3)


@pytest.mark.parametrize(
    "values, expected",
    [([3, 2, 3], [1]), ([3, 2, 2, 3], []), ([5, 4, 3], []), ([3, 1, 2, 0, 1], [1, 3]), ([1, 2, 1], [])],
)
def test_find_minima(values, expected):
    assert find_minima(values).tolist() == expected


def test_multiple_minima_reports_first(monkeypatch, credit, credit_alpha):
    import shrinkreg.risk as risk

    monkeypatch.setattr(risk, "mse_curve", lambda *a, **k: np.array([5.0, 3, 4, 2, 6]))
    gm = minimize_mse_grid(credit, credit_alpha, 1, [0, 0.1, 0.2, 0.3, 0.4])
    assert gm.k_star == 0.1 and gm.uniqueness is Uniqueness.MULTIPLE and gm.minima == (0.1, 0.3)


@pytest.mark.parametrize("grid", [[0.0, 0.1], [0.1, 0.2, 0.3], [0.0, 0.2, 0.1]])
def test_grid_preconditions(grid):
    d = random_dataset(0)
    with pytest.raises(ConfigError):
        minimize_mse_grid(d, compute_alpha(d), 1, grid)


def test_ridge_horizontal_asymptote(credit, credit_alpha):
    beta, s2 = plug_ins(credit)
    assert mse(credit, credit_alpha, PenaltyConfig(1e9, 0), beta, s2).total == pytest.approx(beta @ beta, rel=1e-3)
