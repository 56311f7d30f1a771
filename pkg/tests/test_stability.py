import numpy as np
import pytest
from hypothesis import given, settings

from shrinkreg import PenaltyConfig, perturb_vector, stability_analysis
from shrinkreg.errors import ConfigError
from shrinkreg.stability import stability_curve

from helpers import seeds


def test_perturb_345():
    np.testing.assert_allclose(perturb_vector([3.0, 4.0], [1.0, 0.0]), [3.05, 4.0])


def test_perturb_zero_x():
    np.testing.assert_array_equal(perturb_vector(np.zeros(3), [1.0, 2.0, 3.0]), np.zeros(3))


def test_perturb_zero_direction():
    with pytest.raises(ConfigError):
        perturb_vector([1.0, 2.0], [0.0, 0.0])


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_perturb_norm_identity(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 50))
    x = rng.normal(size=n) * 10.0 ** rng.uniform(-3, 3)
    p = rng.normal(size=n)
    d = perturb_vector(x, p) - x
    assert abs(np.linalg.norm(d) / np.linalg.norm(x) - 0.01) < 1e-12


def test_intercept_untouched(credit, monkeypatch):
    import shrinkreg.stability as st

    seen = []
    real = st.solve_spd

    def spy(A, b):
        seen.append(A)
        return real(A, b)

    monkeypatch.setattr(st, "solve_spd", spy)
    stability_analysis(credit, PenaltyConfig(0.0), iterations=3, seed=0)
    # (1,1) entry of X'X + kI is n + k only if the intercept column is still ones
    assert all(A[0, 0] == credit.n for A in seen)


def test_deterministic_and_worker_invariant(credit):
    a = stability_analysis(credit, PenaltyConfig(0.04), iterations=200, seed=9)
    b = stability_analysis(credit, PenaltyConfig(0.04), iterations=200, seed=9, workers=3)
    np.testing.assert_array_equal(a.percent_changes, b.percent_changes)
    assert a.to_dict() == b.to_dict()


def test_report_summaries(credit):
    r = stability_analysis(credit, PenaltyConfig(0.08), iterations=100, seed=1)
    assert np.all(r.percent_changes >= 0)
    assert r.mean == pytest.approx(r.percent_changes.mean())
    assert r.p025 <= r.mean <= r.p975


@pytest.mark.parametrize("direction", ["gamma", "normal", "uniform"])
@pytest.mark.parametrize("policy", ["recompute", "fixed"])
def test_options_run(credit, direction, policy):
    r = stability_analysis(credit, PenaltyConfig(0.04), iterations=20, seed=0, alpha_policy=policy, direction=direction)
    assert r.direction.value == direction and r.alpha_policy.value == policy


def test_bad_iterations(credit):
    with pytest.raises(ConfigError):
        stability_analysis(credit, PenaltyConfig(0.04), iterations=0)


def test_direction_shape_matters(credit):
    # scale-free formula, yet isotropic directions move the OLS fit far more than gamma ones
    g = stability_analysis(credit, PenaltyConfig(0.0), iterations=300, seed=0).mean
    n = stability_analysis(credit, PenaltyConfig(0.0), iterations=300, seed=0, direction="normal").mean
    assert n > 1.3 * g


@pytest.mark.slow
def test_monotone_in_k_h1(credit):
    curve = stability_curve(credit, 1, [0.0, 0.01, 0.04, 0.07, 0.08], iterations=1000, seed=0)
    means = [m for _, m in curve]
    assert all(a > b for a, b in zip(means, means[1:]))


@pytest.mark.slow
@pytest.mark.parametrize("k", [0.04, 0.08])
def test_penalized_steadier_than_ridge(credit, k):
    pen = stability_analysis(credit, PenaltyConfig(k, 1), iterations=1000, seed=0).mean
    ridge = stability_analysis(credit, PenaltyConfig(k, 0), iterations=1000, seed=0).mean
    assert pen <= ridge


@pytest.mark.slow
@pytest.mark.parametrize(
    "k, h, reference",
    [(0.01, 1, 29.86), (0.04, 1, 12.08), (0.07, 1, 8.31), (0.01, 0, 50.43), (0.02, 0, 36.40), (0.04, 0, 24.51)],
)
def test_other_reference_stability(credit, k, h, reference):
    assert stability_analysis(credit, PenaltyConfig(k, h), iterations=1000, seed=0).mean == pytest.approx(reference, rel=0.05)
