import numpy as np
import pytest

from shrinkreg import Dataset, PenaltyConfig, bootstrap
from shrinkreg.errors import ConfigError
from shrinkreg.inference import resample_rng, summarize


def test_resample_rng_pure():
    a = resample_rng(7, 3).integers(0, 100, 5)
    b = resample_rng(7, 3).integers(0, 100, 5)
    c = resample_rng(7, 4).integers(0, 100, 5)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


def test_deterministic(credit):
    a = bootstrap(credit, PenaltyConfig(0.08), m=200, seed=5)
    b = bootstrap(credit, PenaltyConfig(0.08), m=200, seed=5)
    np.testing.assert_array_equal(a.draws, b.draws)
    assert a.to_dict() == b.to_dict()


def test_workers_do_not_change_result(credit):
    a = bootstrap(credit, PenaltyConfig(0.04), m=300, seed=1)
    b = bootstrap(credit, PenaltyConfig(0.04), m=300, seed=1, workers=4)
    np.testing.assert_array_equal(a.draws, b.draws)


def test_identical_rows_degenerate():
    # intercept plus a regressor that never varies: every resample equals the sample
    X = np.column_stack([np.ones(5), np.full(5, 2.0)])
    d = Dataset(np.full(5, 3.0), X, ("(Intercept)", "x"))
    alpha = np.array([3.0, 0.0])
    res = bootstrap(d, PenaltyConfig(0.5, 1), m=20, seed=0, alpha=alpha)
    for s in res.summaries:
        assert s.sigma_theta == pytest.approx(0.0, abs=1e-12)
        assert s.interval_percentile[0] == pytest.approx(s.interval_percentile[1], abs=1e-12)
        assert s.interval_percentile[0] == pytest.approx(s.estimate, abs=1e-12)


def test_summary_structure(credit):
    res = bootstrap(credit, PenaltyConfig(0.08), m=500, seed=2)
    assert [s.statistic for s in res.summaries] == ["beta_1", "beta_2", "beta_3", "beta_4", "gof"]
    for j, s in enumerate(res.summaries):
        col = res.draws[:, j]
        lo, hi = s.interval_percentile
        assert col.min() <= lo <= hi <= col.max()
        mid = 0.5 * (s.interval_normal[0] + s.interval_normal[1])
        assert mid == pytest.approx(s.theta_bar)
        assert s.sigma_theta == pytest.approx(col.std(ddof=1))


def test_type7_quantile():
    s = summarize(np.arange(1.0, 11.0), "x", 0.0, 0)
    assert s.interval_percentile == pytest.approx((1.225, 9.775))


def test_recompute_policy_runs(credit):
    fixed = bootstrap(credit, PenaltyConfig(0.08), m=200, seed=3)
    rec = bootstrap(credit, PenaltyConfig(0.08), m=200, seed=3, alpha_policy="recompute")
    assert rec.alpha_policy.value == "recompute"
    assert not np.array_equal(fixed.draws, rec.draws)


def test_m_too_small(credit):
    with pytest.raises(ConfigError):
        bootstrap(credit, PenaltyConfig(0.08), m=1)


@pytest.mark.slow
@pytest.mark.parametrize("k", [0.01, 0.04, 0.07, 0.08])
def test_full_sample_inside_percentile_interval(credit, k):
    res = bootstrap(credit, PenaltyConfig(k, 1), m=10_000, seed=0)
    for s in res.summaries[:-1]:
        lo, hi = s.interval_percentile
        assert lo <= s.estimate <= hi


# zero inside (percentile, normal) interval per coefficient, reference verdicts
REFERENCE_ZERO = {
    (1, 0.01): [(True, True)] * 4,
    (1, 0.04): [(False, False), (False, False), (True, True), (True, True)],
    (1, 0.07): [(False, False), (False, False), (True, True), (False, True)],
    (1, 0.08): [(False, False), (False, False), (True, True), (False, False)],
    (0, 0.01): [(True, True)] * 4,
    (0, 0.02): [(True, True)] * 4,
    (0, 0.04): [(True, True)] * 4,
    (0, 0.08): [(True, True)] * 4,
}


@pytest.mark.slow
@pytest.mark.parametrize("h, k", list(REFERENCE_ZERO))
def test_zero_inclusion_matches_reference(credit, h, k):
    res = bootstrap(credit, PenaltyConfig(k, h), m=10_000, seed=0)
    got = [(s.zero_in_percentile, s.zero_in_normal) for s in res.summaries[:-1]]
    assert got == REFERENCE_ZERO[(h, k)]


@pytest.mark.slow
def test_interval_types_can_disagree(credit):
    # at k = 0.07 the beta_4 percentile interval excludes zero while the normal one does not
    s = bootstrap(credit, PenaltyConfig(0.07, 1), m=10_000, seed=0).summary("beta_4")
    assert not s.zero_in_percentile and s.zero_in_normal
