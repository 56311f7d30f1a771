"""Nonparametric bootstrap of the penalized coefficients and goodness of fit."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .data import Dataset
from .errors import ConfigError, DegenerateColumnError, NotPositiveDefiniteError, ShrinkRegError
from .estimation import PenaltyConfig, compute_alpha
from .numerics import solve_spd

__all__ = ["AlphaPolicy", "BootstrapSummary", "BootstrapResult", "bootstrap", "resample_rng"]

Z975 = 1.96


class AlphaPolicy(str, Enum):
    FIXED = "fixed"
    RECOMPUTE = "recompute"


def resample_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for draw ``index``; a pure function of ``(seed, index)``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


@dataclass(frozen=True)
class BootstrapSummary:
    statistic: str
    m: int
    estimate: float
    theta_bar: float
    sigma_theta: float
    interval_normal: tuple[float, float]
    interval_percentile: tuple[float, float]
    seed: int

    @property
    def zero_in_percentile(self) -> bool:
        lo, hi = self.interval_percentile
        return lo <= 0.0 <= hi

    @property
    def zero_in_normal(self) -> bool:
        lo, hi = self.interval_normal
        return lo <= 0.0 <= hi

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "m": self.m,
            "estimate": self.estimate,
            "theta_bar": self.theta_bar,
            "sigma_theta": self.sigma_theta,
            "interval_normal": list(self.interval_normal),
            "interval_percentile": list(self.interval_percentile),
            "zero_in_normal": self.zero_in_normal,
            "zero_in_percentile": self.zero_in_percentile,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class BootstrapResult:
    config: PenaltyConfig
    alpha_policy: AlphaPolicy
    alpha: np.ndarray
    draws: np.ndarray
    summaries: tuple[BootstrapSummary, ...]
    redraws: int
    seed: int

    def summary(self, statistic: str) -> BootstrapSummary:
        for s in self.summaries:
            if s.statistic == statistic:
                return s
        raise KeyError(statistic)

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "alpha_policy": self.alpha_policy.value,
            "alpha": self.alpha.tolist(),
            "m": int(self.draws.shape[0]),
            "redraws": self.redraws,
            "seed": self.seed,
            "summaries": [s.to_dict() for s in self.summaries],
        }


def _fit_stats(X, y, alpha, k, h):
    p = X.shape[1]
    beta = solve_spd(X.T @ X + k * np.eye(p), X.T @ y + k * h * alpha)
    e = y - X @ beta
    return np.append(beta, 1.0 - (e @ e) / (y @ y))


def _one(data, alpha, policy, k, h, seed, r, cap):
    rng = resample_rng(seed, r)
    n = data.n
    for attempt in range(cap + 1):
        idx = rng.integers(0, n, size=n)
        X, y = data.X[idx], data.y[idx]
        try:
            a = alpha
            if policy is AlphaPolicy.RECOMPUTE:
                a = compute_alpha(Dataset(y, X, data.names))
            return _fit_stats(X, y, a, k, h), attempt
        except (NotPositiveDefiniteError, DegenerateColumnError):
            continue
    raise ShrinkRegError(f"resample {r}: no usable draw after {cap} redraws")


def summarize(values, name: str, estimate: float, seed: int) -> BootstrapSummary:
    v = np.asarray(values, dtype=float)
    mean = float(v.mean())
    sd = float(v.std(ddof=1))
    lo, hi = np.quantile(v, [0.025, 0.975], method="linear")
    return BootstrapSummary(
        name, v.size, float(estimate), mean, sd,
        (mean - Z975 * sd, mean + Z975 * sd), (float(lo), float(hi)), seed,
    )


def bootstrap(
    data: Dataset,
    config: PenaltyConfig,
    m: int = 10_000,
    seed: int = 0,
    alpha_policy: AlphaPolicy | str = AlphaPolicy.FIXED,
    alpha=None,
    workers: int = 1,
) -> BootstrapResult:
    """Row-resample ``(y, X)`` ``m`` times and refit at fixed ``(k, h)``.

    Parameters
    ----------
    data : Dataset
    config : PenaltyConfig
    m : int
        Number of resamples, at least 2.
    seed : int
        Resample ``r`` uses :func:`resample_rng` ``(seed, r)``, so results do
        not depend on ``workers``.
    alpha_policy : {"fixed", "recompute"}
        Keep the full-sample target, or recompute it inside each resample.
    alpha : array_like, optional
        Full-sample target; computed from ``data`` when omitted.
    workers : int
        Thread count for the resample loop.

    Returns
    -------
    BootstrapResult
        Summaries for ``beta_1 .. beta_p`` and ``gof``. Resamples whose shifted
        cross-product is singular are redrawn, at most ``10 m`` times in total.
    """
    if m < 2:
        raise ConfigError("m must be >= 2")
    policy = AlphaPolicy(alpha_policy)
    alpha = compute_alpha(data) if alpha is None else np.asarray(alpha, dtype=float)
    k, h = config.k, config.h
    full = _fit_stats(data.X, data.y, alpha, k, h)
    cap = 10 * m

    def chunk(rs):
        return [_one(data, alpha, policy, k, h, seed, r, cap) for r in rs]

    ranges = np.array_split(np.arange(m), max(1, workers))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(chunk, ranges))
    else:
        parts = [chunk(ranges[0])]
    results = [r for part in parts for r in part]
    draws = np.array([r[0] for r in results])
    redraws = int(sum(r[1] for r in results))
    if redraws > cap:
        raise ShrinkRegError(f"redraw cap {cap} exceeded")
    names = [f"beta_{i + 1}" for i in range(data.p)] + ["gof"]
    summaries = tuple(summarize(draws[:, j], names[j], full[j], seed) for j in range(len(names)))
    draws.setflags(write=False)
    return BootstrapResult(config, policy, alpha, draws, summaries, redraws, seed)
