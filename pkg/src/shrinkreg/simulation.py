"""Monte Carlo comparison of OLS, ridge and penalized MSE on collinear designs."""

from __future__ import annotations

import itertools
import math
import warnings
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .diagnostics import coefficient_of_variation, condition_number_extended, vif_extended
from .errors import ConfigError
from .estimation import Spectral, compute_alpha
from .grid import validate_grid
from .inference import resample_rng
from .risk import find_minima, mse_curve

__all__ = [
    "SimulationConfig",
    "DesignDraw",
    "SimulationRecord",
    "SimulationResult",
    "generate_design",
    "classify",
    "run_simulation",
    "CASES",
]

P_SET = (3, 4, 5, 6)
XI_SET = (0.96, 0.97, 0.98, 0.99)
MU_SET = (0, 2, -2, 4, -4, 6, -6, 8, -8, 10, -10)
SIGMA_SET = (0.01, 0.1, 5, 10, 15)
N_SET = tuple(range(30, 201, 10))
BETA_SET = (1, -1, 2, -2, 3, -3, 4, -4, 5, -5)
GRID_STEP = 0.01

# ordering of (P)enalized, (R)idge, (O)LS minimum MSE, smallest first
CASES = {"PRO": "A", "POR": "B", "RPO": "C", "ROP": "D", "OPR": "E", "ORP": "F"}
UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class SimulationConfig:
    """One cell of the design: sizes, collinearity level and regressor spread."""

    p: int
    xi: float
    sigma_w: float
    n: int

    def __post_init__(self):
        if self.p < 2:
            raise ConfigError("p must be >= 2")
        if not 0 < self.xi < 1:
            raise ConfigError("xi must lie in (0, 1)")
        if not self.sigma_w > 0:
            raise ConfigError("sigma_w must be > 0")
        if self.n <= self.p:
            raise ConfigError("n must exceed p")

    @staticmethod
    def factorial() -> list["SimulationConfig"]:
        """All 4 x 4 x 5 x 18 = 1440 combinations of the parameter sets."""
        return [SimulationConfig(*c) for c in itertools.product(P_SET, XI_SET, SIGMA_SET, N_SET)]

    @staticmethod
    def random(rng: np.random.Generator) -> "SimulationConfig":
        return SimulationConfig(
            int(rng.choice(P_SET)), float(rng.choice(XI_SET)), float(rng.choice(SIGMA_SET)), int(rng.choice(N_SET))
        )


@dataclass(frozen=True)
class DesignDraw:
    data: Dataset
    beta: np.ndarray
    mu: np.ndarray


def generate_design(config: SimulationConfig, rng: np.random.Generator) -> DesignDraw:
    """Draw one collinear design and response.

    ``W`` has ``p`` columns ``N(mu_j, sigma_w^2)`` with ``mu_j`` drawn per
    column; the last column is shared, so regressor ``i`` is
    ``sqrt(1 - xi^2) W_i + W_p`` and any two regressors have population
    correlation ``1 / (2 - xi^2)``. ``y = X beta + u`` with ``u ~ N(0, 1)``.
    """
    p, n = config.p, config.n
    mu = rng.choice(MU_SET, size=p).astype(float)
    W = rng.normal(mu, config.sigma_w, size=(n, p))
    Z = math.sqrt(1 - config.xi**2) * W[:, : p - 1] + W[:, [p - 1]]
    beta = rng.choice(BETA_SET, size=p).astype(float)
    X = np.column_stack([np.ones(n), Z])
    y = X @ beta + rng.standard_normal(n)
    return DesignDraw(Dataset.from_arrays(y, Z, source="simulation"), beta, mu)


def classify(mse_ols: float, mse_ridge: float | None, mse_pen: float | None) -> str:
    """Case label from the ordering of the three minimum MSEs."""
    if mse_ridge is None or mse_pen is None:
        return UNRESOLVED
    order = sorted([("P", mse_pen), ("R", mse_ridge), ("O", mse_ols)], key=lambda t: t[1])
    return CASES["".join(t[0] for t in order)]


@dataclass(frozen=True)
class SimulationRecord:
    index: int
    config: SimulationConfig
    grid_stop: float
    mse_ols: float
    mse_ridge_min: float | None
    k_ridge: float | None
    ridge_unique: bool
    mse_pen_min: float | None
    k_pen: float | None
    pen_unique: bool
    min_cv: float
    max_vif: float
    cn: float
    case: str

    def to_row(self) -> dict:
        return {
            "index": self.index,
            "p": self.config.p,
            "xi": self.config.xi,
            "sigma_w": self.config.sigma_w,
            "n": self.config.n,
            "grid_stop": self.grid_stop,
            "mse_ols": self.mse_ols,
            "mse_ridge_min": self.mse_ridge_min,
            "k_ridge": self.k_ridge,
            "ridge_unique": self.ridge_unique,
            "mse_pen_min": self.mse_pen_min,
            "k_pen": self.k_pen,
            "pen_unique": self.pen_unique,
            "min_cv": self.min_cv,
            "max_vif": self.max_vif,
            "cn": self.cn,
            "case": self.case,
        }


def _quartiles(v):
    v = np.asarray(v, dtype=float)
    v = v[np.isfinite(v)]
    if v.size == 0:
        return None
    q1, q3 = np.quantile(v, [0.25, 0.75])
    return {"q1": float(q1), "mean": float(v.mean()), "q3": float(q3)}


@dataclass
class SimulationResult:
    records: list[SimulationRecord]
    seed: int
    grid_stops: tuple[float, ...]
    replications: int | None = None

    def for_stop(self, stop: float) -> list[SimulationRecord]:
        return [r for r in self.records if r.grid_stop == stop]

    def counts(self, stop: float) -> dict[str, int]:
        c = Counter(r.case for r in self.for_stop(stop))
        return {lab: c.get(lab, 0) for lab in [*sorted(CASES.values()), UNRESOLVED]}

    def b_fraction(self, stop: float) -> float | None:
        c = self.counts(stop)
        resolved = sum(v for lab, v in c.items() if lab != UNRESOLVED)
        return c["B"] / resolved if resolved else None

    def profile(self, stop: float) -> dict:
        out = {}
        recs = self.for_stop(stop)
        for lab in [*sorted(CASES.values()), UNRESOLVED]:
            sub = [r for r in recs if r.case == lab]
            if not sub:
                continue
            out[lab] = {
                "count": len(sub),
                "min_cv": _quartiles([r.min_cv for r in sub]),
                "max_vif": _quartiles([r.max_vif for r in sub]),
                "cn": _quartiles([r.cn for r in sub]),
            }
        return out

    def aggregate(self) -> dict:
        total = len(self.for_stop(self.grid_stops[0]))
        return {
            "seed": self.seed,
            "designs": total,
            "grid_stops": list(self.grid_stops),
            "by_stop": {
                str(s): {
                    "counts": self.counts(s),
                    "percent": {k: 100.0 * v / total for k, v in self.counts(s).items()},
                    "b_fraction_resolved": self.b_fraction(s),
                    "profile": self.profile(s),
                }
                for s in self.grid_stops
            },
        }


def _replicate(index, config, seed, stops):
    rng = resample_rng(seed, index)
    if config is None:
        config = SimulationConfig.random(rng)
    draw = generate_design(config, rng)
    data = draw.data
    alpha = compute_alpha(data)
    sp = Spectral(data)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        min_cv = float(np.min(coefficient_of_variation(data.X)))
    max_vif = float(vif_extended(data, 0.0).max())
    cn = condition_number_extended(data, 0.0)
    out = []
    for stop in stops:
        grid = np.round(GRID_STEP * np.arange(int(round(stop / GRID_STEP)) + 1), 12)
        ridge = mse_curve(sp, alpha, 0.0, grid, draw.beta, 1.0)
        pen = mse_curve(sp, alpha, 1.0, grid, draw.beta, 1.0)
        ir, ip = find_minima(ridge), find_minima(pen)
        r_min = float(ridge[ir[0]]) if ir.size else None
        p_min = float(pen[ip[0]]) if ip.size else None
        out.append(
            SimulationRecord(
                index, config, float(stop), float(ridge[0]),
                r_min, float(grid[ir[0]]) if ir.size else None, ir.size == 1,
                p_min, float(grid[ip[0]]) if ip.size else None, ip.size == 1,
                min_cv, max_vif, cn, classify(float(ridge[0]), r_min, p_min),
            )
        )
    return out


def run_simulation(
    replications: int | None = None,
    seed: int = 0,
    grid_stops=(1.0,),
    workers: int = 1,
) -> SimulationResult:
    """Simulate designs, find MSE minima on ``[0, stop]`` grids and classify.

    Parameters
    ----------
    replications : int, optional
        ``None`` runs the full 1440-cell factorial once each; an integer draws
        that many cells at random from the parameter sets.
    seed : int
        Replication ``i`` uses ``resample_rng(seed, i)``.
    grid_stops : sequence of float
        Each replication is evaluated on every ``0:stop:0.01`` grid, with the
        same design, so unresolved counts are comparable across stops.
    workers : int
        Thread count.

    Notes
    -----
    MSE curves use the true coefficients and unit error variance; the target
    is estimated from the sample as in an applied fit.
    """
    stops = tuple(float(s) for s in grid_stops)
    if not stops:
        raise ConfigError("need at least one grid stop")
    for s in stops:
        validate_grid([0.0, GRID_STEP, s], min_points=3)
    if replications is None:
        cells: list[SimulationConfig | None] = list(SimulationConfig.factorial())
    else:
        if replications < 1:
            raise ConfigError("replications must be >= 1")
        cells = [None] * replications
    jobs = list(enumerate(cells))

    def run(chunk):
        return [rec for i, c in chunk for rec in _replicate(i, c, seed, stops)]

    if workers > 1:
        chunks = [jobs[i::workers] for i in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(run, chunks))
        records = sorted((r for part in parts for r in part), key=lambda r: (r.index, stops.index(r.grid_stop)))
    else:
        records = run(jobs)
    return SimulationResult(records, seed, stops, replications)
