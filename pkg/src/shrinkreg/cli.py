"""Command-line interface: ``shrinkreg <subcommand> [options]``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__
from .data import bundled_path, load_dataset, load_us_credit
from .diagnostics import full_report
from .errors import ConfigError, DataError, ShrinkRegError
from .estimation import PenaltyConfig, alpha_alpr, compute_alpha, fit_penalized
from .grid import DEFAULT_GRID, TRACE_GRID, parse_grid
from .inference import bootstrap
from .risk import minimize_mse_grid, mse, plug_ins
from .selection import Criterion, select_k
from .simulation import run_simulation
from .stability import DEFAULT_GAMMA_SHAPE, stability_analysis, stability_curve
from .tracegrid import compute_trace

THREADS_ENV = "SHRINKREG_THREADS"
EXIT_USAGE = 2
EXIT_IO = 7
EXIT_INTERNAL = 70


def _clean(obj):
    """Make numpy scalars/arrays JSON-native; non-finite floats become null."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj) -> str:
    # json emits floats with repr(), the shortest string that round-trips exactly
    return json.dumps(_clean(obj), indent=2, allow_nan=False) + "\n"


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return 1
    try:
        v = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if v < 1:
        raise ConfigError(f"{THREADS_ENV} must be >= 1")
    return v


def _load(args):
    if args.data is None:
        if args.dependent != "D":
            raise DataError(f"bundled dataset has dependent column 'D', not {args.dependent!r}")
        return load_us_credit()
    return load_dataset(args.data, args.dependent)


def _alpha(args, data):
    if getattr(args, "alpha", "simple") == "alpr":
        beta, _ = plug_ins(data)
        return alpha_alpr(data, beta)
    return compute_alpha(data)


def _run_config(args) -> dict:
    skip = {"func", "out"}
    cfg = {k: v for k, v in vars(args).items() if k not in skip}
    cfg["data"] = args.data if args.data is not None else str(bundled_path())
    return cfg


def _config(args) -> PenaltyConfig:
    if args.k1 is not None or args.k2 is not None:
        if args.k1 is None or args.k2 is None:
            raise ConfigError("--k1 and --k2 must be given together")
        return PenaltyConfig.from_two_k(args.k1, args.k2, args.h)
    return PenaltyConfig(args.k, args.h)


def _write(args, text: str):
    if args.out in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise _IOError(str(exc)) from exc


class _IOError(ShrinkRegError):
    exit_code = EXIT_IO


def _write_side(path, text):
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise _IOError(str(exc)) from exc


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(["" if v is None else repr(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


# subcommands


def cmd_fit(args):
    data = _load(args)
    alpha = _alpha(args, data)
    cfg = _config(args)
    fit = fit_penalized(data, alpha, cfg, divisor=args.sigma2_divisor)
    out = {
        "run_config": _run_config(args),
        "names": list(data.names),
        "alpha": alpha,
        "sigma2_hat": fit.sigma2_hat,
        **fit.to_json(),
    }
    if cfg.k1 is not None:
        out.update(k1=cfg.k1, k2=cfg.k2)
    if args.with_mse:
        beta, s2 = plug_ins(data, args.sigma2_divisor)
        out["mse"] = mse(data, alpha, cfg, beta, s2).to_dict()
    if args.dump:
        out["dataset"] = data.to_dict()
    _write(args, dumps(out))


def cmd_trace(args):
    data = _load(args)
    alpha = _alpha(args, data)
    tr = compute_trace(data, alpha, args.h, parse_grid(args.grid))
    if args.format == "csv":
        _write(args, tr.to_csv())
    else:
        _write(args, dumps({"run_config": _run_config(args), "meta": tr.metadata(), "columns": tr.columns, "rows": list(tr.rows())}))


def _table(rep, names) -> str:
    t = rep.thresholds
    rows = [(f"CV {nm}", c, f"< {t.cv}", c < t.cv) for nm, c in zip(names, rep.cv)]
    rows += [(f"VIF {nm}", v, f"> {t.vif:g}", v > t.vif) for nm, v in zip(names, rep.vif)]
    rows += [
        ("CN", rep.cn, f"> {t.cn_moderate:g}", rep.cn > t.cn_moderate),
        ("CN", rep.cn, f"> {t.cn_severe:g}", rep.cn > t.cn_severe),
        ("det(R)", rep.corr_det, f"< {t.det}", rep.corr_det < t.det),
    ]
    lines = [f"k = {rep.k:g}", f"{'measure':<16}{'value':>14}  {'threshold':>11}  flag"]
    lines += [f"{m:<16}{v:>14.6g}  {th:>11}  {'*' if hit else ''}" for m, v, th, hit in rows]
    return "\n".join(lines) + "\n"


def cmd_diagnose(args):
    data = _load(args)
    rep = full_report(data, args.k)
    if args.format == "table":
        _write(args, _table(rep, data.names[1:]))
    else:
        _write(args, dumps({"run_config": _run_config(args), **rep.to_dict()}))


def cmd_select_k(args):
    data = _load(args)
    alpha = _alpha(args, data)
    res = select_k(data, alpha, args.h, parse_grid(args.grid), Criterion.parse(args.criterion), args.threshold)
    out = {"run_config": _run_config(args), **res.to_dict()}
    if res.criterion is Criterion.MIN_MSE:
        gm = minimize_mse_grid(data, alpha, args.h, parse_grid(args.grid))
        out["uniqueness"] = gm.uniqueness.value
        out["minima"] = list(gm.minima)
    _write(args, dumps(out))


def cmd_bootstrap(args):
    data = _load(args)
    alpha = _alpha(args, data)
    res = bootstrap(data, _config(args), args.m, args.seed, args.alpha_policy, alpha, workers=args.threads)
    if args.draws_out:
        header = [*(f"beta_{i + 1}" for i in range(data.p)), "gof"]
        _write_side(args.draws_out, _csv(header, (list(map(float, r)) for r in res.draws)))
    _write(args, dumps({"run_config": _run_config(args), "names": list(data.names), **res.to_dict()}))


def cmd_stability(args):
    data = _load(args)
    kw = dict(alpha_policy=args.alpha_policy, direction=args.direction, gamma_shape=args.gamma_shape, workers=args.threads)
    if args.grid:
        curve = stability_curve(data, args.h, parse_grid(args.grid), args.iters, args.seed, **kw)
        _write(args, _csv(["k", "mean_percent_change"], curve))
        return
    rep = stability_analysis(data, _config(args), args.iters, args.seed, **kw)
    if args.values_out:
        _write_side(args.values_out, _csv(["iteration", "percent_change"], ((i, float(v)) for i, v in enumerate(rep.percent_changes))))
    _write(args, dumps({"run_config": _run_config(args), **rep.to_dict()}))


def cmd_simulate(args):
    stops = args.grid_stop or [1.0]
    res = run_simulation(args.replications, args.seed, stops, workers=args.threads)
    if args.records_out:
        rows = [r.to_row() for r in res.records]
        _write_side(args.records_out, _csv(list(rows[0]), (list(r.values()) for r in rows)))
    _write(args, dumps({"run_config": _run_config(args), **res.aggregate()}))


def _nonneg_float(s):
    v = float(s)
    if not (math.isfinite(v) and v >= 0):
        raise argparse.ArgumentTypeError(f"expected a finite value >= 0, got {s}")
    return v


def _h(s):
    v = float(s)
    if v not in (0.0, 1.0):
        raise argparse.ArgumentTypeError("h must be 0 or 1")
    return v


def _pos_int(s):
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


class _Parser(argparse.ArgumentParser):
    """Usage errors still print help text, followed by a JSON error object."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(json.dumps({"error": {"type": "UsageError", "message": message, "exit_code": EXIT_USAGE}}) + "\n")
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="shrinkreg", description="Regression shrunk toward simple-regression slopes.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--data", help="CSV file with a header row (default: bundled us_credit.csv)")
    common.add_argument("--dependent", default="D", help="dependent column label (default: D)")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--threads", type=_pos_int, default=None, help=f"worker cap (default: ${THREADS_ENV} or 1)")
    common.add_argument("--alpha", choices=["simple", "alpr"], default="simple", help="shrinkage target")

    pen = argparse.ArgumentParser(add_help=False)
    pen.add_argument("--k", type=_nonneg_float, default=0.0)
    pen.add_argument("--h", type=_h, default=1.0)
    pen.add_argument("--k1", type=float)
    pen.add_argument("--k2", type=float)

    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("fit", parents=[common, pen], help="fit at one (k, h)")
    p.add_argument("--sigma2-divisor", choices=["n-p", "n"], default="n-p")
    p.add_argument("--with-mse", action="store_true", help="include the MSE breakdown")
    p.add_argument("--dump", action="store_true", help="embed the dataset in the output")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("trace", parents=[common], help="estimates and diagnostics over a k grid")
    p.add_argument("--h", type=_h, default=1.0)
    p.add_argument("--grid", default=TRACE_GRID)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("diagnose", parents=[common], help="CV, VIF(i,k), CN(k), det(R)")
    p.add_argument("--k", type=_nonneg_float, default=0.0)
    p.add_argument("--format", choices=["json", "table"], default="json")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("select-k", parents=[common], help="choose k by a criterion")
    p.add_argument("--criterion", required=True, help="vif | cn | mse | distance (or the long names)")
    p.add_argument("--threshold", type=float)
    p.add_argument("--h", type=_h, default=1.0)
    p.add_argument("--grid", default=DEFAULT_GRID)
    p.set_defaults(func=cmd_select_k)

    p = sub.add_parser("bootstrap", parents=[common, pen, seeded], help="bootstrap intervals")
    p.add_argument("--m", type=int, default=10_000)
    p.add_argument("--alpha-policy", choices=["fixed", "recompute"], default="fixed")
    p.add_argument("--draws-out", help="CSV of every resample statistic")
    p.set_defaults(func=cmd_bootstrap)

    p = sub.add_parser("stability", parents=[common, pen, seeded], help="perturbation stability")
    p.add_argument("--iters", type=_pos_int, default=1000)
    p.add_argument("--alpha-policy", choices=["fixed", "recompute"], default="recompute")
    p.add_argument("--direction", choices=["gamma", "normal", "uniform"], default="gamma")
    p.add_argument("--gamma-shape", type=float, default=DEFAULT_GAMMA_SHAPE)
    p.add_argument("--grid", help="emit the mean-vs-k curve as CSV over this grid")
    p.add_argument("--values-out", help="CSV of per-iteration percent changes")
    p.set_defaults(func=cmd_stability)

    p = sub.add_parser("simulate", parents=[common, seeded], help="Monte Carlo MSE comparison")
    p.add_argument("--replications", type=_pos_int, help="random cells (default: full 1440-cell factorial)")
    p.add_argument("--grid-stop", type=float, action="append", help="grid upper end; repeatable (default 1)")
    p.add_argument("--records-out", help="CSV of per-replication records")
    p.set_defaults(func=cmd_simulate)
    return parser


def _error(exc_type: str, message: str, code: int) -> int:
    sys.stderr.write(json.dumps({"error": {"type": exc_type, "message": message, "exit_code": code}}) + "\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.threads is None:
            args.threads = _default_threads()
        args.func(args)
    except ShrinkRegError as exc:
        return _error(type(exc).__name__, str(exc), exc.exit_code)
    except ValueError as exc:
        return _error("ConfigError", str(exc), EXIT_USAGE)
    except Exception as exc:  # pragma: no cover - last-resort guard
        return _error(type(exc).__name__, str(exc), EXIT_INTERNAL)
    return 0


if __name__ == "__main__":
    sys.exit(main())
