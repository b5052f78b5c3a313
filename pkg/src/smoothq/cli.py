"""Command-line front end.

Data goes to stdout (or ``--output``); diagnostics go to stderr.  Exit codes:
0 success, 1 data or numerical error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from . import asymptotics as asy
from .distributions import Sample, parse_model
from .errors import SmoothQError
from .estimators import default_bracket, mean_estimator, plugin_estimator, solve_empirical_at
from .experiments import EXPERIMENTS, MonteCarloConfig, default_config, load_returns, run_experiment
from .experiments.drivers import DEFAULTS
from .experiments.results import fmt
from .io import read_values
from .population import SmoothParams, dq_dh, dq_dz, line_z_unchecked, population_residual, solve_population, zm


def _float_in(lo: float, hi: float, name: str):
    def parse(text: str) -> float:
        try:
            v = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be a number, got {text!r}") from None
        if not lo < v < hi:
            raise argparse.ArgumentTypeError(f"{name} must lie in ({lo:g}, {hi:g}), got {text}")
        return v

    return parse


def _nonneg(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"h must be a number, got {text!r}") from None
    if not (math.isfinite(v) and v >= 0.0):
        raise argparse.ArgumentTypeError(f"h must be finite and >= 0, got {text}")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _seed(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


z_type = _float_in(-1.0, 1.0, "z")
tau_type = _float_in(0.0, 1.0, "tau")


def _json_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, (int, float)):
        return fmt(v)
    return json.dumps(str(v))


def render_record(record: dict, fmt_name: str) -> str:
    if fmt_name == "json":
        body = ",\n".join(f"  {json.dumps(k)}: {_json_value(v)}" for k, v in record.items())
        return "{\n" + body + "\n}\n"
    lines = ["key,value"]
    for k, v in record.items():
        if isinstance(v, bool):
            v = int(v)
        lines.append(f"{k},{fmt(v) if isinstance(v, (int, float)) else ('' if v is None else v)}")
    return "\n".join(lines) + "\n"


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_estimate(args) -> str:
    sample = Sample(read_values(args.data, args.column))
    if args.plugin_tau is not None:
        out, kind = plugin_estimator(sample, args.plugin_tau, args.h), "plugin"
    elif args.mean_family:
        out, kind = mean_estimator(sample, args.h), "mean_family"
    else:
        if args.z is None:
            raise SmoothQError("--z is required unless --plugin-tau or --mean-family is given")
        out, kind = solve_empirical_at(sample, args.z, args.h, default_bracket(sample)), "fixed"
    record = {
        "estimator": kind,
        "q_hat": out.q_hat,
        "z_used": out.z_used,
        "h": out.h,
        "tau_induced": out.tau_induced,
        "iterations": out.iterations,
        "n": sample.n,
        "ybar": sample.mean,
        "flag": out.flag,
    }
    return render_record(record, args.format)


def cmd_variance(args) -> str:
    model = parse_model(args.model)
    if args.z is not None:
        rep = asy.asym_variance(model, SmoothParams(args.z, args.h))
        record = {
            "z": args.z,
            "h": args.h,
            "q": rep.q,
            "tau": rep.tau,
            "score_var": rep.score_var,
            "slope": rep.slope,
            "asym_var": rep.asym_var,
            "classical_var": rep.classical_var,
            "ratio": rep.ratio,
        }
    else:
        tau = args.tau
        k = asy.line_coefficients(model, tau)
        regime = asy.classify_hstar(model, tau)
        z_line = line_z_unchecked(model, tau, args.h)
        record = {
            "tau": tau,
            "h": args.h,
            "line_z": z_line,
            "line_z_admissible": -1.0 < z_line < 1.0,
            "line_variance": k.variance(args.h),
            "classical_var": asy.plugin_variance(model, tau),
            "plugin_var": asy.plugin_variance(model, tau),
            "mean_family_var": asy.mean_family_variance(model),
            "a": k.a,
            "b": k.b,
            "c": k.c,
            "d": k.d,
            "regime": regime.case.value,
            "h_star": regime.h_star,
            "diagnostic": regime.diagnostic,
        }
    return render_record(record, args.format)


def cmd_population(args) -> str:
    model = parse_model(args.model)
    params = SmoothParams(args.z, args.h)
    sol = solve_population(model, params)
    record = {
        "z": args.z,
        "h": args.h,
        "q": sol.q,
        "tau": sol.tau,
        "score_slope": sol.score_slope,
        "residual": population_residual(model, sol.q, args.z, args.h),
        "dq_dh": dq_dh(model, params),
        "dq_dz": dq_dz(model, params),
        "zm": zm(model),
        "mean": model.mean(),
    }
    return render_record(record, args.format)


def cmd_experiment(args) -> str:
    overrides = {}
    for flag, key in (("seed", "master_seed"), ("workers", "workers"), ("replications", "replications"),
                      ("n", "n"), ("prices", "prices")):
        v = getattr(args, flag)
        if v is not None:
            overrides[key] = v
    if args.config:
        config = MonteCarloConfig.from_json(args.config, **DEFAULTS[args.name])
        if overrides:
            config = MonteCarloConfig.from_dict(
                {**{k: getattr(config, k) for k in config.__dataclass_fields__}, **overrides}
            )
    else:
        config = default_config(args.name, **overrides)
    return run_experiment(args.name, config).dump(args.format)


def cmd_ingest(args) -> str:
    series = load_returns(args.prices)
    print(f"ingest: {len(series.prices)} prices, {series.filled} filled, {series.n} returns", file=sys.stderr)
    if args.format == "csv":
        return series.to_csv()
    rows = []
    for i, (d, p) in enumerate(zip(series.dates, series.prices)):
        r = "null" if i == 0 else fmt(series.returns[i - 1])
        rows.append(f'{{"date": {json.dumps(d)}, "close": {fmt(p)}, "log_return": {r}}}')
    return "[\n  " + ",\n  ".join(rows) + "\n]\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="smoothq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def common(p, default="json"):
        p.add_argument("--format", choices=("json", "csv"), default=default, help=f"output format (default: {default})")
        p.add_argument("--output", "-o", metavar="PATH", help="write output to PATH instead of stdout")

    p = sub.add_parser("estimate", help="smoothed quantile estimate from data")
    p.add_argument("--data", required=True, metavar="CSV", help="observations, one numeric column")
    p.add_argument("--column", help="column name (default: 'value' or the first column)")
    p.add_argument("--z", type=z_type, help="level parameter in (-1, 1); ignored with --plugin-tau/--mean-family")
    p.add_argument("--h", type=_nonneg, required=True, help="smoothing parameter h >= 0")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--plugin-tau", type=tau_type, metavar="TAU", help="plug-in estimator of the TAU-quantile")
    mode.add_argument("--mean-family", action="store_true", help="mean-estimating family at this h")
    common(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("variance", help="asymptotic variance at (z, h) or along the tau line")
    p.add_argument("--model", required=True, help="normal:LOC,SCALE or laplace:LOC,SCALE")
    level = p.add_mutually_exclusive_group(required=True)
    level.add_argument("--z", type=z_type, help="report sigma^2(z, h) and the ratio R(z, h)")
    level.add_argument("--tau", type=tau_type, help="report v(tau, h), its coefficients and the h* regime")
    p.add_argument("--h", type=_nonneg, required=True, help="smoothing parameter h >= 0")
    common(p)
    p.set_defaults(func=cmd_variance)

    p = sub.add_parser("population", help="population solution q(z, h) and its derivatives")
    p.add_argument("--model", required=True, help="normal:LOC,SCALE or laplace:LOC,SCALE")
    p.add_argument("--z", type=z_type, required=True, help="level parameter in (-1, 1)")
    p.add_argument("--h", type=_nonneg, required=True, help="smoothing parameter h >= 0")
    common(p)
    p.set_defaults(func=cmd_population)

    p = sub.add_parser("experiment", help="run a numerical study and print a tidy table")
    p.add_argument("name", choices=EXPERIMENTS, help="which study")
    p.add_argument("--config", metavar="JSON", help="config file with MonteCarloConfig fields")
    p.add_argument("--seed", type=_seed, help="master seed (overrides the config)")
    p.add_argument("--workers", type=_positive_int, help="worker processes (default: all CPUs)")
    p.add_argument("--replications", type=_positive_int, help="Monte Carlo replications (overrides the config)")
    p.add_argument("--n", type=_positive_int, help="sample size (overrides the config)")
    p.add_argument("--prices", metavar="CSV", help="price file for 'realdata' (default: bundled synthetic series)")
    common(p, default="csv")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("ingest", help="clean a date,close price CSV and print log returns")
    p.add_argument("--prices", required=True, metavar="CSV", help="CSV with 'date' and 'close' columns")
    common(p, default="csv")
    p.set_defaults(func=cmd_ingest)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help or a usage error; argparse already printed
        return int(exc.code or 0)
    try:
        text = args.func(args)
        _write(text, args.output)
    except SmoothQError as exc:
        print(f"smoothq {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"smoothq {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
