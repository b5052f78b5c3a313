"""Drivers for the numerical studies; each returns an :class:`ExperimentResult`."""
from __future__ import annotations

from functools import partial

import numpy as np

from ..asymptotics import asym_variance, limit_plugin_variance, plugin_variance
from ..distributions import Sample
from ..errors import OutOfRangeError
from ..estimators import default_bracket, h_path, mean_estimator, plugin_estimator, solve_empirical_at
from ..population import SmoothParams, line_z_unchecked
from .engine import MonteCarloConfig, replicate, summarize
from .results import ExperimentResult, scenario_key
from .returns import BUNDLED_PRICES, ReturnsSeries, load_returns

GRID_0_5 = {"start": 0.0, "stop": 5.0, "step": 0.1}
GRID_0_200 = {"start": 0.0, "stop": 200.0, "step": 0.5}
GRID_REALDATA = {"start": 0.0, "stop": 200.0, "step": 0.1}

DEFAULTS = {
    "1": dict(h_grid=GRID_0_5),
    "2": dict(h_grid={"start": 0.0, "stop": 20.0, "step": 0.1}),
    "2f": dict(h_grid=GRID_0_5, n=10_000),
    "3": dict(h_grid=(0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0), n=1000, replications=500, z_values=(0.5,)),
    "mono": dict(h_grid=GRID_0_200, n=5000, z_values=(0.5, 0.0, -0.5)),
    "realdata": dict(h_grid=GRID_REALDATA, z_values=(-0.5, 0.0, 0.5)),
}


def default_config(experiment: str, **overrides) -> MonteCarloConfig:
    return MonteCarloConfig.from_dict(overrides, **DEFAULTS[experiment])


def experiment1(config: MonteCarloConfig) -> ExperimentResult:
    """Efficiency ratio R(z, h) of q̂(z, h) against the sample quantile at tau(z, h)."""
    res = ExperimentResult("1")
    for label, model in config.parsed_models():
        for z in config.z_values:
            sc = scenario_key(model=label, z=z)
            for h in config.h_grid:
                rep = asym_variance(model, SmoothParams(z, h))
                res.add(sc, h, "smoothed", "ratio", rep.ratio)
                res.add(sc, h, "smoothed", "asym_var", rep.asym_var)
                res.add(sc, h, "classical", "asym_var", rep.classical_var)
                res.add(sc, h, "smoothed", "tau", rep.tau)
    return res


def experiment2(config: MonteCarloConfig) -> ExperimentResult:
    """sigma^2(h) against the plug-in variance at tau(z, h), its limit at F(m), and Var(Y)."""
    res = ExperimentResult("2")
    for label, model in config.parsed_models():
        var_y = model.variance()
        limit = limit_plugin_variance(model)
        res.add(scenario_key(model=label), 0.0, "summary", "var_y_minus_limit_plugin_var", var_y - limit)
        res.add(scenario_key(model=label), 0.0, "summary", "smoothed_wins_large_h", float(var_y < limit))
        for z in config.z_values:
            sc = scenario_key(model=label, z=z)
            for h in config.h_grid:
                rep = asym_variance(model, SmoothParams(z, h))
                res.add(sc, h, "smoothed", "asym_var", rep.asym_var)
                res.add(sc, h, "plugin", "asym_var", plugin_variance(model, rep.tau))
                res.add(sc, h, "plugin_limit", "asym_var", limit)
                res.add(sc, h, "sample_mean", "asym_var", var_y)
                res.add(sc, h, "smoothed", "tau", rep.tau)
    return res


def experiment2_finite(config: MonteCarloConfig) -> ExperimentResult:
    """Paths of q̂(z(tau,h), h) and q̂(ẑ(tau,h), h) on one sample per model."""
    res = ExperimentResult("2f")
    for idx, (label, model) in enumerate(config.parsed_models()):
        sample = model.sample(config.n, config.master_seed, stream=idx)
        for tau in config.tau_values:
            sc = scenario_key(model=label, tau=tau)
            target = model.quantile(tau)
            for h in config.h_grid:
                res.add(sc, h, "target", "value", target)
                z = line_z_unchecked(model, tau, h)
                res.add(sc, h, "fixed_line", "z", z)
                if -1.0 < z < 1.0:
                    res.add(sc, h, "fixed_line", "value", solve_empirical_at(sample, z, h).q_hat)
                else:
                    res.add(sc, h, "fixed_line", "skipped_out_of_range", z)
                out = plugin_estimator(sample, tau, h)
                res.add(sc, h, "plugin", "value", out.q_hat)
                res.add(sc, h, "plugin", "z", out.z_used)
    return res


def _exp3_statistic(sample: Sample, h_grid, z_values) -> np.ndarray:
    row = []
    for h in h_grid:
        row.append(sample.mean)
        row.extend(solve_empirical_at(sample, z, h).q_hat for z in z_values)
        row.append(mean_estimator(sample, h).q_hat)
    return np.array(row)


def experiment3(config: MonteCarloConfig) -> ExperimentResult:
    """Monte Carlo variance, bias and MSE of Ȳ, q̂(z, h) and the mean-estimating family."""
    res = ExperimentResult("3")
    k = len(config.z_values) + 2
    for label, model in config.parsed_models():
        stat = partial(_exp3_statistic, h_grid=config.h_grid, z_values=config.z_values)
        draws = replicate(model, config.n, config.replications, config.master_seed, stat, config.workers)
        m, var_y = model.mean(), model.variance()
        for j, h in enumerate(config.h_grid):
            block = draws[:, j * k:(j + 1) * k]
            columns = [("sample_mean", None, m, var_y, None)]
            for z in config.z_values:
                rep = asym_variance(model, SmoothParams(z, h))
                columns.append(("fixed_z", z, m, rep.asym_var, rep.q))
            columns.append(("mean_family", None, m, var_y, None))
            for col, (name, z, target, theory, q_pop) in enumerate(columns):
                sc = scenario_key(model=label) if z is None else scenario_key(model=label, z=z)
                summary = summarize(block[:, col], target)
                for stat_name, value in summary.items():
                    res.add(sc, h, name, stat_name, value)
                res.add(sc, h, name, "n_variance", config.n * summary["variance"])
                res.add(sc, h, name, "n_variance_se", config.n * summary["variance_se"])
                res.add(sc, h, name, "asym_var_theory", theory)
                if q_pop is not None:
                    res.add(sc, h, name, "population_q", q_pop)
    return res


def _path_rows(res: ExperimentResult, sc: str, path, sd: float) -> None:
    for h, q in zip(path.h_grid, path.q_values):
        res.add(sc, h, "q_hat", "value", q)
    q0, ybar = path.endpoints
    h_end = path.h_grid[-1]
    res.add(sc, 0.0, "summary", "q0", q0)
    res.add(sc, 0.0, "summary", "ybar", ybar)
    res.add(sc, 0.0, "summary", "sd", sd)
    res.add(sc, 0.0, "summary", "direction", path.direction)
    res.add(sc, 0.0, "summary", "monotone", float(path.is_monotone()))
    res.add(sc, 0.0, "summary", "max_abs_dev_from_ybar", float(np.max(np.abs(path.q_values - ybar))))
    res.add(sc, h_end, "summary", "terminal_gap", float(path.q_values[-1] - ybar))


def experiment_monotonicity(config: MonteCarloConfig) -> ExperimentResult:
    """Trajectories h -> q̂(z, h) for levels below, at and above the mean."""
    res = ExperimentResult("mono")
    for idx, (label, model) in enumerate(config.parsed_models()):
        sample = model.sample(config.n, config.master_seed, stream=idx)
        for z in config.z_values:
            sc = scenario_key(model=label, z=z, tau=0.5 * (1.0 - z))
            _path_rows(res, sc, h_path(sample, z, config.h_grid), sample.std)
    return res


def experiment_realdata(series: ReturnsSeries, config: MonteCarloConfig | None = None) -> ExperimentResult:
    """Paths of q̂(z, h) on log returns, solved inside [min - 10 σ̂, max + 10 σ̂]."""
    config = config or default_config("realdata")
    sample = Sample(series.returns)
    bracket = default_bracket(sample)
    res = ExperimentResult("realdata")
    ref = scenario_key(series="returns")
    res.add(ref, 0.0, "reference", "ybar", sample.mean)
    res.add(ref, 0.0, "reference", "n", sample.n)
    res.add(ref, 0.0, "reference", "filled", series.filled)
    res.add(ref, 0.0, "reference", "bracket_lo", bracket[0])
    res.add(ref, 0.0, "reference", "bracket_hi", bracket[1])
    for z in config.z_values:
        sc = scenario_key(series="returns", z=z)
        _path_rows(res, sc, h_path(sample, z, config.h_grid, bracket), sample.std)
    return res


def run_experiment(name: str, config: MonteCarloConfig) -> ExperimentResult:
    if name == "1":
        return experiment1(config)
    if name == "2":
        return experiment2(config)
    if name == "2f":
        return experiment2_finite(config)
    if name == "3":
        return experiment3(config)
    if name == "mono":
        return experiment_monotonicity(config)
    if name == "realdata":
        series = load_returns(config.prices or BUNDLED_PRICES)
        return experiment_realdata(series, config)
    raise OutOfRangeError(f"unknown experiment {name!r}")
