"""Monte Carlo engine: independent replications keyed by (master seed, index).

Replications are split into contiguous blocks; blocks may run in worker
processes, and results are reassembled by replication index, so the output
does not depend on the worker count.
"""
from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from typing import Callable, Sequence

import numpy as np

from ..distributions import parse_model
from ..errors import DataError

DEFAULT_MODELS = ("normal:0,1", "laplace:0,1")


def make_grid(spec) -> tuple[float, ...]:
    """Grid from an explicit list or ``{"start", "stop", "step"}`` (inclusive stop)."""
    if isinstance(spec, dict):
        try:
            start, stop, step = float(spec["start"]), float(spec["stop"]), float(spec["step"])
        except KeyError as exc:
            raise DataError(f"grid spec is missing {exc}") from None
        if step <= 0.0 or stop < start:
            raise DataError(f"bad grid spec {spec}")
        num = int(round((stop - start) / step)) + 1
        return tuple(float(v) for v in np.round(np.linspace(start, stop, num), 12))
    return tuple(float(v) for v in spec)


@dataclass
class MonteCarloConfig:
    models: tuple[str, ...] = DEFAULT_MODELS
    n: int = 1000
    replications: int = 500
    master_seed: int = 20240601
    h_grid: tuple[float, ...] = (0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0)
    z_values: tuple[float, ...] = (-0.5, 0.0, 0.5)
    tau_values: tuple[float, ...] = (0.25, 0.5, 0.75)
    prices: str | None = None
    workers: int | None = field(default=None, compare=False)

    def __post_init__(self):
        self.models = tuple(self.models)
        self.h_grid = make_grid(self.h_grid)
        self.z_values = tuple(float(z) for z in self.z_values)
        self.tau_values = tuple(float(t) for t in self.tau_values)
        if self.replications < 1:
            raise DataError("replications must be >= 1")
        if self.n < 2:
            raise DataError("n must be >= 2")
        h = np.asarray(self.h_grid)
        if h.size == 0 or np.any(h < 0.0) or np.any(np.diff(h) <= 0.0):
            raise DataError("h_grid must be nonnegative and strictly ascending")
        for spec in self.models:
            parse_model(spec)

    def parsed_models(self):
        """(label, model) pairs; the label is the model kind unless two models share it."""
        kinds = [spec.partition(":")[0].strip().lower() for spec in self.models]
        return [
            (kind if kinds.count(kind) == 1 else spec, parse_model(spec))
            for kind, spec in zip(kinds, self.models)
        ]

    @classmethod
    def from_dict(cls, data: dict, **defaults) -> "MonteCarloConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise DataError(f"unknown config keys: {sorted(unknown)}")
        merged = {**defaults, **data}
        return cls(**merged)

    @classmethod
    def from_json(cls, path, **defaults) -> "MonteCarloConfig":
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise DataError(f"cannot read config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise DataError("config must be a JSON object")
        return cls.from_dict(data, **defaults)


def default_workers() -> int:
    return os.cpu_count() or 1


def _run_block(model, n: int, master_seed: int, start: int, stop: int, statistic: Callable) -> np.ndarray:
    out = [np.asarray(statistic(model.sample(n, master_seed, stream=k)), dtype=float) for k in range(start, stop)]
    return np.vstack(out)


def replicate(model, n: int, replications: int, master_seed: int, statistic: Callable,
              workers: int | None = None) -> np.ndarray:
    """Apply ``statistic`` to ``replications`` independent samples; returns shape (R, k).

    ``statistic`` must be picklable (module-level function or partial) when
    ``workers > 1``.
    """
    workers = default_workers() if workers is None else max(1, int(workers))
    workers = min(workers, replications)
    if workers == 1:
        return _run_block(model, n, master_seed, 0, replications, statistic)
    bounds = np.linspace(0, replications, min(replications, 4 * workers) + 1).astype(int)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_run_block, model, n, master_seed, int(a), int(b), statistic)
            for a, b in zip(bounds[:-1], bounds[1:]) if b > a
        ]
        blocks = [f.result() for f in futures]
    return np.vstack(blocks)


def variance_se(x: Sequence[float]) -> float:
    """Standard error of the unbiased sample variance, from the fourth central moment."""
    x = np.asarray(x, dtype=float)
    R = x.size
    d = x - x.mean()
    s2 = d @ d / (R - 1)
    m4 = np.mean(d**4)
    return math.sqrt(max(m4 - s2**2 * (R - 3) / (R - 1), 0.0) / R)


def summarize(draws: np.ndarray, target: float) -> dict[str, float]:
    """Variance (unbiased), bias, MSE and the variance standard error across replications."""
    draws = np.asarray(draws, dtype=float)
    return {
        "mean": float(draws.mean()),
        "variance": float(draws.var(ddof=1)),
        "bias": float(draws.mean() - target),
        "mse": float(np.mean((draws - target) ** 2)),
        "variance_se": variance_se(draws),
    }
