"""Data-driven smoothed quantile estimators.

The empirical score

    Ψ̂(q; z, h) = 2F̂(q) - 1 + z + h (q - Ȳ)

is nondecreasing and right-continuous in q: linear with slope h between
consecutive order statistics and jumping upward at each of them.  Its
crossing point is located exactly, without iterating on q.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distributions import Sample
from .errors import DegenerateSampleError, NoRootError, OutOfRangeError
from .population import SmoothParams


@dataclass(frozen=True)
class EstimatorOutput:
    q_hat: float
    z_used: float
    h: float
    tau_induced: float
    iterations: int
    flag: str | None = None


@dataclass(frozen=True)
class HPath:
    h_grid: np.ndarray
    q_values: np.ndarray
    endpoints: tuple[float, float]

    @property
    def direction(self) -> int:
        """+1 if the path should rise toward Ȳ, -1 if it should fall, 0 if it starts at Ȳ."""
        q0, ybar = self.endpoints
        return int(np.sign(ybar - q0))

    def is_monotone(self) -> bool:
        d = np.diff(self.q_values)
        if self.direction > 0:
            return bool(np.all(d >= 0.0))
        if self.direction < 0:
            return bool(np.all(d <= 0.0))
        return bool(np.all(d == 0.0))


def _as_sample(data) -> Sample:
    return data if isinstance(data, Sample) else Sample(data)


def loss(u, z: float, h: float):
    """m(u; z, h) = |u| + z u + (h/2) u^2."""
    return np.abs(u) + z * u + 0.5 * h * np.square(u)


def objective(sample, q: float, z: float, h: float) -> float:
    s = _as_sample(sample)
    return float(np.mean(loss(q - s.values, z, h)))


def empirical_score(sample, q: float, z: float, h: float) -> float:
    s = _as_sample(sample)
    return 2.0 * s.ecdf(q) - 1.0 + z + h * (q - s.mean)


def default_bracket(sample) -> tuple[float, float]:
    """[min(Y) - 10 σ̂, max(Y) + 10 σ̂] with σ̂ the unbiased standard deviation."""
    s = _as_sample(sample)
    sd = s.std if s.n > 1 else 0.0
    return float(s.sorted[0] - 10.0 * sd), float(s.sorted[-1] + 10.0 * sd)


def solve_empirical_at(sample, z: float, h: float, bracket: tuple[float, float] | None = None) -> EstimatorOutput:
    """q̂(z, h) = inf{q : Ψ̂(q; z, h) >= 0}, for any real z.

    For h > 0 the crossing is either inside a flat-F̂ segment (solved
    linearly) or at the order statistic where the score jumps over zero.  For
    h = 0 this is the sample quantile of order (1 - z)/2; if z falls outside
    (-1, 1) the boundary order statistic is returned with a flag.
    """
    s = _as_sample(sample)
    if not (h >= 0.0 and math.isfinite(h)):
        raise OutOfRangeError(f"h must be finite and >= 0, got {h!r}")
    srt, F, n, ybar = s.sorted, s.ecdf_at_sorted, s.n, float(s.mean)
    flag = None

    if h > 0.0:
        def root(level: float) -> float:
            # zero of the linear piece on which F̂ equals `level`
            with np.errstate(over="ignore"):
                # tiny h sends the root to +-inf, which compares correctly
                return ybar + np.float64(1.0 - z - 2.0 * level) / h

        def crossed(k: int) -> bool:
            return srt[k] >= root(F[k])
    else:
        tau0 = 0.5 * (1.0 - z)

        def crossed(k: int) -> bool:
            return F[k] >= tau0

    lo, hi, iterations = 0, n, 0
    while lo < hi:
        iterations += 1
        mid = (lo + hi) // 2
        if crossed(mid):
            hi = mid
        else:
            lo = mid + 1
    k = lo

    if h > 0.0:
        if k == n:
            q = root(1.0)
        else:
            prev_level = F[k - 1] if k > 0 else 0.0
            q = min(root(prev_level), float(srt[k]))
    else:
        # k == n only when (1 - z)/2 > 1
        q = float(srt[min(k, n - 1)])
        if z <= -1.0:
            flag = "z <= -1 at h = 0: returned the largest order statistic"
        elif z >= 1.0:
            flag = "z >= 1 at h = 0: returned the smallest order statistic"

    if bracket is not None and not bracket[0] <= q <= bracket[1]:
        raise NoRootError(f"score root {q:.17g} lies outside the bracket [{bracket[0]:.6g}, {bracket[1]:.6g}]")
    return EstimatorOutput(
        q_hat=float(q), z_used=float(z), h=float(h), tau_induced=s.ecdf(q), iterations=iterations, flag=flag
    )


def solve_empirical(sample, params: SmoothParams, bracket: tuple[float, float] | None = None) -> EstimatorOutput:
    return solve_empirical_at(sample, params.z, params.h, bracket)


def sample_quantile(sample, tau: float) -> float:
    """inf{y : F̂(y) >= tau}."""
    return _as_sample(sample).quantile(tau)


def plugin_z(sample, tau: float, h: float) -> float:
    """ẑ(tau, h) = 1 - 2 tau + h (Ȳ - q̂(tau)); not clamped to (-1, 1)."""
    s = _as_sample(sample)
    return 1.0 - 2.0 * tau + h * (s.mean - s.quantile(tau))


def plugin_estimator(sample, tau: float, h: float) -> EstimatorOutput:
    s = _as_sample(sample)
    z = plugin_z(s, tau, h)
    if h == 0.0:
        q = s.quantile(tau)
        return EstimatorOutput(q_hat=q, z_used=z, h=0.0, tau_induced=s.ecdf(q), iterations=0)
    return solve_empirical_at(s, z, h)


def _mean_level(s: Sample) -> float:
    if s.n < 2:
        raise DegenerateSampleError("the mean-estimating family needs at least two observations")
    if s.sorted[0] == s.sorted[-1]:
        raise DegenerateSampleError("all observations are equal")
    tau = s.ecdf(s.mean)
    if not 0.0 < tau < 1.0:
        raise DegenerateSampleError(f"F̂(Ȳ) = {tau} is not inside (0, 1)")
    return tau


def mean_family_z(sample, h: float) -> float:
    """ẑ = 1 - 2F̂(Ȳ) + h (Ȳ - q̂(F̂(Ȳ)))."""
    s = _as_sample(sample)
    tau = _mean_level(s)
    return 1.0 - 2.0 * tau + h * (s.mean - s.quantile(tau))


def mean_estimator(sample, h: float) -> EstimatorOutput:
    s = _as_sample(sample)
    tau = _mean_level(s)
    z = 1.0 - 2.0 * tau + h * (s.mean - s.quantile(tau))
    if h == 0.0:
        q = s.quantile(tau)
        return EstimatorOutput(q_hat=q, z_used=z, h=0.0, tau_induced=s.ecdf(q), iterations=0)
    return solve_empirical_at(s, z, h)


def h_path(sample, z: float, h_grid, bracket: tuple[float, float] | None = None) -> HPath:
    s = _as_sample(sample)
    grid = np.asarray(h_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or grid[0] != 0.0 or np.any(np.diff(grid) <= 0.0):
        raise OutOfRangeError("h_grid must be strictly ascending and start at 0")
    q = np.array([solve_empirical_at(s, z, h, bracket).q_hat for h in grid])
    return HPath(h_grid=grid, q_values=q, endpoints=(float(q[0]), s.mean))
