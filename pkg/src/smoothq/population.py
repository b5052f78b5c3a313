"""Population solution q(z, h) of F(q) + (h/2) q = (1 - z + h m) / 2.

Also the constant-quantile line z(tau, h), the level z_m targeting the mean,
and the partial derivatives of q with respect to h and z.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

from .distributions import require_analytic
from .errors import NoRootError, OutOfRangeError

MAX_DOUBLINGS = 200


@dataclass(frozen=True)
class SmoothParams:
    z: float
    h: float

    def __post_init__(self):
        if not -1.0 < self.z < 1.0:
            raise OutOfRangeError(f"z must lie in (-1, 1), got {self.z!r}")
        if not (self.h >= 0.0 and math.isfinite(self.h)):
            raise OutOfRangeError(f"h must be finite and >= 0, got {self.h!r}")

    @property
    def tau0(self) -> float:
        """Quantile level (1 - z)/2 reached at h = 0."""
        return 0.5 * (1.0 - self.z)


@dataclass(frozen=True)
class PopulationSolution:
    q: float
    tau: float
    score_slope: float


def population_residual(model, q: float, z: float, h: float) -> float:
    return model.cdf(q) + 0.5 * h * q - 0.5 * (1.0 - z + h * model.mean())


def _solve_q(model, z: float, h: float) -> float:
    q0 = model.quantile(0.5 * (1.0 - z))
    if h == 0.0:
        return q0
    m = model.mean()
    g = lambda q: population_residual(model, q, z, h)  # noqa: E731
    lo, hi = min(q0, m) - 1.0, max(q0, m) + 1.0
    glo, ghi = g(lo), g(hi)
    width = hi - lo
    doublings = 0
    while glo > 0.0 or ghi < 0.0:
        doublings += 1
        if doublings > MAX_DOUBLINGS:
            raise NoRootError(f"no sign change for z={z}, h={h} after {MAX_DOUBLINGS} doublings")
        width *= 2.0
        if glo > 0.0:
            lo -= width
            glo = g(lo)
        if ghi < 0.0:
            hi += width
            ghi = g(hi)
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    return brentq(g, lo, hi, xtol=1e-14, maxiter=500)


def solve_population(model, params: SmoothParams) -> PopulationSolution:
    require_analytic(model)
    q = _solve_q(model, params.z, params.h)
    return PopulationSolution(q=q, tau=model.cdf(q), score_slope=2.0 * model.pdf(q) + params.h)


def line_z(model, tau: float, h: float) -> float:
    """z(tau, h) = 1 - 2 tau + h (m - F^-1(tau)); raises when it leaves (-1, 1)."""
    require_analytic(model)
    z = line_z_unchecked(model, tau, h)
    if z <= -1.0:
        raise OutOfRangeError(f"z(tau={tau}, h={h}) = {z:.6g} violates the lower bound z > -1")
    if z >= 1.0:
        raise OutOfRangeError(f"z(tau={tau}, h={h}) = {z:.6g} violates the upper bound z < 1")
    return z


def line_z_unchecked(model, tau: float, h: float) -> float:
    if h < 0.0:
        raise OutOfRangeError(f"h must be >= 0, got {h!r}")
    return 1.0 - 2.0 * tau + h * (model.mean() - model.quantile(tau))


def dq_dh(model, params: SmoothParams) -> float:
    sol = solve_population(model, params)
    return (model.mean() - sol.q) / sol.score_slope


def dq_dz(model, params: SmoothParams) -> float:
    sol = solve_population(model, params)
    return -1.0 / sol.score_slope


def zm(model) -> float:
    """Level z_m = 1 - 2 F(m) for which q(z_m, h) = m at every h."""
    require_analytic(model)
    return 1.0 - 2.0 * model.cdf(model.mean())
