"""Closed-form asymptotic variances of the smoothed quantile family.

Notation: ``q = q(z, h)`` is the population solution, ``F``/``f`` the model
CDF/density, ``m`` the mean.  The score variance is

    B(z, h) = 4F(q)(1 - F(q)) + 2h[E|Y - q| - (m - q)(1 - 2F(q))] + h^2 Var(Y)

and ``sqrt(n)(q̂ - q)`` has limiting variance ``B / (2f(q) + h)^2``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .distributions import require_analytic
from .population import SmoothParams, line_z_unchecked, solve_population

_SIGN_RTOL = 1e-12


@dataclass(frozen=True)
class VarianceReport:
    score_var: float
    slope: float
    asym_var: float
    classical_var: float
    ratio: float
    tau: float
    q: float


@dataclass(frozen=True)
class LineCoefficients:
    """Coefficients of v(tau, h) = (a + b h + c h^2) / (d + h)^2."""

    a: float
    b: float
    c: float
    d: float

    def numerator(self, h: float) -> float:
        return self.a + h * (self.b + h * self.c)

    def variance(self, h: float) -> float:
        return self.numerator(h) / (self.d + h) ** 2

    def derivative(self, h: float) -> float:
        return ((2 * self.c * self.d - self.b) * h + (self.b * self.d - 2 * self.a)) / (self.d + h) ** 3


class Regime(str, enum.Enum):
    A = "A"  # smoothing never helps: v(tau, 0) is the minimum
    B = "B"  # v decreasing in h, infimum at h = infinity
    C = "C"  # finite interior minimiser h*


@dataclass(frozen=True)
class HStarRegime:
    case: Regime
    h_star: float | None = None
    diagnostic: str | None = None


def _score_variance_at(model, q: float, h: float) -> float:
    F = model.cdf(q)
    m = model.mean()
    cross = model.mean_abs_dev(q) - (m - q) * (1.0 - 2.0 * F)
    return 4.0 * F * (1.0 - F) + 2.0 * h * cross + h * h * model.variance()


def score_variance(model, params: SmoothParams) -> float:
    """B(z, h), the variance of psi(q(z,h) - Y; z, h)."""
    require_analytic(model)
    sol = solve_population(model, params)
    return _score_variance_at(model, sol.q, params.h)


def asym_variance(model, params: SmoothParams) -> VarianceReport:
    require_analytic(model)
    sol = solve_population(model, params)
    B = _score_variance_at(model, sol.q, params.h)
    asym = B / sol.score_slope**2
    # Benchmark: the sample quantile of the same population level tau(z, h).
    classical = sol.tau * (1.0 - sol.tau) / model.pdf(sol.q) ** 2
    return VarianceReport(
        score_var=B,
        slope=sol.score_slope,
        asym_var=asym,
        classical_var=classical,
        ratio=asym / classical,
        tau=sol.tau,
        q=sol.q,
    )


def line_coefficients(model, tau: float) -> LineCoefficients:
    require_analytic(model)
    q = model.quantile(tau)
    m = model.mean()
    return LineCoefficients(
        a=4.0 * tau * (1.0 - tau),
        b=2.0 * (model.mean_abs_dev(q) - (m - q) * (1.0 - 2.0 * tau)),
        c=model.variance(),
        d=2.0 * model.pdf(q),
    )


def line_variance(model, tau: float, h: float) -> float:
    """v(tau, h), defined through the coefficients even where z(tau, h) leaves (-1, 1)."""
    return line_coefficients(model, tau).variance(h)


def _sign(x: float, scale: float) -> int:
    if abs(x) <= _SIGN_RTOL * scale:
        return 0
    return 1 if x > 0 else -1


def classify_hstar(model, tau: float) -> HStarRegime:
    """Classify h -> v(tau, h) by the sign pattern of its derivative."""
    return classify_coefficients(line_coefficients(model, tau))


def classify_coefficients(k: LineCoefficients) -> HStarRegime:
    """Regime of v = (a + bh + ch^2)/(d + h)^2.

    The derivative numerator is linear in h: (bd - 2a) + (2cd - b) h.  Signs
    within a relative 1e-12 of zero are treated as exact zeros.
    """
    s0 = _sign(k.b * k.d - 2 * k.a, max(abs(k.b * k.d), 2 * k.a))
    s1 = _sign(2 * k.c * k.d - k.b, max(2 * k.c * k.d, abs(k.b)))

    if s0 < 0 and s1 > 0:
        return HStarRegime(Regime.C, (2 * k.a - k.b * k.d) / (2 * k.c * k.d - k.b))
    if s0 < 0:
        return HStarRegime(Regime.B)
    if s0 > 0 and s1 >= 0:
        return HStarRegime(Regime.A)
    if s0 > 0:
        # Derivative changes sign from + to -: an interior maximum, so the
        # minimum sits at one of the ends, h = 0 or h -> infinity.
        h_max = (k.b * k.d - 2 * k.a) / (k.b - 2 * k.c * k.d)
        case = Regime.A if k.variance(0.0) <= k.c else Regime.B
        return HStarRegime(case, None, f"interior maximum at h={h_max:.17g}")
    # bd - 2a == 0: v is flat at h = 0 and then follows the sign of 2cd - b.
    if s1 > 0:
        return HStarRegime(Regime.A, None, "boundary: bd - 2a = 0, v nondecreasing")
    if s1 < 0:
        return HStarRegime(Regime.B, None, "boundary: bd - 2a = 0, v nonincreasing")
    return HStarRegime(Regime.A, None, "flat derivative: bd - 2a = 0 and 2cd - b = 0")


def plugin_variance(model, tau: float) -> float:
    """tau(1 - tau) / f(F^-1(tau))^2, the limit of the plug-in estimator for every h."""
    require_analytic(model)
    return tau * (1.0 - tau) / model.pdf(model.quantile(tau)) ** 2


def mean_family_variance(model) -> float:
    require_analytic(model)
    return model.variance()


def limit_plugin_variance(model) -> float:
    """Plug-in variance at the level F(m) reached as h -> infinity."""
    require_analytic(model)
    m = model.mean()
    t = model.cdf(m)
    return t * (1.0 - t) / model.pdf(m) ** 2


def psi(t: float, z: float, h: float) -> float:
    """Canonical score sgn(t) + h t + z, with sgn(0) = +1 (matches the right-continuous F̂)."""
    return (1.0 if t >= 0.0 else -1.0) + h * t + z


def influence_smoothed(model, params: SmoothParams, y: float) -> float:
    """Influence function of q̂(z, h): -psi(q - y) / (2f(q) + h)."""
    sol = solve_population(model, params)
    return -psi(sol.q - y, params.z, params.h) / sol.score_slope


def influence_plugin(model, tau: float, y: float, h: float | None = None, simplified: bool = True) -> float:
    """Influence function of the plug-in estimator q̂(ẑ(tau, h), h).

    The unsimplified form adds to the smoothed influence at (z(tau, h), h) the
    contribution of ẑ - z = h[(Ȳ - m) - (q̂(tau) - q(tau))], with the sample
    quantile linearised as q̂(tau) - q(tau) ~ -(1{Y <= q} - tau) / f.  All h
    terms cancel, leaving the sample-quantile influence (tau - 1{y <= q}) / f.
    """
    require_analytic(model)
    q = model.quantile(tau)
    f = model.pdf(q)
    ind = 1.0 if y <= q else 0.0
    if simplified:
        return (tau - ind) / f
    if h is None or h < 0.0:
        raise ValueError("the unsimplified influence function needs h >= 0")
    z = line_z_unchecked(model, tau, h)
    slope = 2.0 * f + h
    m = model.mean()
    return -psi(q - y, z, h) / slope - h / slope * ((y - m) + (ind - tau) / f)


def knight_gap(y: float, q: float, delta: float) -> float:
    """Residual of Knight's identity, zero up to rounding.

    |y - (q + d)| - |y - q| + d sgn(y - q) - 2 * int_0^d (1{y <= q + s} - 1{y <= q}) ds
    with sgn(0) = -1 and the integral in closed form.
    """
    u = y - q
    sgn = 1.0 if u > 0.0 else -1.0
    if delta >= 0.0:
        integral = max(0.0, delta - u) if u > 0.0 else 0.0
    else:
        integral = max(0.0, u - delta) if u <= 0.0 else 0.0
    return abs(y - (q + delta)) - abs(u) + delta * sgn - 2.0 * integral
