"""Distribution models supplying the population quantities F, f, F^-1, m, Var, E|Y-q|.

Two analytic location-scale families (Normal, Laplace) are reduced to their
standard forms by an affine change of variable.  The empirical model wraps a
:class:`Sample` and only supports the operations that need no smoothing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptySampleError, OutOfRangeError, SmoothQError, UnsupportedOperation

SQRT2 = math.sqrt(2.0)
SQRT2PI = math.sqrt(2.0 * math.pi)

# Acklam's rational approximation to the standard normal quantile.
_A = (-3.969683028665376e01, 2.209460984245205e02, -2.759285104469687e02,
      1.383577518672690e02, -3.066479806614716e01, 2.506628277459239e00)
_B = (-5.447609879822406e01, 1.615858368580409e02, -1.556989798598866e02,
      6.680131188771972e01, -1.328068155288572e01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e00,
      -2.549732539343734e00, 4.374664141464968e00, 2.938163982698783e00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e00,
      3.754408661907416e00)
_P_LOW = 0.02425


def norm_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / SQRT2)


def norm_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / SQRT2PI


def norm_ppf(p: float) -> float:
    """Standard normal quantile, accurate to about 1e-15.

    Acklam's approximation (relative error ~1e-9) followed by one Newton
    step on the erfc-based CDF.
    """
    if not 0.0 < p < 1.0:
        raise OutOfRangeError(f"probability must lie in (0, 1), got {p!r}")
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        x = ((((( _C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
            ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    elif p <= 1.0 - _P_LOW:
        q = p - 0.5
        r = q * q
        x = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q / \
            (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0)
    else:
        q = math.sqrt(-2.0 * math.log1p(-p))
        x = -((((( _C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5]) / \
            ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0)
    # Newton on the tail that keeps the residual relatively accurate.
    if x <= 0.0:
        err = norm_cdf(x) - p
    else:
        err = (1.0 - p) - 0.5 * math.erfc(x / SQRT2)
    dens = norm_pdf(x)
    if dens > 0.0:
        x -= err / dens
    return x


def _check_tau(tau: float) -> None:
    if not 0.0 < tau < 1.0:
        raise OutOfRangeError(f"tau must lie in (0, 1), got {tau!r}")


def make_rng(seed: int, stream: int | None = None) -> np.random.Generator:
    """PCG64 generator keyed by (seed, stream).

    Streams are derived with ``SeedSequence`` spawn keys, so replication ``k``
    of a run depends only on the master seed and ``k``.
    """
    if not 0 <= int(seed) < 2**64:
        raise OutOfRangeError(f"seed must be a 64-bit unsigned integer, got {seed!r}")
    spawn_key = () if stream is None else (int(stream),)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=spawn_key)))


class Sample:
    """Observation vector with the sorted copy and moments computed once.

    Arrays are read-only so a Sample can be shared between threads.
    """

    __slots__ = ("values", "sorted", "n", "mean", "_ecdf_sorted", "_levels")

    def __init__(self, values):
        arr = np.array(values, dtype=float).ravel()
        if arr.size == 0:
            raise EmptySampleError("sample must contain at least one observation")
        if not np.all(np.isfinite(arr)):
            raise SmoothQError("sample contains non-finite values")
        srt = np.sort(arr)
        n = arr.size
        # F̂ at each sorted point (right-continuous, so ties share the upper count).
        ecdf_sorted = np.searchsorted(srt, srt, side="right") / n
        levels = np.arange(1, n + 1) / n
        for a in (arr, srt, ecdf_sorted, levels):
            a.setflags(write=False)
        self.values = arr
        self.sorted = srt
        self.n = n
        self.mean = float(np.mean(arr))
        self._ecdf_sorted = ecdf_sorted
        self._levels = levels

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"Sample(n={self.n}, mean={self.mean:.6g})"

    @property
    def variance(self) -> float:
        if self.n < 2:
            raise SmoothQError("sample variance needs at least two observations")
        return float(np.var(self.values, ddof=1))

    @property
    def std(self) -> float:
        return math.sqrt(self.variance)

    @property
    def ecdf_at_sorted(self) -> np.ndarray:
        return self._ecdf_sorted

    def ecdf(self, x: float) -> float:
        return int(np.searchsorted(self.sorted, x, side="right")) / self.n

    def quantile(self, tau: float) -> float:
        """inf{y : F̂(y) >= tau}, i.e. sorted[ceil(n tau) - 1].

        The index is located against the same k/n grid that F̂ produces, so
        levels such as tau = F̂(y) land on the intended order statistic even
        when n * tau is not exact in floating point.
        """
        _check_tau(tau)
        k = int(np.searchsorted(self._levels, tau, side="left"))
        return float(self.sorted[min(k, self.n - 1)])


@dataclass(frozen=True)
class _LocationScale:
    loc: float = 0.0
    scale: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.loc) and math.isfinite(self.scale)) or self.scale <= 0.0:
            raise OutOfRangeError(f"scale must be positive and finite, got {self.scale!r}")

    analytic = True

    # standard-form hooks
    def _cdf0(self, t: float) -> float: ...
    def _pdf0(self, t: float) -> float: ...
    def _ppf0(self, p: float) -> float: ...
    def _mad0(self, t: float) -> float: ...
    def _var0(self) -> float: ...
    def _draw0(self, rng: np.random.Generator, n: int) -> np.ndarray: ...

    def cdf(self, x: float) -> float:
        return self._cdf0((x - self.loc) / self.scale)

    def pdf(self, x: float) -> float:
        return self._pdf0((x - self.loc) / self.scale) / self.scale

    def quantile(self, tau: float) -> float:
        _check_tau(tau)
        return self.loc + self.scale * self._ppf0(tau)

    def mean(self) -> float:
        return self.loc

    def variance(self) -> float:
        return self.scale**2 * self._var0()

    def mean_abs_dev(self, q: float) -> float:
        """E|Y - q|."""
        return self.scale * self._mad0((q - self.loc) / self.scale)

    def sample(self, n: int, seed: int, stream: int | None = None) -> Sample:
        if n < 1:
            raise OutOfRangeError(f"sample size must be >= 1, got {n}")
        rng = make_rng(seed, stream)
        return Sample(self.loc + self.scale * self._draw0(rng, n))

    def spec(self) -> str:
        return f"{self.kind}:{self.loc!r},{self.scale!r}"


@dataclass(frozen=True)
class Normal(_LocationScale):
    kind = "normal"

    def _cdf0(self, t):
        return norm_cdf(t)

    def _pdf0(self, t):
        return norm_pdf(t)

    def _ppf0(self, p):
        return norm_ppf(p)

    def _mad0(self, t):
        return 2.0 * norm_pdf(t) + t * (1.0 - math.erfc(t / SQRT2))

    def _var0(self):
        return 1.0

    def _draw0(self, rng, n):
        return rng.standard_normal(n)


@dataclass(frozen=True)
class Laplace(_LocationScale):
    kind = "laplace"

    def _cdf0(self, t):
        return 0.5 * math.exp(t) if t < 0.0 else 1.0 - 0.5 * math.exp(-t)

    def _pdf0(self, t):
        return 0.5 * math.exp(-abs(t))

    def _ppf0(self, p):
        return math.log(2.0 * p) if p < 0.5 else -math.log(2.0 * (1.0 - p))

    def _mad0(self, t):
        return abs(t) + math.exp(-abs(t))

    def _var0(self):
        return 2.0

    def _draw0(self, rng, n):
        # Shift the 53-bit uniform grid off zero so the inverse CDF stays finite.
        u = rng.random(n) + 2.0**-54
        return np.where(u < 0.5, np.log(2.0 * u), -np.log(2.0 * (1.0 - u)))


@dataclass(frozen=True)
class Empirical:
    data: Sample = field(repr=False)

    kind = "empirical"
    analytic = False

    def __post_init__(self):
        if not isinstance(self.data, Sample):
            object.__setattr__(self, "data", Sample(self.data))

    def cdf(self, x: float) -> float:
        return self.data.ecdf(x)

    def pdf(self, x: float) -> float:
        raise UnsupportedOperation("density of an empirical model is not available")

    def quantile(self, tau: float) -> float:
        return self.data.quantile(tau)

    def mean(self) -> float:
        return self.data.mean

    def variance(self) -> float:
        return self.data.variance

    def mean_abs_dev(self, q: float) -> float:
        return float(np.mean(np.abs(self.data.values - q)))

    def sample(self, n: int, seed: int, stream: int | None = None) -> Sample:
        raise UnsupportedOperation("resampling from an empirical model is not supported")

    def spec(self) -> str:
        return f"empirical:<n={self.data.n}>"


DistributionModel = Normal | Laplace | Empirical


def require_analytic(model) -> None:
    if not getattr(model, "analytic", False):
        raise UnsupportedOperation(f"{model.kind} model: an analytic distribution is required")


def parse_model(spec: str) -> DistributionModel:
    """Build a model from ``normal:LOC,SCALE``, ``laplace:LOC,SCALE`` or ``empirical:PATH``."""
    kind, _, rest = spec.partition(":")
    kind = kind.strip().lower()
    if kind in ("normal", "laplace"):
        cls = Normal if kind == "normal" else Laplace
        if not rest.strip():
            return cls()
        parts = [p for p in rest.split(",") if p.strip()]
        if len(parts) != 2:
            raise SmoothQError(f"model spec {spec!r}: expected {kind}:LOC,SCALE")
        try:
            loc, scale = (float(p) for p in parts)
        except ValueError as exc:
            raise SmoothQError(f"model spec {spec!r}: {exc}") from None
        return cls(loc, scale)
    if kind == "empirical":
        from .io import read_values

        return Empirical(Sample(read_values(rest)))
    raise SmoothQError(f"unknown model kind {kind!r} in {spec!r}")
