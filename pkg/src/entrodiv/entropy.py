"""Entropy-based diversification measure of a final-value density.

The measure is ``D = ∫ p(a) log p(a) da``, the negative differential entropy
of the density ``p`` of the final portfolio value.  A more sharply peaked
density is "more diversified"; a point mass (cash) sits at ``+inf``.

Values are carried in nats internally.  :class:`Diversification` converts to
bits (divide by ``log 2``) on request.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy import integrate

from .errors import DegenerateInputError, ValidationError

LN2 = math.log(2.0)
UNITS = ("nats", "bits")

#: Maximum relative deviation of a tabulated density's mass from 1 that is
#: silently renormalized away.
NORMALIZATION_TOLERANCE = 1e-3


@dataclass(frozen=True)
class Diversification:
    """A value of the diversification measure with its unit."""

    value: float
    unit: str = "nats"

    def __post_init__(self):
        if self.unit not in UNITS:
            raise ValidationError(f"unit must be one of {UNITS}, got {self.unit!r}")

    @property
    def nats(self) -> float:
        return self.value if self.unit == "nats" else self.value * LN2

    @property
    def bits(self) -> float:
        return self.value if self.unit == "bits" else self.value / LN2

    def to(self, unit: str) -> "Diversification":
        if unit not in UNITS:
            raise ValidationError(f"unit must be one of {UNITS}, got {unit!r}")
        return Diversification(self.nats if unit == "nats" else self.bits, unit)


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------


def is_uniform(x: np.ndarray, rtol: float = 1e-6) -> bool:
    dx = np.diff(x)
    return bool(np.all(np.abs(dx - dx[0]) <= rtol * abs(dx[0])))


def integrate_samples(x: np.ndarray, f: np.ndarray) -> float:
    """Composite Simpson on a uniform grid, trapezoid otherwise."""
    if is_uniform(x):
        return float(integrate.simpson(f, dx=float(x[1] - x[0])))
    return float(integrate.trapezoid(f, x))


def _xlogx(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p)
    pos = p > 0
    out[pos] = p[pos] * np.log(p[pos])
    return out


def _power_tail(s_end: float, p_end: float, s_in: float, p_in: float) -> tuple[float, float]:
    """Mass and ``∫ p log p`` beyond ``s_end`` for a fitted ``C s**-alpha`` tail.

    ``s`` is the distance from the density's mode.  The exponent is fitted
    from the end node and an interior node ``s_in``.
    """
    if p_end <= 0.0:
        return 0.0, 0.0
    alpha = math.log(p_in / p_end) / math.log(s_end / s_in)
    if not alpha > 1.0:
        raise ValidationError(
            f"power-law tail exponent {alpha:.4g} <= 1: density is not normalizable"
        )
    mass = p_end * s_end / (alpha - 1.0)
    return mass, mass * (math.log(p_end) - alpha / (alpha - 1.0))


# ---------------------------------------------------------------------------
# Tabulated densities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DensityGrid:
    """A probability density tabulated on a strictly increasing grid.

    Densities are renormalized on construction when their integral is within
    ``NORMALIZATION_TOLERANCE`` of one; a larger deviation is an error.

    Parameters
    ----------
    abscissae : array_like
        Strictly increasing grid, at least 8 points.
    densities : array_like
        Non-negative density values on the grid.
    tails : {"none", "power"}
        ``"power"`` extrapolates both ends as power laws fitted to the
        tabulated values and includes the extrapolated mass and entropy.
        Use it for heavy-tailed densities truncated at a finite range.
    """

    abscissae: np.ndarray
    densities: np.ndarray
    tails: str = "none"
    raw_mass: float = field(init=False, repr=False)

    def __post_init__(self):
        x = np.array(self.abscissae, dtype=float)
        p = np.array(self.densities, dtype=float)
        if x.ndim != 1 or x.shape != p.shape:
            raise ValidationError("abscissae and densities must be 1-D arrays of equal length")
        if x.size < 8:
            raise ValidationError(f"a density grid needs at least 8 points, got {x.size}")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(p))):
            raise ValidationError("density grid contains non-finite values")
        bad = np.flatnonzero(np.diff(x) <= 0)
        if bad.size:
            i = int(bad[0])
            raise ValidationError(
                f"abscissae must be strictly increasing (x[{i}]={x[i]!r}, x[{i + 1}]={x[i + 1]!r})"
            )
        if np.any(p < 0):
            i = int(np.flatnonzero(p < 0)[0])
            raise ValidationError(f"negative density {p[i]!r} at x={x[i]!r}")
        if self.tails not in ("none", "power"):
            raise ValidationError(f"tails must be 'none' or 'power', got {self.tails!r}")

        object.__setattr__(self, "abscissae", x)
        object.__setattr__(self, "densities", p)
        mass = integrate_samples(x, p) + self._tail_terms()[0]
        if not abs(mass - 1.0) <= NORMALIZATION_TOLERANCE:
            raise ValidationError(
                f"density integrates to {mass:.6g} on the grid; not normalizable within "
                f"{NORMALIZATION_TOLERANCE:g}"
            )
        p = p / mass
        p.setflags(write=False)
        x.setflags(write=False)
        object.__setattr__(self, "densities", p)
        object.__setattr__(self, "raw_mass", mass)

    def _tail_terms(self) -> tuple[float, float]:
        """(mass, ∫ p log p) carried by the extrapolated tails."""
        if self.tails == "none":
            return 0.0, 0.0
        x, p = self.abscissae, self.densities
        k = int(np.argmax(p))
        mass = plogp = 0.0
        for end, mid in ((0, k // 2), (x.size - 1, (k + x.size - 1) // 2)):
            s_end, s_mid = abs(x[end] - x[k]), abs(x[mid] - x[k])
            if mid in (k, end) or s_mid == 0.0:
                raise ValidationError("grid too short on one side of the mode to fit a tail")
            m, e = _power_tail(s_end, p[end], s_mid, p[mid])
            mass += m
            plogp += e
        return mass, plogp

    def integrate(self, values: np.ndarray) -> float:
        """Integrate samples on this grid with the grid's quadrature rule."""
        return integrate_samples(self.abscissae, np.asarray(values, dtype=float))

    def mean(self) -> float:
        return self.integrate(self.abscissae * self.densities)

    def variance(self) -> float:
        c = self.abscissae - self.mean()
        return self.integrate(c * c * self.densities)


def d_measure_grid(g: DensityGrid, unit: str = "nats") -> Diversification:
    """``∫ p log p`` over a tabulated density, with ``0 log 0 = 0``."""
    value = g.integrate(_xlogx(g.densities)) + g._tail_terms()[1]
    return Diversification(value, "nats").to(unit)


# ---------------------------------------------------------------------------
# Closed-form distributions
# ---------------------------------------------------------------------------


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise ValidationError(f"{name} must be a positive finite number, got {value!r}")
    return value


@dataclass(frozen=True)
class Gaussian:
    sigma: float
    mean: float = 0.0

    def __post_init__(self):
        _positive("sigma", self.sigma)

    def pdf(self, x):
        z = (np.asarray(x, dtype=float) - self.mean) / self.sigma
        return np.exp(-0.5 * z * z) / (self.sigma * math.sqrt(2 * math.pi))

    def d_measure(self) -> float:
        return -0.5 * math.log(2 * math.pi * math.e * self.sigma**2)

    def density_grid(self, n: int = 4001, width: float = 10.0) -> DensityGrid:
        x = np.linspace(self.mean - width * self.sigma, self.mean + width * self.sigma, n)
        return DensityGrid(x, self.pdf(x))


@dataclass(frozen=True)
class Cauchy:
    gamma: float
    x0: float = 0.0

    def __post_init__(self):
        _positive("gamma", self.gamma)

    def pdf(self, x):
        u = (np.asarray(x, dtype=float) - self.x0) / self.gamma
        return 1.0 / (math.pi * self.gamma * (1.0 + u * u))

    def d_measure(self) -> float:
        return -math.log(4 * math.pi * self.gamma)

    def density_grid(self, n: int = 400_001, width: float = 1e4) -> DensityGrid:
        """Uniform grid over ``x0 ± width·gamma`` with power-law tail correction."""
        x = np.linspace(self.x0 - width * self.gamma, self.x0 + width * self.gamma, n)
        return DensityGrid(x, self.pdf(x), tails="power")


@dataclass(frozen=True)
class LogNormal:
    """Log-normal final value with expected value ``exp(nu)``.

    ``log x`` is normal with mean ``nu - sigma**2 / 2`` and standard
    deviation ``sigma``.
    """

    nu: float
    sigma: float

    def __post_init__(self):
        _positive("sigma", self.sigma)
        if not math.isfinite(self.nu):
            raise ValidationError(f"nu must be finite, got {self.nu!r}")

    @property
    def log_mean(self) -> float:
        return self.nu - 0.5 * self.sigma**2

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        pos = x > 0
        z = (np.log(x[pos]) - self.log_mean) / self.sigma
        out[pos] = np.exp(-0.5 * z * z) / (x[pos] * self.sigma * math.sqrt(2 * math.pi))
        return out

    def d_measure(self) -> float:
        s2 = self.sigma**2
        return -0.5 - 0.5 * math.log(2 * math.pi * s2) - self.nu + 0.5 * s2

    def density_grid(self, n: int = 20001, width: float = 10.0) -> DensityGrid:
        """Geometric grid: uniform in ``log x`` over ``log_mean ± width·sigma``."""
        y = np.linspace(self.log_mean - width * self.sigma, self.log_mean + width * self.sigma, n)
        x = np.exp(y)
        return DensityGrid(x, self.pdf(x))


AnalyticDistribution = Union[Gaussian, Cauchy, LogNormal]


def d_measure_analytic(dist: AnalyticDistribution, unit: str = "nats") -> Diversification:
    """Closed-form diversification of a Gaussian, Cauchy or log-normal density."""
    return Diversification(dist.d_measure(), "nats").to(unit)


def as_density_grid(underlying) -> DensityGrid:
    if isinstance(underlying, DensityGrid):
        return underlying
    if hasattr(underlying, "density_grid"):
        return underlying.density_grid()
    raise ValidationError(f"cannot tabulate {type(underlying).__name__!r} as a density")


# ---------------------------------------------------------------------------
# Combining independent Gaussian assets
# ---------------------------------------------------------------------------


def combine_gaussian_pair(
    d_a: Union[Diversification, float],
    sigma_a: float,
    sigma_b: float,
    w_a: float,
    w_b: float,
) -> Diversification:
    """Diversification of ``c = w_a·a + w_b·b`` for independent Gaussians.

    ``d_a`` is the diversification of asset A alone (a bare float is read as
    nats).  The result is returned in the unit of ``d_a`` and follows from
    ``D(C) - D(A) = -log(sigma_c / sigma_a)`` with
    ``sigma_c**2 = w_a**2 sigma_a**2 + w_b**2 sigma_b**2``.  Weights may have
    either sign.
    """
    if not isinstance(d_a, Diversification):
        d_a = Diversification(float(d_a), "nats")
    sigma_a = _positive("sigma_a", sigma_a)
    sigma_b = _positive("sigma_b", sigma_b)
    ratio2 = w_a**2 + w_b**2 * (sigma_b / sigma_a) ** 2
    if ratio2 == 0.0:
        raise DegenerateInputError("w_a = w_b = 0 gives a zero-variance portfolio")
    return Diversification(d_a.nats - 0.5 * math.log(ratio2), "nats").to(d_a.unit)


def equivalent_asset_count(k_bits: float, j_bits: float) -> float:
    """Number of equal-weight, equal-variance independent Gaussian assets.

    Each asset has diversification ``j_bits``; their mixture has ``k_bits``.
    Equal weights ``1/n`` shrink the variance by ``n``, adding
    ``log2(n) / 2`` bits, so ``n = 2**(2 (k - j))``.
    """
    if k_bits < j_bits:
        raise ValidationError(f"k ({k_bits}) must be >= j ({j_bits})")
    return 2.0 ** (2.0 * (k_bits - j_bits))
