"""Black-Scholes ``d1`` and future deltas of simple option overlays.

A future delta is ``dc/da``: the sensitivity of the combined position (the
underlying plus its options) to the underlying's value ``a`` at the horizon
where diversification is measured.  Options still have ``tau`` years left
to run at that point.

The dividend yield is called ``q``.  Every overlay holds one unit of the
underlying, so ``delta == 1`` means no overlay at all.

Each overlay also has a ``log_delta`` used by the benefit integrals.  It is
computed from ``log N`` directly, so it stays accurate deep in the tails
where ``N(d1)`` underflows or rounds to 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import log_ndtr, ndtr

from .errors import ValidationError


def norm_cdf(x):
    """Standard normal CDF (erfc-based, accurate in both tails)."""
    return ndtr(x)


def log_norm_cdf(x):
    return log_ndtr(x)


def _log1mexp(x):
    """``log(1 - exp(x))`` for ``x <= 0``."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(x > -math.log(2.0), np.log(-np.expm1(x)), np.log1p(-np.exp(x)))


def log_ndtr_diff(hi, lo):
    """``log(N(hi) - N(lo))`` for ``hi >= lo``, without cancellation.

    When both arguments sit in the upper tail the difference is rewritten as
    ``N(-lo) - N(-hi)``.  Equal arguments give ``-inf``.
    """
    hi, lo = np.broadcast_arrays(np.asarray(hi, dtype=float), np.asarray(lo, dtype=float))
    flip = lo > 0
    a = np.where(flip, -lo, hi)
    b = np.where(flip, -hi, lo)
    la, lb = log_ndtr(a), log_ndtr(b)
    with np.errstate(invalid="ignore"):
        return la + _log1mexp(np.minimum(lb - la, 0.0))


_LOG_SQRT_2PI = 0.5 * math.log(2 * math.pi)


def log_ndtr_band(lo, width):
    """``log(N(lo + width) - N(lo))`` for ``width >= 0``, accurate for tiny widths.

    Narrow bands use ``log(width) + log phi(c)`` plus the interval average of
    ``phi(c + s) / phi(c)``, an even Hermite series in the half-width (``c``
    is the band centre).  Wider bands fall back to :func:`log_ndtr_diff`.
    """
    lo, w = np.broadcast_arrays(np.asarray(lo, dtype=float), np.asarray(width, dtype=float))
    c = lo + 0.5 * w
    h2 = (0.5 * w) ** 2
    c2 = c * c
    series = (
        1.0
        + (c2 - 1.0) * h2 / 6.0
        + ((c2 - 6.0) * c2 + 3.0) * h2 * h2 / 120.0
        + (((c2 - 15.0) * c2 + 45.0) * c2 - 15.0) * h2**3 / 5040.0
    )
    narrow = 0.5 * w * (np.abs(c) + 1.0) < 0.05
    with np.errstate(divide="ignore", invalid="ignore"):
        band = np.log(w) - 0.5 * c2 - _LOG_SQRT_2PI + np.log(series)
    return np.where(narrow, band, log_ndtr_diff(lo + w, lo))


def ndtr_diff(hi, lo):
    """``N(hi) - N(lo)`` for ``hi >= lo``; see :func:`log_ndtr_diff`."""
    return np.exp(log_ndtr_diff(hi, lo))


@dataclass(frozen=True)
class MarketParams:
    """Rate ``r``, dividend yield ``q``, volatility ``sigma``, remaining life ``tau``."""

    r: float
    sigma: float
    tau: float
    q: float = 0.0

    def __post_init__(self):
        for name in ("r", "sigma", "tau", "q"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(f"{name} must be finite")
        if self.sigma <= 0:
            raise ValidationError(f"sigma must be positive, got {self.sigma!r}")
        if self.tau <= 0:
            raise ValidationError(f"tau must be positive, got {self.tau!r}")

    @property
    def dividend_discount(self) -> float:
        return math.exp(-self.q * self.tau)


def _check_positive(name, x):
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise ValidationError(f"{name} must be positive, got {x[~(x > 0)].ravel()[0]!r}")
    return x


def d1(a, E, m: MarketParams):
    """``(ln(a/E) + (r - q + sigma**2/2) tau) / (sigma sqrt(tau))``."""
    a = _check_positive("spot", a)
    E = _check_positive("strike", E)
    with np.errstate(divide="ignore"):
        drift = (m.r - m.q + 0.5 * m.sigma**2) * m.tau
        return (np.log(a) - np.log(E) + drift) / (m.sigma * math.sqrt(m.tau))


def future_delta_long_put(a, E, m: MarketParams):
    """``e^{-q tau} (N(d1) - 1) + 1``; equals ``N(d1)`` when ``q = 0``."""
    if m.q == 0.0:
        return ndtr(d1(a, E, m))
    return 1.0 - m.dividend_discount * ndtr(-d1(a, E, m))


def future_delta_put_spread(a, Eu, El, m: MarketParams):
    """Bought put at ``Eu`` and sold put at ``El``, over one unit of underlying.

    ``e^{-q tau} (N(d1(a, Eu)) - N(d1(a, El))) + 1``, which lies in (0, 1]
    for ``Eu >= El``.
    """
    _check_strike_order(Eu, El, "put-spread upper strike", "lower strike")
    return 1.0 - m.dividend_discount * ndtr_diff(d1(a, El, m), d1(a, Eu, m))


def future_delta_collar(a, Ep, Ec, m: MarketParams):
    """Bought put at ``Ep`` and sold call at ``Ec``.

    ``e^{-q tau} (N(d1(a, Ep)) - 1) - N(d1(a, Ec)) + 1``.  The dividend
    factor applies to the put term only.  Non-negative when ``Ec >= Ep``;
    identically zero for ``q = 0`` and ``Ec = Ep``.
    """
    dp, dc = d1(a, Ep, m), d1(a, Ec, m)
    if m.q == 0.0:
        return np.where(dp >= dc, ndtr_diff(dp, np.minimum(dc, dp)), ndtr(dp) - ndtr(dc))
    g = m.dividend_discount
    if g < 1.0 and np.all(dp >= dc):
        return g * ndtr_diff(dp, dc) + (1.0 - g) * ndtr(-dc)
    return g * (ndtr(dp) - 1.0) - ndtr(dc) + 1.0


def _check_strike_order(hi, lo, hi_name, lo_name):
    _check_positive(hi_name, hi)
    _check_positive(lo_name, lo)
    if np.any(np.asarray(hi) < np.asarray(lo)):
        raise ValidationError(f"{hi_name} ({hi}) must not be below the {lo_name} ({lo})")


# ---------------------------------------------------------------------------
# Overlay specifications
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LongPut:
    strike: float

    def __post_init__(self):
        _check_positive("strike", self.strike)

    def delta(self, a, m: MarketParams):
        return future_delta_long_put(a, self.strike, m)

    def log_delta(self, a, m: MarketParams):
        x = d1(a, self.strike, m)
        if m.q == 0.0:
            return log_ndtr(x)
        return np.log1p(-m.dividend_discount * ndtr(-x))


@dataclass(frozen=True)
class PutSpread:
    upper: float
    lower: float

    def __post_init__(self):
        _check_strike_order(self.upper, self.lower, "put-spread upper strike", "lower strike")

    def delta(self, a, m: MarketParams):
        return future_delta_put_spread(a, self.upper, self.lower, m)

    def log_delta(self, a, m: MarketParams):
        du, dl = d1(a, self.upper, m), d1(a, self.lower, m)
        if m.q == 0.0:
            # 1 - N(dl) + N(du) = N(-dl) + N(du), both terms positive
            return np.logaddexp(log_ndtr(-dl), log_ndtr(du))
        return np.log1p(-m.dividend_discount * ndtr_diff(dl, du))


@dataclass(frozen=True)
class Collar:
    put_strike: float
    call_strike: float

    def __post_init__(self):
        _check_strike_order(self.call_strike, self.put_strike, "collar call strike", "put strike")

    def delta(self, a, m: MarketParams):
        return future_delta_collar(a, self.put_strike, self.call_strike, m)

    def log_delta(self, a, m: MarketParams):
        dp, dc = d1(a, self.put_strike, m), d1(a, self.call_strike, m)
        if m.q == 0.0:
            # exact band width, so nearly equal strikes keep full precision
            width = math.log1p((self.call_strike - self.put_strike) / self.put_strike)
            return log_ndtr_band(dc, width / (m.sigma * math.sqrt(m.tau)))
        g = m.dividend_discount
        if g > 1.0:
            with np.errstate(divide="ignore", invalid="ignore"):
                return np.log(self.delta(a, m))
        # e^{-q tau}(N(dp) - N(dc)) + (1 - e^{-q tau})(1 - N(dc)), both terms >= 0
        return np.logaddexp(math.log(g) + log_ndtr_diff(dp, dc), math.log1p(-g) + log_ndtr(-dc))


OverlaySpec = LongPut | PutSpread | Collar
