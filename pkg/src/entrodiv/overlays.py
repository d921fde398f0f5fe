"""Diversification benefit of option overlays on a log-normal underlying.

Conventions (all overridable):

* the underlying starts at ``initial_value = 1`` and strikes on sweep axes are
  quoted in percent of it;
* the final value after ``horizon_years`` is log-normal with expected value
  ``initial_value * exp(nu)``;
* options have a ``term``-year life, so ``tau = term - horizon`` remains at
  the horizon (defaults 2 and 1, so ``tau = 1``);
* a "10% put spread" has its sold strike 10 percentage points of the initial
  value below the bought strike.

The benefit ``-E[log Δ(a)]`` is integrated in ``y = log a`` over
``mean ± 10 sd`` by composite Simpson.  The node count doubles until two
successive estimates agree within ``tol``, and the result is
Richardson-extrapolated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy import integrate

from .black_scholes import Collar, LongPut, MarketParams, PutSpread
from .entropy import LN2, LogNormal
from .errors import NumericalError, ValidationError
from .transforms import DIVERGENCE_CAP

DEFAULT_SIGMAS = (0.15, 0.25, 0.35)
DEFAULT_RATE = 0.10
DEFAULT_NU = 0.10
DEFAULT_HORIZON = 1.0
DEFAULT_TERM = 2.0
DEFAULT_WIDTH_PCT = 10.0
#: Collars whose strike gap (in percent of initial value) is below this are
#: reported as divergent.
DEFAULT_MIN_GAP_PCT = 0.1


@dataclass(frozen=True)
class UnderlyingModel:
    """Log-normal final value of the underlying over the horizon."""

    sigma_annual: float
    nu: float = DEFAULT_NU
    horizon_years: float = DEFAULT_HORIZON
    initial_value: float = 1.0

    def __post_init__(self):
        if not self.sigma_annual > 0:
            raise ValidationError(f"sigma_annual must be positive, got {self.sigma_annual!r}")
        if not self.horizon_years > 0:
            raise ValidationError(f"horizon_years must be positive, got {self.horizon_years!r}")
        if not self.initial_value > 0:
            raise ValidationError(f"initial_value must be positive, got {self.initial_value!r}")

    @property
    def sigma(self) -> float:
        """Standard deviation of ``log a`` over the horizon."""
        return self.sigma_annual * math.sqrt(self.horizon_years)

    @property
    def log_mean(self) -> float:
        return math.log(self.initial_value) + self.nu - 0.5 * self.sigma**2

    def distribution(self) -> LogNormal:
        return LogNormal(math.log(self.initial_value) + self.nu, self.sigma)


def expected_neg_log(
    u: UnderlyingModel,
    log_delta,
    *,
    tol: float = 1e-8,
    width: float = 10.0,
    start_intervals: int = 256,
    max_intervals: int = 1 << 20,
    cap: float = DIVERGENCE_CAP,
) -> float:
    """``-E[log_delta(a)]`` under the log-normal ``u``; ``inf`` past ``cap``."""
    mu, s = u.log_mean, u.sigma
    n = start_intervals
    prev = None
    history = []
    while n <= max_intervals:
        y = np.linspace(mu - width * s, mu + width * s, n + 1)
        z = (y - mu) / s
        phi = np.exp(-0.5 * z * z) / (s * math.sqrt(2 * math.pi))
        ld = np.asarray(log_delta(np.exp(y)), dtype=float)
        if np.any(np.isnan(ld)) or np.any(ld > 1e-12):
            raise ValidationError("future delta outside (0, 1] on the integration range")
        if np.any(np.isneginf(ld) & (phi > 0)):
            return math.inf
        value = -float(integrate.simpson(phi * ld, dx=float(y[1] - y[0])))
        if value > cap:
            return math.inf
        history.append(value)
        if prev is not None and abs(value - prev) < tol:
            return value + (value - prev) / 15.0
        prev = value
        n *= 2
    raise NumericalError(
        f"benefit integral did not converge to {tol:g} with {max_intervals} intervals; "
        f"last estimates {history[-3:]}"
    )


def _require_no_dividend(m: MarketParams):
    if m.q != 0.0:
        raise ValidationError("overlay benefits assume no dividend yield (q = 0)")


def benefit_long_put(u: UnderlyingModel, m: MarketParams, E: float, **kw) -> float:
    """``-E[log N(d1(a, E))]`` in nats."""
    _require_no_dividend(m)
    spec = LongPut(E)
    return expected_neg_log(u, lambda a: spec.log_delta(a, m), **kw)


def benefit_put_spread(u: UnderlyingModel, m: MarketParams, Eu: float, El: float, **kw) -> float:
    _require_no_dividend(m)
    spec = PutSpread(Eu, El)
    if Eu == El:
        return 0.0
    return expected_neg_log(u, lambda a: spec.log_delta(a, m), **kw)


def benefit_collar(
    u: UnderlyingModel,
    m: MarketParams,
    Ep: float,
    Ec: float,
    min_gap_pct: float = DEFAULT_MIN_GAP_PCT,
    **kw,
) -> float:
    """Collar benefit in nats, or ``math.inf`` when it diverges.

    The benefit grows without bound as the call strike comes down to the put
    strike.  It is reported as divergent once the gap falls below
    ``min_gap_pct`` percent of the initial value, or once it exceeds the cap.
    """
    _require_no_dividend(m)
    spec = Collar(Ep, Ec)
    if (Ec - Ep) / u.initial_value * 100.0 < min_gap_pct or Ec == Ep:
        return math.inf
    return expected_neg_log(u, lambda a: spec.log_delta(a, m), **kw)


# ---------------------------------------------------------------------------
# Figure sweeps
# ---------------------------------------------------------------------------


class BenefitRow(NamedTuple):
    strike_pct: float
    sigma: float
    benefit_nats: float
    benefit_bits: float
    diverged: bool


FIGURE_STRIKES = {
    "fig2": (50.0, 150.0),
    "fig3": (60.0, 160.0),
    "fig4": (100.0, 200.0),
}


def default_strikes(which: str, points: int = 101) -> np.ndarray:
    lo, hi = FIGURE_STRIKES[which]
    return np.linspace(lo, hi, points)


def sweep_figure(
    which: str,
    strikes_pct: Iterable[float] | None = None,
    sigmas: Sequence[float] = DEFAULT_SIGMAS,
    *,
    r: float = DEFAULT_RATE,
    nu: float = DEFAULT_NU,
    horizon: float = DEFAULT_HORIZON,
    term: float = DEFAULT_TERM,
    tau: float | None = None,
    width_pct: float = DEFAULT_WIDTH_PCT,
    put_pct: float = 100.0,
    min_gap_pct: float = DEFAULT_MIN_GAP_PCT,
) -> list[BenefitRow]:
    """Benefit curves for the long put, put spread or collar figures.

    The strike axis is the put strike (``fig2``), the upper put strike
    (``fig3``, sold strike ``width_pct`` lower) or the call strike (``fig4``,
    put fixed at ``put_pct``).  Rows are sorted by ``(sigma, strike)``.
    """
    if which not in FIGURE_STRIKES:
        raise ValidationError(f"unknown overlay figure {which!r}")
    strikes = default_strikes(which) if strikes_pct is None else np.asarray(list(strikes_pct), float)
    if tau is None:
        tau = term - horizon
    rows = []
    for sigma in sigmas:
        u = UnderlyingModel(sigma, nu=nu, horizon_years=horizon)
        m = MarketParams(r=r, sigma=sigma, tau=tau)
        for k in strikes:
            E = k / 100.0 * u.initial_value
            if which == "fig2":
                b = benefit_long_put(u, m, E)
            elif which == "fig3":
                El = (k - width_pct) / 100.0 * u.initial_value
                if El <= 0:
                    raise ValidationError(f"upper strike {k}% leaves a non-positive lower strike")
                b = benefit_put_spread(u, m, E, El)
            else:
                b = benefit_collar(u, m, put_pct / 100.0 * u.initial_value, E, min_gap_pct)
            diverged = math.isinf(b)
            rows.append(BenefitRow(float(k), float(sigma), b, b / LN2, diverged))
    rows.sort(key=lambda row: (row.sigma, row.strike_pct))
    return rows
