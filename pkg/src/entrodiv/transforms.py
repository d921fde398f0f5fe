"""Diversification change under a monotone map of the underlying's value.

If the portfolio value is ``c(a)`` for a strictly monotone ``c`` and the
underlying has density ``p``, then

    D(C) = D(A) - ∫ p(a) log |Δ(a)| da,    Δ = dc/da,

so the additive benefit depends only on the future delta.  Two routes are
offered: :func:`diversification_benefit` evaluates that integral and
:func:`transform_density` tabulates the pushforward density directly.  They
are written to check each other.
"""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .entropy import DensityGrid, as_density_grid
from .errors import DomainError, ValidationError

#: Benefits above this many nats are reported as divergent (``inf``).
DIVERGENCE_CAP = 700.0

DeltaFn = Callable[[np.ndarray], np.ndarray]


def diversification_benefit(
    underlying,
    delta: DeltaFn,
    *,
    increasing: bool = True,
    cap: float = DIVERGENCE_CAP,
) -> float:
    """``-∫ p log |Δ|`` in nats, so that ``D(C) = D(A) + benefit``.

    Parameters
    ----------
    underlying : DensityGrid or analytic distribution
        Analytic distributions are tabulated with their default grid.
    delta : callable
        Vectorized future delta ``a -> dc/da``.
    increasing : bool
        Declared direction of the map.  Every node with positive density must
        have ``Δ > 0`` (or ``Δ < 0`` for a decreasing map); a wrong sign
        raises :class:`DomainError` naming the node.
    cap : float
        Results larger than ``cap`` (including a vanishing delta on a set of
        positive probability) are returned as ``math.inf``.
    """
    g = as_density_grid(underlying)
    x, p = g.abscissae, g.densities
    d = np.asarray(delta(x), dtype=float) * np.ones_like(x)
    live = p > 0
    wrong = live & ((d < 0) if increasing else (d > 0))
    if np.any(wrong) or np.any(live & np.isnan(d)):
        i = int(np.flatnonzero(wrong | (live & np.isnan(d)))[0])
        sign = "positive" if increasing else "negative"
        raise DomainError(f"future delta {d[i]!r} at a={x[i]!r} is not {sign}")
    if np.any(live & (d == 0)):
        return math.inf
    f = np.zeros_like(x)
    f[live] = -p[live] * np.log(np.abs(d[live]))
    value = g.integrate(f)
    return math.inf if value > cap else value


def gearing_benefit(lam: float) -> float:
    """Benefit of constant gearing ``c = lam * a``: ``-log(lam)``."""
    if not lam > 0:
        raise ValidationError(f"gearing factor must be positive, got {lam!r}")
    return -math.log(lam)


def transform_density(
    underlying: DensityGrid,
    cmap: Callable[[np.ndarray], np.ndarray],
    delta: DeltaFn,
) -> DensityGrid:
    """Tabulate the density of ``c(a)`` on the image nodes ``c(abscissae)``.

    The density at ``c(a_i)`` is ``p(a_i) / |Δ(a_i)|``.  Decreasing maps are
    re-ordered so the result is on an increasing grid.  The map must be
    strictly monotone on the sampled nodes.
    """
    g = as_density_grid(underlying)
    x, p = g.abscissae, g.densities
    c = np.asarray(cmap(x), dtype=float) * np.ones_like(x)
    d = np.abs(np.asarray(delta(x), dtype=float) * np.ones_like(x))
    dc = np.diff(c)
    if np.all(dc > 0):
        order = slice(None)
    elif np.all(dc < 0):
        order = slice(None, None, -1)
    else:
        i = int(np.flatnonzero(dc <= 0)[0] if dc[0] > 0 else np.flatnonzero(dc >= 0)[0])
        raise ValidationError(
            f"map is not strictly monotone on the grid: c({x[i]!r})={c[i]!r}, "
            f"c({x[i + 1]!r})={c[i + 1]!r}"
        )
    live = p > 0
    if np.any(live & ~(d > 0)):
        i = int(np.flatnonzero(live & ~(d > 0))[0])
        raise DomainError(f"future delta vanishes at a={x[i]!r}; pushforward has an atom")
    q = np.zeros_like(p)
    q[live] = p[live] / d[live]
    return DensityGrid(c[order], q[order], tails=g.tails)
