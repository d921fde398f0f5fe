"""Weight-only diversification indices and their comparison sweeps.

These measures look at portfolio fractions alone and ignore what the assets
actually do.  Weights must be strictly positive and sum to one; zero weights
are accepted only with ``allow_zero=True`` (``0 log 0`` is taken as 0).
Short positions are rejected outright.
"""
from __future__ import annotations

import math
from typing import NamedTuple, Sequence, Union

import numpy as np

from .errors import ValidationError

SUM_TOLERANCE = 1e-12


class WeightVector:
    """Validated portfolio weights."""

    __slots__ = ("_w",)

    def __init__(self, weights: Sequence[float], allow_zero: bool = False):
        w = np.array(weights, dtype=float).ravel()
        if w.size == 0:
            raise ValidationError("weight vector is empty")
        for i, wi in enumerate(w):
            if not math.isfinite(wi):
                raise ValidationError(f"weight[{i}] = {wi!r} is not finite")
            if wi < 0 or (wi == 0 and not allow_zero):
                kind = "zero" if wi == 0 else "negative"
                raise ValidationError(f"weight[{i}] = {wi!r} is {kind}; weights must be positive")
        total = float(w.sum())
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise ValidationError(f"weights sum to {total!r}, not 1 (tolerance {SUM_TOLERANCE:g})")
        w.setflags(write=False)
        self._w = w

    @property
    def weights(self) -> np.ndarray:
        return self._w

    def __len__(self) -> int:
        return self._w.size

    def __iter__(self):
        return iter(self._w)

    def __repr__(self) -> str:
        return f"WeightVector({self._w.tolist()!r})"


WeightsLike = Union[WeightVector, Sequence[float], np.ndarray]


def as_weights(w: WeightsLike, allow_zero: bool = False) -> np.ndarray:
    if isinstance(w, WeightVector):
        return w.weights
    return WeightVector(w, allow_zero=allow_zero).weights


def _log(x: np.ndarray, base: float) -> np.ndarray:
    if base == 2:
        return np.log2(x)
    if base == math.e:
        return np.log(x)
    raise ValidationError(f"log base must be 2 or e, got {base!r}")


def herfindahl(w: WeightsLike, allow_zero: bool = False) -> float:
    """``1 - sum(w**2)``; 0 for a single asset, ``1 - 1/N`` at equal weights."""
    w = as_weights(w, allow_zero)
    return float(1.0 - np.dot(w, w))


def herfindahl_rescaled(w: WeightsLike, allow_zero: bool = False) -> float:
    """``N/(N-1) * sum(1/N - w**2)``, scaled to reach 1 at equal weights."""
    w = as_weights(w, allow_zero)
    n = w.size
    if n < 2:
        raise ValidationError("rescaled Herfindahl needs at least two weights")
    return float(n / (n - 1) * np.sum(1.0 / n - w * w))


def weight_entropy(w: WeightsLike, base: float = 2, allow_zero: bool = False) -> float:
    """``-sum(w log w)`` in bits (``base=2``) or nats (``base=math.e``)."""
    w = as_weights(w, allow_zero)
    pos = w[w > 0]
    return float(-np.sum(pos * _log(pos, base)))


def weight_entropy_subdivision(
    top_weights: WeightsLike,
    sub_entropies: Sequence[float],
    base: float = 2,
    allow_zero: bool = False,
) -> float:
    """Entropy of a two-level portfolio from its levels.

    ``top_weights`` are the sub-portfolio weights and ``sub_entropies`` the
    weight entropies inside each sub-portfolio, in the same base.  The result
    equals the weight entropy of the flattened portfolio.
    """
    w = as_weights(top_weights, allow_zero)
    e = np.array(sub_entropies, dtype=float).ravel()
    if e.shape != w.shape:
        raise ValidationError(
            f"{e.size} sub-portfolio entropies given for {w.size} sub-portfolio weights"
        )
    if np.any(e < 0) or not np.all(np.isfinite(e)):
        raise ValidationError("sub-portfolio entropies must be finite and non-negative")
    return weight_entropy(w, base, allow_zero) + float(np.dot(w, e))


# ---------------------------------------------------------------------------
# Comparison sweeps
# ---------------------------------------------------------------------------


class TwoAssetRow(NamedTuple):
    w1: float
    entropy: float
    herfindahl: float
    entropy_contribution: float
    herfindahl_contribution: float


class ThreeAssetRow(NamedTuple):
    w1: float
    h: float
    entropy: float
    herfindahl: float
    diff: float


def two_asset_comparison(steps: int = 101) -> list[TwoAssetRow]:
    """Entropy and rescaled Herfindahl for ``w = (w1, 1 - w1)``.

    Both totals are scaled to a maximum of 1 at ``w1 = 0.5``; the
    contribution columns are the single-asset terms under the same scaling
    (``-w1 log2 w1`` and ``2 (1/2 - w1**2)``).  End points with a zero weight
    are dropped.
    """
    if steps < 2:
        raise ValidationError("steps must be >= 2")
    rows = []
    for w1 in np.linspace(0.0, 1.0, steps):
        if w1 <= 0.0 or w1 >= 1.0:
            continue
        w = (w1, 1.0 - w1)
        rows.append(
            TwoAssetRow(
                float(w1),
                weight_entropy(w, 2),
                herfindahl_rescaled(w),
                float(-w1 * math.log2(w1)),
                float(2.0 * (0.5 - w1 * w1)),
            )
        )
    return rows


def three_asset_comparison_grid(w1_steps: int = 61, h_steps: int = 61) -> list[ThreeAssetRow]:
    """Normalized entropy minus rescaled Herfindahl over three-asset portfolios.

    Portfolios are ``(w1, h (1 - w1), (1 - h)(1 - w1))`` with ``w1`` and ``h``
    on inclusive uniform grids over ``[0, 1]``; points with a zero weight are
    excluded.  Entropy is divided by ``log 3`` so both measures peak at 1.
    """
    if w1_steps < 2 or h_steps < 2:
        raise ValidationError("grid steps must be >= 2")
    log3 = math.log(3.0)
    hs = np.linspace(0.0, 1.0, h_steps)
    rows = []
    for w1 in np.linspace(0.0, 1.0, w1_steps):
        for h in hs:
            w = np.array([w1, h * (1.0 - w1), (1.0 - h) * (1.0 - w1)])
            if np.any(w <= 0.0):
                continue
            e = weight_entropy(w, math.e) / log3
            q = herfindahl_rescaled(w)
            rows.append(ThreeAssetRow(float(w1), float(h), e, q, e - q))
    return rows
