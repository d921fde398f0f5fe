"""Portfolio Diversification Index from the covariance eigenvalue spectrum."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateInputError, ValidationError
from .weights import WeightsLike, as_weights

SYMMETRY_RTOL = 1e-10
PSD_RTOL = 1e-10


def validate_covariance(c) -> np.ndarray:
    """Return ``c`` as a float matrix after symmetry and PSD checks.

    Asymmetry beyond ``SYMMETRY_RTOL`` (relative to the largest entry) is an
    error; the matrix is never silently symmetrized.
    """
    c = np.array(c, dtype=float)
    if c.ndim != 2 or c.shape[0] != c.shape[1] or c.size == 0:
        raise ValidationError(f"covariance matrix must be square and non-empty, got shape {c.shape}")
    if not np.all(np.isfinite(c)):
        raise ValidationError("covariance matrix contains non-finite entries")
    scale = np.max(np.abs(c))
    if scale == 0.0:
        raise DegenerateInputError("covariance matrix is identically zero")
    asym = np.max(np.abs(c - c.T))
    if asym > SYMMETRY_RTOL * scale:
        i, j = np.unravel_index(np.argmax(np.abs(c - c.T)), c.shape)
        raise ValidationError(
            f"covariance matrix is not symmetric: c[{i},{j}]={c[i, j]!r} vs c[{j},{i}]={c[j, i]!r}"
        )
    return c


@dataclass(frozen=True)
class EigenSpectrum:
    """Eigenvalues sorted descending and normalized to sum to one."""

    lambdas: tuple[float, ...]

    def __post_init__(self):
        lam = np.asarray(self.lambdas, dtype=float)
        if lam.ndim != 1 or lam.size == 0:
            raise ValidationError("spectrum must be a non-empty 1-D sequence")
        if np.any(lam < 0) or np.any(np.diff(lam) > 0):
            raise ValidationError("spectrum must be non-negative and sorted in descending order")
        if abs(lam.sum() - 1.0) > 1e-12:
            raise ValidationError(f"spectrum sums to {lam.sum()!r}, not 1")
        object.__setattr__(self, "lambdas", tuple(float(v) for v in lam))

    def __len__(self) -> int:
        return len(self.lambdas)


def eigen_spectrum(c) -> EigenSpectrum:
    c = validate_covariance(c)
    ev = np.linalg.eigvalsh(0.5 * (c + c.T))[::-1]
    top = ev[0]
    if top <= 0.0:
        raise DegenerateInputError("covariance matrix has no positive eigenvalue")
    if ev[-1] < -PSD_RTOL * top:
        raise ValidationError(
            f"covariance matrix is indefinite: eigenvalue {ev[-1]!r} below -{PSD_RTOL:g} * {top!r}"
        )
    ev = np.clip(ev, 0.0, None)
    return EigenSpectrum(tuple(ev / ev.sum()))


def pdi(s: EigenSpectrum | Sequence[float]) -> float:
    """``2 sum_k k lambda_k - 1``: 1 for one bet, M for M equal bets."""
    if not isinstance(s, EigenSpectrum):
        s = EigenSpectrum(tuple(s))
    # compensated sum keeps uniform spectra at exactly M
    return 2.0 * math.fsum(k * lam for k, lam in enumerate(s.lambdas, 1)) - 1.0


def pdi_weighted(c, w: WeightsLike, allow_zero: bool = True) -> float:
    """PDI of the covariance of weighted return contributions ``w_i c_ij w_j``.

    Zero weights are allowed by default; their contributions simply vanish
    and the remaining weights are not renormalized.
    """
    c = validate_covariance(c)
    w = as_weights(w, allow_zero)
    if w.size != c.shape[0]:
        raise ValidationError(f"{w.size} weights for a {c.shape[0]}x{c.shape[0]} covariance matrix")
    return pdi(eigen_spectrum(w[:, None] * c * w[None, :]))
