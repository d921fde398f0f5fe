"""Maximum-entropy densities with prescribed variance, skewness and kurtosis.

The solution with four moment constraints is a quartic exponential family

    p(x) = exp(l1 x + l2 x**2 + l3 x**3 + l4 x**4 - log Z),

normalizable only for ``l4 < 0`` (or ``l3 = l4 = 0``, the Gaussian).  The
multipliers minimize the convex dual ``log Z(l) - l . mu``.  Its gradient is
the moment residual and its Hessian the covariance of the sufficient
statistics.  Newton steps are halved until they stay normalizable and
decrease the dual.

Not every feasible ``(skew, kurt)`` pair has a maximum-entropy density.  On
the real line the quartic family cannot reach kurtosis above 3 at zero skew,
and the reachable ceiling rises with ``|skew|``.  Outside that region the
iteration drives ``l4`` to zero and the solve is reported as not converged.

Work is done in standardized units (unit variance, zero mean) and mapped
back.  Negative skew is solved as the mirror image of positive skew, so
results are exactly symmetric.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .errors import InfeasibleMomentsError, ValidationError

GAUSSIAN_KURTOSIS = 3.0
_HALF_LOG_2PIE = 0.5 * math.log(2 * math.pi * math.e)


@dataclass(frozen=True)
class MomentTargets:
    """Variance plus standardized skewness and raw (normal = 3) kurtosis."""

    variance: float
    skewness: float = 0.0
    kurtosis: float = GAUSSIAN_KURTOSIS

    def __post_init__(self):
        if not (math.isfinite(self.variance) and self.variance > 0):
            raise ValidationError(f"variance must be positive, got {self.variance!r}")
        if not (math.isfinite(self.skewness) and math.isfinite(self.kurtosis)):
            raise ValidationError("skewness and kurtosis must be finite")

    @classmethod
    def from_excess(cls, variance: float, skewness: float, excess_kurtosis: float) -> "MomentTargets":
        return cls(variance, skewness, excess_kurtosis + GAUSSIAN_KURTOSIS)

    @property
    def feasible(self) -> bool:
        return self.kurtosis > 1.0 + self.skewness**2

    def gaussian_entropy(self) -> float:
        return _HALF_LOG_2PIE + 0.5 * math.log(self.variance)


@dataclass(frozen=True)
class MaxEntSolution:
    """Result of :func:`solve_maxent`.

    ``lagrange_multipliers`` are the coefficients of ``x, x**2, x**3, x**4``
    in the log-density of the zero-mean variable.  When ``converged`` is
    false the fields describe the last iterate and ``residual`` says how far
    its moments are from the targets.
    """

    lagrange_multipliers: tuple[float, float, float, float]
    log_normalizer: float
    converged: bool
    achieved_moments: MomentTargets
    entropy_nats: float
    residual: float
    iterations: int
    targets: MomentTargets
    #: Multipliers in standardized units for ``|skew|``; a warm start for a
    #: nearby solve.
    warm_start: tuple[float, ...] = field(default=(), repr=False)

    @property
    def d_measure(self) -> float:
        return -self.entropy_nats

    @property
    def delta_d(self) -> float:
        """``D(maxent) - D(normal of equal variance)``, non-negative in theory."""
        return self.targets.gaussian_entropy() - self.entropy_nats

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        l1, l2, l3, l4 = self.lagrange_multipliers
        return ((l4 * x + l3) * x + l2) * x * x + l1 * x - self.log_normalizer

    def pdf(self, x):
        return np.exp(self.logpdf(x))


class _OutOfDomain(Exception):
    pass


def _simpson_weights(n: int, h: float) -> np.ndarray:
    w = np.ones(n)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * h / 3.0


class _Quadrature:
    """Standardized moment engine on ``[-L, L]`` with automatic widening."""

    def __init__(self, half_width: float = 12.0, points: int = 4001, max_half_width: float = 80.0,
                 boundary_ratio: float = 1e-14):
        if points % 2 == 0:
            points += 1
        self.L0 = half_width
        self.points = points
        self.max_half_width = max_half_width
        self.boundary_ratio = boundary_ratio
        self._cache: dict[float, tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

    def _nodes(self, L: float):
        if L not in self._cache:
            z = np.linspace(-L, L, self.points)
            T = np.vstack([z, z**2, z**3, z**4])
            self._cache[L] = (z, T, _simpson_weights(self.points, z[1] - z[0]))
        return self._cache[L]

    def stats(self, lam: np.ndarray):
        """Moments, covariance of (z, z², z³, z⁴) and log Z under ``lam``."""
        if lam[3] > 0 or (lam[3] == 0 and lam[2] != 0):
            raise _OutOfDomain
        L = self.L0
        while True:
            z, T, w = self._nodes(L)
            e = lam @ T
            top = e.max()
            dens = np.exp(e - top)
            if dens[0] <= self.boundary_ratio and dens[-1] <= self.boundary_ratio:
                break
            L *= 1.5
            if L > self.max_half_width:
                raise _OutOfDomain
        wd = w * dens
        Z = wd.sum()
        pw = wd / Z
        mom = T @ pw
        cov = (T * pw) @ T.T - np.outer(mom, mom)
        return mom, cov, math.log(Z) + top


def _newton(mu, lam, quad, tol, max_iter):
    """Damped Newton on the dual; returns (converged, lam, mom, logZ, iterations)."""
    mom, cov, logz = quad.stats(lam)
    grad = mom - mu
    dual = logz - lam @ mu
    for it in range(max_iter):
        if np.max(np.abs(grad)) < tol:
            return True, lam, mom, logz, it
        try:
            step = np.linalg.solve(cov, -grad)
        except np.linalg.LinAlgError:
            return False, lam, mom, logz, it
        t = 1.0
        while True:
            trial = lam + t * step
            try:
                m2, c2, l2 = quad.stats(trial)
                d2 = l2 - trial @ mu
                if d2 <= dual + 1e-4 * t * (grad @ step) or (
                    d2 <= dual + 1e-12 * abs(dual) and np.linalg.norm(m2 - mu) < np.linalg.norm(grad)
                ):
                    break
            except _OutOfDomain:
                pass
            t *= 0.5
            if t < 1e-12:
                return False, lam, mom, logz, it
        lam, mom, cov, logz, dual, grad = trial, m2, c2, l2, d2, m2 - mu
    return bool(np.max(np.abs(grad)) < tol), lam, mom, logz, max_iter


_GAUSS_START = np.array([0.0, -0.5, 0.0, 0.0])
_INTERIOR_START = np.array([0.0, -0.5, 0.0, -1e-2])
_ANCHOR_KURTOSIS = 2.8


def _continuation(s, k, quad, tol, max_iter, max_solves=400):
    """Track the solution from the interior point ``(0, 2.8)`` to ``(s, k)``.

    The first leg moves to ``(s, k_mid)`` with ``k_mid`` safely above the
    feasibility bound, the second moves kurtosis to its target.
    """
    k0 = _ANCHOR_KURTOSIS
    k_mid = max(k0, 1.0 + s * s + 0.3)
    ok, lam, mom, logz, its = _newton(_moments(0.0, k0), _INTERIOR_START.copy(), quad, tol, max_iter)
    if not ok:
        return ok, lam, mom, logz, its, (0.0, k0)
    path = [(lambda f: (f * s, k0 + f * (k_mid - k0))), (lambda f: (s, k_mid + f * (k - k_mid)))]
    solves = 0
    for leg in path:
        f, step = 0.0, 0.25
        while f < 1.0:
            f_next = min(1.0, f + step)
            ok2, lam2, mom2, logz2, it2 = _newton(_moments(*leg(f_next)), lam, quad, tol, max_iter)
            solves += 1
            its += it2
            if ok2:
                f, lam, mom, logz = f_next, lam2, mom2, logz2
                step = min(step * 2.0, 0.5)
            else:
                step *= 0.5
            if step < 1.0 / 512 or solves > max_solves:
                return False, lam, mom, logz, its, leg(f)
    return True, lam, mom, logz, its, (s, k)


def _moments(s, k):
    return np.array([0.0, 1.0, s, k])


def solve_maxent(
    t: MomentTargets,
    *,
    initial: Sequence[float] | None = None,
    tol: float = 1e-10,
    max_iter: int = 200,
    continuation: bool = True,
) -> MaxEntSolution:
    """Maximum-entropy density matching ``t``.

    Parameters
    ----------
    t : MomentTargets
        Requires ``kurtosis > 1 + skewness**2``.
    initial : sequence of 4 floats, optional
        Warm start in standardized units, e.g. ``warm_start`` of a solution
        at nearby targets.
    tol : float
        Convergence tolerance on the standardized moment residual.
    continuation : bool
        If direct Newton fails, track the solution from a nearby solvable
        point.  Without it, points with kurtosis above 3 are generally missed.

    Raises
    ------
    InfeasibleMomentsError
        If no distribution has the target moments.
    """
    if not t.feasible:
        raise InfeasibleMomentsError(
            f"kurtosis {t.kurtosis:g} must exceed 1 + skewness**2 = {1 + t.skewness**2:g}"
        )
    sign = -1.0 if t.skewness < 0 else 1.0
    s, k = abs(t.skewness), t.kurtosis
    mu = _moments(s, k)
    quad = _Quadrature()

    starts = [] if initial is None else [np.array(initial, dtype=float)]
    starts += [_GAUSS_START.copy(), _INTERIOR_START.copy()]
    best = None
    total_its = 0
    for lam0 in starts:
        try:
            res = _newton(mu, lam0, quad, tol, max_iter)
        except _OutOfDomain:
            continue
        total_its += res[4]
        if res[0]:
            best = res
            break
        if best is None or np.max(np.abs(res[2] - mu)) < np.max(np.abs(best[2] - mu)):
            best = res
    if (best is None or not best[0]) and continuation:
        res = _continuation(s, k, quad, tol, max_iter)
        total_its += res[4]
        if res[0] or best is None:
            best = res[:5]
    if best is None:
        raise ValidationError("no start point yields a normalizable density")
    ok, lam, mom, logz, _ = best
    return _to_solution(t, sign, lam, mom, logz, ok, float(np.max(np.abs(mom - mu))), total_its)


def _to_solution(t, sign, lam, mom, logz, ok, residual, iterations) -> MaxEntSolution:
    sd = math.sqrt(t.variance)
    lam_std = lam * np.array([sign, 1.0, sign, 1.0])
    scales = sd ** -np.arange(1, 5)
    # standardized entropy: log Z - lam . E[T]
    h_std = logz - float(lam @ mom)
    achieved = MomentTargets(t.variance * mom[1], sign * mom[2] / mom[1] ** 1.5, mom[3] / mom[1] ** 2)
    return MaxEntSolution(
        lagrange_multipliers=tuple(float(v) for v in lam_std * scales),
        log_normalizer=float(logz + math.log(sd)),
        converged=bool(ok),
        achieved_moments=achieved,
        entropy_nats=float(h_std + math.log(sd)),
        residual=residual,
        iterations=int(iterations),
        targets=t,
        warm_start=tuple(float(v) for v in lam),
    )


class SurfaceRow(NamedTuple):
    skew: float
    kurt: float
    delta_d_nats: float
    defined: bool


def solve_surface(
    variance: float,
    skew_grid: Sequence[float],
    kurt_grid: Sequence[float],
    *,
    excess: bool = False,
) -> list[tuple[float, float, MaxEntSolution | None]]:
    """Solve every ``(skew, kurt)`` grid point, ordered by skew then kurtosis.

    Infeasible and non-converged points map to ``None``.  Each ``|skew|`` row
    is solved once in increasing kurtosis, warm started from the last
    converged point.  Its mirror at ``-|skew|`` is re-solved from that exact
    warm start.
    """
    if not variance > 0:
        raise ValidationError(f"variance must be positive, got {variance!r}")
    offset = GAUSSIAN_KURTOSIS if excess else 0.0
    kurts = sorted(float(k) for k in kurt_grid)
    rows: dict[float, dict[float, MaxEntSolution | None]] = {}
    out = []
    for s in sorted(float(v) for v in skew_grid):
        key = abs(s)
        if key not in rows:
            rows[key] = {}
            warm = None
            for k in kurts:
                t = MomentTargets(variance, key, k + offset)
                if not t.feasible:
                    rows[key][k] = None
                    continue
                sol = solve_maxent(t, initial=warm)
                rows[key][k] = sol if sol.converged else None
                if sol.converged:
                    warm = sol.warm_start
        for k in kurts:
            sol = rows[key][k]
            if sol is not None and s != key:
                sol = solve_maxent(MomentTargets(variance, s, k + offset), initial=sol.warm_start)
                sol = sol if sol.converged else None
            out.append((s, k, sol))
    return out


def d_difference_surface(
    variance: float,
    skew_grid: Sequence[float],
    kurt_grid: Sequence[float],
    *,
    excess: bool = False,
) -> list[SurfaceRow]:
    """``D(maxent) - D(normal)`` over a skew/kurtosis grid.

    Points that are infeasible or where the solver does not converge get
    ``defined=False`` and ``delta_d_nats = 0``.  Rows are ordered by skew,
    then kurtosis.
    """
    return [
        SurfaceRow(s, k, 0.0, False) if sol is None else SurfaceRow(s, k, sol.delta_d, True)
        for s, k, sol in solve_surface(variance, skew_grid, kurt_grid, excess=excess)
    ]
