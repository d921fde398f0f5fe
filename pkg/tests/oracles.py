"""Independent reference computations used by the tests.

Nothing here imports the package's numerics: option values come from
scipy.stats, densities from scipy.stats distributions, and the maximum
entropy reference is a primal convex program solved with cvxpy.
"""
import math

import numpy as np
from scipy import integrate, stats


def bs_d1(a, E, r, sigma, tau, q=0.0):
    return (np.log(a / E) + (r - q + 0.5 * sigma**2) * tau) / (sigma * math.sqrt(tau))


def bs_put(a, E, r, sigma, tau):
    d1 = bs_d1(a, E, r, sigma, tau)
    d2 = d1 - sigma * math.sqrt(tau)
    return E * math.exp(-r * tau) * stats.norm.cdf(-d2) - a * stats.norm.cdf(-d1)


def bs_call(a, E, r, sigma, tau):
    d1 = bs_d1(a, E, r, sigma, tau)
    d2 = d1 - sigma * math.sqrt(tau)
    return a * stats.norm.cdf(d1) - E * math.exp(-r * tau) * stats.norm.cdf(d2)


def overlay_value(kind, strikes, a, r, sigma, tau):
    """Horizon value of underlying plus overlay, up to a constant, and its slope.

    Entropy ignores translations, so the value is shifted by a constant chosen
    via put-call parity to avoid cancelling against ``a``:

    * put: ``a + P(E) = C(E) + E e^{-r tau}``
    * spread: ``a + P(Eu) - P(El) = a + C(Eu) - C(El) + const``
    * collar: ``a + P(Ep) - C(Ec) = C(Ep) - C(Ec) + const``, written with
      puts above the strikes, where both calls are close to ``a``
    """
    C = lambda E: bs_call(a, E, r, sigma, tau)  # noqa: E731
    N = lambda E: stats.norm.cdf(bs_d1(a, E, r, sigma, tau))  # noqa: E731
    if kind == "put":
        (E,) = strikes
        return C(E), N(E)
    if kind == "put-spread":
        Eu, El = strikes
        return a + C(Eu) - C(El), 1.0 + N(Eu) - N(El)
    Ep, Ec = strikes
    P = lambda E: bs_put(a, E, r, sigma, tau)  # noqa: E731
    upper = (Ec - Ep) * math.exp(-r * tau) - (P(Ec) - P(Ep))
    return np.where(a < math.sqrt(Ep * Ec), C(Ep) - C(Ec), upper), N(Ep) - N(Ec)


def lognormal_nodes(nu, sigma, n=20001, width=6.0):
    """Geometric nodes over ``log_mean ± width·sigma`` and the density there."""
    m = nu - 0.5 * sigma**2
    a = np.exp(np.linspace(m - width * sigma, m + width * sigma, n))
    return a, stats.lognorm.pdf(a, s=sigma, scale=math.exp(m))


def entropy_quad(pdf, lo, hi, points=()):
    """``∫ p log p`` by adaptive quadrature."""

    def f(x):
        p = pdf(x)
        return p * math.log(p) if p > 0 else 0.0

    val, _ = integrate.quad(f, lo, hi, points=points or None, limit=500, epsabs=1e-12, epsrel=1e-12)
    return val


def maxent_primal(variance, skew, kurt, lo, hi, n=2001):
    """Entropy of the discretized maximum-entropy density.

    Maximizes ``-sum p log p`` over a uniform grid subject to the first four
    moments (mean 0).  Returns the differential entropy ``H + log h`` in nats.
    """
    import cvxpy as cp

    x = np.linspace(lo, hi, n)
    h = x[1] - x[0]
    sd = math.sqrt(variance)
    p = cp.Variable(n, nonneg=True)
    cons = [
        cp.sum(p) == 1,
        x @ p == 0,
        (x**2) @ p == variance,
        (x**3) @ p == skew * sd**3,
        (x**4) @ p == kurt * variance**2,
    ]
    prob = cp.Problem(cp.Maximize(cp.sum(cp.entr(p))), cons)
    prob.solve(solver=cp.CLARABEL)
    return prob.value + math.log(h)
