import math

import numpy as np
import pytest
from scipy import integrate

from entrodiv.errors import InfeasibleMomentsError, ValidationError
from entrodiv.maxent import MomentTargets, d_difference_surface, solve_maxent

from oracles import maxent_primal


def quad_moments(sol, lo, hi):
    """Mean, variance, skewness, kurtosis of ``sol.pdf`` by adaptive quadrature."""
    f = lambda x, k: x**k * float(sol.pdf(x))  # noqa: E731
    m = [integrate.quad(f, lo, hi, args=(k,), limit=400, epsabs=1e-14, epsrel=1e-13)[0] for k in range(5)]
    mean = m[1] / m[0]
    c = [sum(math.comb(k, j) * m[j] / m[0] * (-mean) ** (k - j) for j in range(k + 1)) for k in range(5)]
    return m[0], mean, c[2], c[3] / c[2] ** 1.5, c[4] / c[2] ** 2


@pytest.mark.parametrize("sigma", [0.1, 0.25, 1.0])
def test_gaussian_recovery(sigma):
    t = MomentTargets(sigma**2)
    sol = solve_maxent(t)
    assert sol.converged
    assert sol.entropy_nats == pytest.approx(0.5 * math.log(2 * math.pi * math.e * sigma**2), abs=1e-6)
    l1, l2, l3, l4 = sol.lagrange_multipliers
    assert abs(l3) < 1e-8 and abs(l4) < 1e-8
    assert l2 == pytest.approx(-1 / (2 * sigma**2), rel=1e-8)
    assert sol.delta_d == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize(
    "skew, kurt, lo, hi",
    [(0.0, 2.5, -6.0, 6.0), (0.5, 3.5, -8.0, 24.0), (0.0, 3.0, -10.0, 10.0)],
)
def test_entropy_against_primal_grid_oracle(skew, kurt, lo, hi):
    pytest.importorskip("cvxpy")
    sol = solve_maxent(MomentTargets(1.0, skew, kurt))
    assert sol.converged
    assert sol.entropy_nats == pytest.approx(maxent_primal(1.0, skew, kurt, lo, hi), abs=1e-6)


@pytest.mark.parametrize("skew, kurt", [(0.0, 2.5), (0.5, 3.5), (-0.8, 4.2), (1.0, 6.0), (0.3, 2.2)])
def test_moments_match_targets(skew, kurt):
    t = MomentTargets(0.0625, skew, kurt)
    sol = solve_maxent(t)
    assert sol.converged and sol.residual < 1e-8
    mass, mean, var, s, k = quad_moments(sol, -6.0, 6.0)
    assert mass == pytest.approx(1.0, abs=1e-8)
    assert mean == pytest.approx(0.0, abs=1e-8)
    assert var / 0.0625 == pytest.approx(1.0, abs=1e-8)
    assert s == pytest.approx(skew, abs=1e-7)
    assert k == pytest.approx(kurt, abs=1e-7)
    am = sol.achieved_moments
    assert (am.variance, am.skewness, am.kurtosis) == pytest.approx((var, s, k), abs=1e-8)
    assert sol.lagrange_multipliers[3] < 0


def test_entropy_below_gaussian_off_the_normal_point():
    for skew, kurt in [(0.0, 2.5), (0.4, 3.0), (0.7, 4.0), (0.0, 2.9)]:
        sol = solve_maxent(MomentTargets(0.0625, skew, kurt))
        assert sol.converged
        assert sol.delta_d >= 1e-9


def test_mirror_symmetry():
    a = solve_maxent(MomentTargets(0.0625, 0.6, 3.8))
    b = solve_maxent(MomentTargets(0.0625, -0.6, 3.8))
    assert a.delta_d == pytest.approx(b.delta_d, abs=1e-12)
    la, lb = np.array(a.lagrange_multipliers), np.array(b.lagrange_multipliers)
    np.testing.assert_allclose(lb, la * [-1, 1, -1, 1], rtol=1e-12)


def test_infeasible_targets_raise():
    with pytest.raises(InfeasibleMomentsError):
        solve_maxent(MomentTargets(1.0, 1.0, 2.0))
    with pytest.raises(ValidationError):
        MomentTargets(-1.0)


def test_outside_existence_region_reports_non_convergence():
    sol = solve_maxent(MomentTargets(0.0625, 0.0, 4.0))
    assert not sol.converged
    assert sol.residual > 1e-6


def test_excess_kurtosis_convention():
    a = solve_maxent(MomentTargets.from_excess(0.0625, 0.5, 0.5))
    b = solve_maxent(MomentTargets(0.0625, 0.5, 3.5))
    assert a.entropy_nats == pytest.approx(b.entropy_nats, abs=1e-12)


def test_small_surface():
    rows = d_difference_surface(0.0625, [-1.0, 0.0, 1.0], [2.0, 3.0, 4.0])
    by_point = {(r.skew, r.kurt): r for r in rows}
    assert by_point[(0.0, 3.0)].defined and abs(by_point[(0.0, 3.0)].delta_d_nats) < 1e-9
    assert not by_point[(1.0, 2.0)].defined and by_point[(1.0, 2.0)].delta_d_nats == 0.0
    assert not by_point[(0.0, 4.0)].defined
    assert by_point[(1.0, 4.0)].defined and by_point[(1.0, 4.0)].delta_d_nats > 0
    assert [(r.skew, r.kurt) for r in rows] == sorted(by_point)


def test_surface_excess_axis():
    rows = d_difference_surface(0.0625, [0.0], [0.0], excess=True)
    assert rows[0].kurt == 0.0 and rows[0].defined
