import math

import numpy as np
import pytest

from entrodiv.entropy import DensityGrid, Gaussian, LogNormal, d_measure_grid
from entrodiv.errors import DomainError, ValidationError
from entrodiv.transforms import diversification_benefit, gearing_benefit, transform_density


def test_identity_and_gearing():
    g = Gaussian(1.0)
    assert diversification_benefit(g, lambda a: np.ones_like(a)) == pytest.approx(0.0, abs=1e-15)
    assert diversification_benefit(g, lambda a: np.full_like(a, 2.0)) == pytest.approx(-math.log(2), abs=1e-12)


@pytest.mark.parametrize("lam, expected", [(1.0, 0.0), (2.0, -math.log(2)), (0.5, math.log(2))])
def test_gearing_benefit(lam, expected):
    assert gearing_benefit(lam) == pytest.approx(expected, abs=1e-15)


def test_gearing_matches_closed_forms():
    assert gearing_benefit(2.0) / math.log(2) == pytest.approx(-1.0)
    assert Gaussian(2.0).d_measure() - Gaussian(1.0).d_measure() == pytest.approx(gearing_benefit(2.0), abs=1e-15)
    with pytest.raises(ValidationError):
        gearing_benefit(0.0)


def test_wrong_sign_is_a_domain_error():
    with pytest.raises(DomainError, match="a="):
        diversification_benefit(Gaussian(1.0), lambda a: a)


def test_vanishing_delta_diverges():
    assert diversification_benefit(Gaussian(1.0), lambda a: np.zeros_like(a)) == math.inf
    assert diversification_benefit(Gaussian(1.0), lambda a: np.full_like(a, 1e-310)) == math.inf


def test_transform_identity_and_doubling():
    x = np.linspace(0, 1, 1001)
    g = DensityGrid(x, np.ones_like(x))
    same = transform_density(g, lambda a: a, lambda a: np.ones_like(a))
    np.testing.assert_array_equal(same.abscissae, g.abscissae)
    np.testing.assert_allclose(same.densities, g.densities)
    doubled = transform_density(g, lambda a: 2 * a, lambda a: np.full_like(a, 2.0))
    np.testing.assert_allclose(doubled.abscissae[[0, -1]], [0, 2])
    np.testing.assert_allclose(doubled.densities, 0.5)


def test_non_monotone_map_rejected():
    g = Gaussian(1.0).density_grid()
    with pytest.raises(ValidationError, match="monotone"):
        transform_density(g, lambda a: a * a, lambda a: 2 * a)


def test_two_routes_agree_for_a_smooth_concave_map():
    g = LogNormal(0.1, 0.25).density_grid()
    cmap, delta = np.log1p, lambda a: 1 / (1 + a)
    via_integral = diversification_benefit(g, delta)
    via_pushforward = d_measure_grid(transform_density(g, cmap, delta)).nats - d_measure_grid(g).nats
    assert via_integral == pytest.approx(via_pushforward, abs=1e-6)


def test_reflection_leaves_diversification_unchanged():
    g = Gaussian(0.7, mean=0.3).density_grid()
    flipped = transform_density(g, lambda a: -a, lambda a: -np.ones_like(a))
    assert d_measure_grid(flipped).nats == pytest.approx(d_measure_grid(g).nats, abs=1e-12)
    assert diversification_benefit(g, lambda a: -np.ones_like(a), increasing=False) == pytest.approx(0.0, abs=1e-15)


def test_decreasing_map_uses_absolute_delta():
    g = LogNormal(0.0, 0.3).density_grid()
    cmap, delta = (lambda a: -np.log1p(a)), (lambda a: -1 / (1 + a))
    b = diversification_benefit(g, delta, increasing=False)
    push = d_measure_grid(transform_density(g, cmap, delta)).nats - d_measure_grid(g).nats
    assert b == pytest.approx(push, abs=1e-6)


def test_composition():
    g = LogNormal(0.1, 0.25).density_grid()
    f, df = np.log1p, (lambda a: 1 / (1 + a))
    h, dh = (lambda c: c + 0.5 * np.tanh(c)), (lambda c: 1 + 0.5 / np.cosh(c) ** 2)
    whole = diversification_benefit(g, lambda a: dh(f(a)) * df(a))
    first = diversification_benefit(g, df)
    pushed = transform_density(g, f, df)
    second = diversification_benefit(pushed, dh)
    assert whole == pytest.approx(first + second, abs=1e-4)
