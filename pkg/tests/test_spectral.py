import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entrodiv.errors import DegenerateInputError, ValidationError
from entrodiv.spectral import EigenSpectrum, eigen_spectrum, pdi, pdi_weighted


def test_eigen_spectrum_examples():
    np.testing.assert_allclose(eigen_spectrum(np.eye(3)).lambdas, [1 / 3] * 3, atol=1e-15)
    np.testing.assert_allclose(eigen_spectrum(np.diag([1.0, 4.0])).lambdas, [0.8, 0.2], atol=1e-15)
    v = np.array([1.0, 2.0, -0.5])
    np.testing.assert_allclose(eigen_spectrum(np.outer(v, v)).lambdas, [1, 0, 0], atol=1e-14)


def test_invalid_covariances():
    with pytest.raises(ValidationError, match="symmetric"):
        eigen_spectrum(np.array([[1.0, 0.5], [0.4, 1.0]]))
    with pytest.raises(ValidationError):
        eigen_spectrum(np.array([[1.0, 2.0], [2.0, 1.0]]))
    with pytest.raises(DegenerateInputError):
        eigen_spectrum(np.zeros((3, 3)))
    with pytest.raises(ValidationError):
        eigen_spectrum(np.ones((2, 3)))


def test_roundoff_negative_eigenvalue_is_clamped():
    c = np.array([[1.0, 1.0], [1.0, 1.0]])
    c[1, 1] -= 1e-13
    lam = eigen_spectrum(c).lambdas
    assert min(lam) >= 0.0


@pytest.mark.parametrize("s, expected", [([1.0], 1.0), ([1 / 3] * 3, 3.0), ([0.8, 0.2], 1.4)])
def test_pdi_examples(s, expected):
    assert pdi(s) == pytest.approx(expected, abs=1e-14)


def test_spectrum_validation():
    with pytest.raises(ValidationError):
        EigenSpectrum((0.2, 0.8))
    with pytest.raises(ValidationError):
        EigenSpectrum((0.7, 0.2))


def test_pdi_weighted_examples():
    assert pdi_weighted(np.eye(2), [0.5, 0.5]) == pytest.approx(2.0, abs=1e-14)
    c = np.array([[2.0, 0.3, 0.1], [0.3, 1.0, 0.2], [0.1, 0.2, 0.5]])
    assert pdi_weighted(c, [1.0, 0.0, 0.0]) == pytest.approx(1.0, abs=1e-14)
    expected = 2 * (0.64 / 0.68 + 2 * 0.04 / 0.68) - 1
    assert pdi_weighted(np.eye(2), [0.8, 0.2]) == pytest.approx(expected, abs=1e-14)
    assert expected == pytest.approx(1.1176, abs=1e-4)
    with pytest.raises(ValidationError):
        pdi_weighted(np.eye(3), [0.5, 0.5])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(0.0, 1.0), min_size=1, max_size=10).filter(lambda v: sum(v) > 1e-3))
def test_pdi_bounds(raw):
    lam = np.sort(np.array(raw) / np.sum(raw))[::-1]
    lam = lam / lam.sum()
    v = pdi(EigenSpectrum(tuple(lam)))
    assert 1 - 1e-12 <= v <= lam.size + 1e-12


def test_pdi_two_point_decreasing():
    a = np.linspace(0.5, 1.0, 101)
    v = np.array([pdi([x, 1 - x]) for x in a])
    assert np.all(np.diff(v) < 0)
