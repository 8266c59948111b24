import numpy as np
import pytest

from fracwh.grids import FreqGrid
from fracwh.rational import RationalFn, fit_rational


@pytest.fixture(scope="module")
def xi():
    return FreqGrid(2048, 64.0).xi


def test_fit_exact_rational(xi):
    poles = np.array([1 + 2j, -3 - 1.5j])
    res = np.array([0.5 - 0.2j, 1.1j])
    vals = res[0] / (xi - poles[0]) + res[1] / (xi - poles[1]) + 0.25
    rat = fit_rational(xi, vals)
    assert rat.fit_error < 1e-12
    assert abs(rat.const - 0.25) < 1e-10
    assert np.abs(rat(xi) - vals).max() < 1e-11


def test_fit_constant_and_zero(xi):
    z = fit_rational(xi, np.zeros_like(xi))
    assert z.poles.size == 0 and z.const == 0.0
    c = fit_rational(xi, np.full(xi.size, 2.5 + 0.5j))
    assert c.poles.size == 0
    assert c.const == pytest.approx(2.5 + 0.5j)


def test_fit_rejects_nonfinite(xi):
    vals = np.ones_like(xi, dtype=complex)
    vals[5] = np.nan
    with pytest.raises(ValueError):
        fit_rational(xi, vals)


def test_halfplane_split(xi):
    up = 1.0 / (xi - (2 + 1j))
    low = 1.0 / (xi - (-1 - 3j))
    rat = fit_rational(xi, up + low)
    assert np.abs(rat.plus_values(xi) - up).max() < 1e-11
    assert np.abs(rat.minus_values(xi) - low).max() < 1e-11


def test_spatial_profile(xi):
    # 1/(ξ - iσ) has spatial profile i e^{-σx} on x > 0
    sigma = 1.5
    rat = fit_rational(xi, 1.0 / (xi - 1j * sigma))
    x = np.array([0.5, 1.0, 3.0])
    prof = rat.spatial(x)
    assert np.abs(prof - 1j * np.exp(-sigma * x)).max() < 1e-10
    assert np.abs(rat.spatial(-x)).max() == 0.0


def test_energy_closed_form(xi):
    # ‖e^{-σx}θ(x)‖² = 1/(2σ), realized through the Gram formula
    sigma = 2.0
    rat = fit_rational(xi, -1j / (xi - 1j * sigma))  # transform of e^{-σx}θ
    assert rat.energy("plus") == pytest.approx(1.0 / (2 * sigma), rel=1e-12)
    assert rat.energy("minus") == 0.0


def test_deriv(xi):
    rat = fit_rational(xi, 1.0 / (xi - (1 + 2j)))
    d = rat.deriv(xi, 1)
    assert np.abs(d + 1.0 / (xi - (1 + 2j)) ** 2).max() < 1e-10
