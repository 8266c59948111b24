import numpy as np
import pytest

from fracwh.grids import FreqGrid, SpaceGrid


def test_freq_grid_layout():
    g = FreqGrid(256, 8.0)
    assert g.xi[0] == -8.0
    assert g.xi[-1] == pytest.approx(8.0 - g.dxi)
    assert g.dxi == pytest.approx(2 * 8.0 / 256)
    # stated duality: spatial spacing π/L, window [-X, X) with X = πN/(2L)
    assert g.dx == pytest.approx(np.pi / 8.0)
    assert g.X == pytest.approx(np.pi * 256 / 16.0)
    # staggered: no sample at zero, reflection-closed sample set
    assert np.abs(g.x).min() > 0
    assert np.allclose(np.sort(-g.x), np.sort(g.x))


def test_grid_validation():
    with pytest.raises(ValueError):
        FreqGrid(100, 8.0)
    with pytest.raises(ValueError):
        FreqGrid(32, 8.0)
    with pytest.raises(ValueError):
        SpaceGrid(256, -1.0)


def test_roundtrip_random(rng):
    g = FreqGrid(512, 16.0)
    u = rng.standard_normal(512) + 1j * rng.standard_normal(512)
    assert np.abs(g.to_space(g.to_freq(u)) - u).max() < 1e-12
    s = SpaceGrid(512, 16.0)
    assert np.abs(s.to_freq(s.to_space(u)) - u).max() < 1e-12


def test_gaussian_pair():
    g = SpaceGrid(2048, 32.0)
    u = np.exp(-g.x ** 2 / 2)
    fh = g.to_freq(u)
    assert np.abs(fh - np.sqrt(2 * np.pi) * np.exp(-g.xi ** 2 / 2)).max() < 1e-11


def test_parseval():
    rng = np.random.default_rng(0)
    g = SpaceGrid(1024, 16.0)
    u = rng.standard_normal(1024)
    f = g.to_freq(u)
    e_space = np.sum(np.abs(u) ** 2) * g.dx
    e_freq = np.sum(np.abs(f) ** 2) * g.dxi / (2 * np.pi)
    assert abs(e_space - e_freq) < 1e-10 * e_space


def test_shift_phase_convention():
    # a pure exponential e^{i x ξ₀} concentrates at ξ₀ under the e^{-ixξ}
    # convention
    g = SpaceGrid(1024, 16.0)
    k0 = g.xi[700]
    u = np.exp(1j * g.x * k0)
    f = g.to_freq(u)
    assert np.argmax(np.abs(f)) == 700
