import numpy as np
import pytest

from fracwh.cauchy import (H_0, H_MINUS1, FreqSlice, SpaceSlice,
                           GridMismatchError, fourier_slice, h_minus, h_plus,
                           holomorphy_residual, inverse_fourier_slice,
                           projection_defects, random_slice, seminorm_estimate)


def test_slice_validation(fgrid):
    with pytest.raises(GridMismatchError):
        FreqSlice(fgrid, np.zeros(7))
    with pytest.raises(ValueError):
        FreqSlice(fgrid, np.zeros(fgrid.N), decay_class="bogus")


def test_fourier_pair_exponential(fgrid):
    # e^{-x}1_{x>0} transforms to 1/(1+iξ); on the sampled grid the match
    # is exact against the alias-corrected (periodized) reference and
    # approximate against the line transform
    x = fgrid.x
    u = SpaceSlice(fgrid, np.where(x > 0, np.exp(-np.maximum(x, 0.0)), 0.0))
    f = fourier_slice(u)
    line = 1.0 / (1.0 + 1j * fgrid.xi)
    assert np.abs(f.values - line).max() < 2e-2
    alias = line.copy()
    for mshift in range(1, 4000):
        for s in (mshift, -mshift):
            alias = alias + (-1.0) ** s / (1.0 + 1j * (fgrid.xi + 2 * fgrid.L * s))
    assert np.abs(f.values - alias).max() < 1e-5


def test_fourier_roundtrip(fgrid, rng):
    f = FreqSlice(fgrid, rng.standard_normal(fgrid.N)
                  + 1j * rng.standard_normal(fgrid.N))
    back = fourier_slice(inverse_fourier_slice(f))
    assert np.abs(back.values - f.values).max() < 1e-12


def test_spaceslice_parseval(fgrid, rng):
    u = SpaceSlice(fgrid, rng.standard_normal(fgrid.N))
    f = fourier_slice(u)
    e_space = np.sum(np.abs(u.values) ** 2) * fgrid.dx
    e_freq = np.sum(np.abs(f.values) ** 2) * fgrid.dxi / (2 * np.pi)
    assert abs(e_space - e_freq) <= 1e-10 * e_space


def test_projection_pure_plus(fgrid):
    f = FreqSlice(fgrid, 1.0 / (1.0 + 1j * fgrid.xi))
    assert np.abs(h_plus(f).values - f.values).max() < 1e-11
    assert np.abs(h_minus(f).values).max() < 1e-11


def test_projection_partial_fractions(fgrid):
    xi = fgrid.xi
    f = FreqSlice(fgrid, 1.0 / (1.0 + xi ** 2))
    assert np.abs(h_plus(f).values - 1.0 / (2 * (1 + 1j * xi))).max() < 1e-11
    assert np.abs(h_minus(f).values - 1.0 / (2 * (1 - 1j * xi))).max() < 1e-11


def test_projection_log_closed_form(fgrid):
    xi = fgrid.xi
    f = FreqSlice(fgrid, np.log((4.0 + xi ** 2) / (1.0 + xi ** 2)))
    exact = np.log((2.0 + 1j * xi) / (1.0 + 1j * xi))
    assert np.abs(h_plus(f).values - exact).max() < 1e-6


def test_projection_algebra_random(fgrid, rng):
    for _ in range(5):
        d = projection_defects(random_slice(rng, fgrid))
        assert d["sum"] <= 1e-10
        assert d["idempotence"] <= 1e-10
        assert d["orthogonality"] <= 1e-10
        assert d["conjugation"] <= 1e-10


def test_energy_split_normalization(fgrid, rng):
    # the one-sided energies partition the total: the two holomorphy
    # residuals are cos/sin of the same split
    for _ in range(3):
        f = random_slice(rng, fgrid)
        rp = holomorphy_residual(f, "plus")
        rm = holomorphy_residual(f, "minus")
        assert abs(rp ** 2 + rm ** 2 - 1.0) < 1e-10


def test_h0_limit_handling(fgrid):
    # constants belong to the minus part
    xi = fgrid.xi
    vals = 2.0 + 1.0 / (1.0 + 1j * xi)
    f = FreqSlice(fgrid, vals, decay_class=H_0)
    hp = h_plus(f)
    hm = h_minus(f)
    assert np.abs(hp.values - 1.0 / (1.0 + 1j * xi)).max() < 1e-10
    assert np.abs(hm.values - 2.0).max() < 1e-10
    assert np.abs(hp.values + hm.values - vals).max() < 1e-14


def test_edge_check(fgrid):
    ok = FreqSlice(fgrid, 1.0 / (1.0 + fgrid.xi ** 2))
    assert not ok.check_edges(edge_tol=1e-8)  # 1/ξ² tail at L=64
    tight = FreqSlice(fgrid, np.exp(-fgrid.xi ** 2))
    assert tight.check_edges(edge_tol=1e-12)


def test_holomorphy_residual_examples(fgrid):
    xi = fgrid.xi
    assert holomorphy_residual(FreqSlice(fgrid, 1 / (1 + 1j * xi)), "plus") <= 1e-10
    r = holomorphy_residual(FreqSlice(fgrid, 1 / (1 - 1j * xi)), "plus")
    assert abs(r - 1.0) < 1e-10
    r = holomorphy_residual(FreqSlice(fgrid, 1 / (1 + xi ** 2)), "plus")
    assert abs(r - np.sqrt(0.5)) < 1e-10
    with pytest.raises(ValueError):
        holomorphy_residual(FreqSlice(fgrid, 1 / (1 + xi ** 2)), "sideways")


def test_seminorm_examples(fgrid):
    xi = fgrid.xi
    v = seminorm_estimate(FreqSlice(fgrid, 1 / (1 + 1j * xi)), 0, 0)
    assert abs(v - 1.0) < 1e-6
    v = seminorm_estimate(FreqSlice(fgrid, 1 / (2 + 1j * xi)), 1, 0)
    assert abs(v - 1.0 / (2 * np.e)) < 1e-6
    with pytest.raises(ValueError):
        seminorm_estimate(FreqSlice(fgrid, 1 / (1 + 1j * xi)), 5, 0)


def test_seminorm_helmholtz_decay(fgrid_small):
    # sup |x ũ₊| for the reduced Helmholtz log slices decays in σ = ⟨ξ'⟩
    # at least like the S⁰ estimate allows (the measured rate is ~ -2)
    a, m = 0.5, 1.0
    vals = []
    for sig in (2.0, 4.0, 8.0):
        sp = np.sqrt(sig ** 2 - m ** 2)
        psip = a * np.log((sig + 1j * fgrid_small.xi) / (sp + 1j * fgrid_small.xi))
        vals.append(seminorm_estimate(FreqSlice(fgrid_small, psip), 1, 0))
    slope = np.polyfit(np.log([2.0, 4.0, 8.0]), np.log(vals), 1)[0]
    assert slope <= -0.9
