"""Cauchy projections h⁺/h⁻ on frequency-grid slices, with diagnostics.

A slice is the restriction to a uniform window of a function that is
smooth on the line and has matched asymptotic expansions in 1/ξ at both
ends (decaying, or tending to finite limits).  h⁺ extracts the part that
extends holomorphically into the lower half-plane (inverse transform
supported on x ≥ 0); h⁻ = id - h⁺.  Constants and the mean of the edge
limits are assigned to the minus part.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grids import FreqGrid
from .rational import RationalFn, fit_rational

H_MINUS1 = "H_minus1"
H_0 = "H_0"


class GridMismatchError(ValueError):
    pass


class DecayClassError(ValueError):
    pass


@dataclass(frozen=True)
class FreqSlice:
    """Complex samples of ξ_n ↦ f(ξ_n) on a FreqGrid."""

    grid: FreqGrid
    values: np.ndarray
    decay_class: str = H_MINUS1

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.N,):
            raise GridMismatchError(
                f"expected {self.grid.N} samples, got shape {v.shape}")
        object.__setattr__(self, "values", v)
        if self.decay_class not in (H_MINUS1, H_0):
            raise DecayClassError(f"unknown decay class {self.decay_class!r}")

    def edge_values(self):
        return self.values[0], self.values[-1]

    def check_edges(self, edge_tol: float = 1e-8) -> bool:
        """H_minus1 slices must be small at the window edges."""
        if self.decay_class != H_MINUS1:
            return True
        scale = np.abs(self.values).max()
        if scale == 0:
            return True
        lo, hi = self.edge_values()
        return max(abs(lo), abs(hi)) <= edge_tol * scale

    def rational(self, rtol: float = 1e-13) -> RationalFn:
        return fit_rational(self.grid.xi, self.values, rtol=rtol)


@dataclass(frozen=True)
class SpaceSlice:
    """Complex samples on the staggered spatial grid dual to a FreqGrid."""

    grid: FreqGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.N,):
            raise GridMismatchError(
                f"expected {self.grid.N} samples, got shape {v.shape}")
        object.__setattr__(self, "values", v)


def fourier_slice(u: SpaceSlice) -> FreqSlice:
    """Discrete transform with the e^{-ixξ} convention."""
    return FreqSlice(u.grid, u.grid.to_freq(u.values), decay_class=H_0)


def inverse_fourier_slice(f: FreqSlice) -> SpaceSlice:
    return SpaceSlice(f.grid, f.grid.to_space(f.values))


def _split(f: FreqSlice, rtol: float):
    """Common h± entry: H_0 limit handling plus the rational split."""
    vals = f.values
    limit = 0.0 + 0.0j
    if f.decay_class == H_0:
        lo, hi = f.edge_values()
        limit = 0.5 * (lo + hi)
        vals = vals - limit
    rat = fit_rational(f.grid.xi, vals, rtol=rtol)
    plus = rat.plus_values(f.grid.xi)
    return plus, limit, rat


def h_plus(f: FreqSlice, rtol: float = 1e-13) -> FreqSlice:
    """Projection onto boundary values of functions holomorphic in the
    lower half-plane; the inverse transform of the result is supported on
    the positive half-axis."""
    plus, _, _ = _split(f, rtol)
    return FreqSlice(f.grid, plus, decay_class=H_MINUS1)

def h_minus(f: FreqSlice, rtol: float = 1e-13) -> FreqSlice:
    """Complementary projection; h_plus + h_minus = id exactly on the grid.

    For H_0 input the mean of the two edge limits is absorbed here, so the
    polynomial (degree-0) part always sits in the minus term."""
    plus, _, _ = _split(f, rtol)
    return FreqSlice(f.grid, f.values - plus, decay_class=f.decay_class)


def holomorphy_residual(f: FreqSlice, side: str, rtol: float = 1e-13) -> float:
    """Relative L² mass of the inverse transform on the forbidden half-axis.

    0 means perfectly one-sided; 1 means entirely on the wrong side.
    Computed from the rational representation, whose one-sided energies
    have closed forms.
    """
    if side not in ("plus", "minus"):
        raise ValueError("side must be 'plus' or 'minus'")
    rat = f.rational(rtol=rtol)
    e_plus = rat.energy("plus")
    e_minus = rat.energy("minus")
    total = e_plus + e_minus
    if total == 0.0:
        return 0.0
    wrong = e_minus if side == "plus" else e_plus
    return float(np.sqrt(wrong / total))


def seminorm_estimate(f: FreqSlice, k: int, kp: int, rtol: float = 1e-13,
                      x_max: float = 60.0) -> float:
    """sup over x > 0 of |x^k D_x^{kp} (inverse transform of f)|.

    The raw value of the weighted sup; callers fit its growth in ⟨ξ'⟩
    themselves.  Requires k, kp ≤ 4.
    """
    if k > 4 or kp > 4 or k < 0 or kp < 0:
        raise ValueError("k and kp must be in 0..4")
    rat = f.rational(rtol=rtol)
    x = np.geomspace(1e-9, x_max, 6000)
    prof = rat.spatial_deriv(x, kp, side="plus")
    return float(np.abs(x ** k * prof).max())


def projection_defects(f: FreqSlice, rtol: float = 1e-13) -> dict:
    """Max-norm defects of the projection algebra on one slice: sum,
    idempotence, orthogonality, and the conjugation rule
    conj(h⁻f) = h⁺(conj f)."""
    scale = float(np.abs(f.values).max()) or 1.0
    hp = h_plus(f, rtol=rtol)
    hm = h_minus(f, rtol=rtol)
    d_sum = float(np.abs(hp.values + hm.values - f.values).max()) / scale
    hpp = h_plus(hp, rtol=rtol)
    d_idem = float(np.abs(hpp.values - hp.values).max()) / scale
    d_orth = float(np.abs(h_plus(hm, rtol=rtol).values).max()) / scale
    conj_in = FreqSlice(f.grid, np.conj(f.values), decay_class=f.decay_class)
    d_conj = float(np.abs(np.conj(h_plus(conj_in, rtol=rtol).values)
                          - hm.values).max()) / scale
    return {"sum": d_sum, "idempotence": d_idem,
            "orthogonality": d_orth, "conjugation": d_conj}


def random_slice(rng: np.random.Generator, grid: FreqGrid, n_poles: int = 6,
                 with_bump: bool = True) -> FreqSlice:
    """Random member of the decaying class: poles off the real axis plus an
    optional entire bump."""
    vals = np.zeros(grid.N, dtype=complex)
    xi = grid.xi
    for _ in range(n_poles):
        p = rng.uniform(-0.3 * grid.L, 0.3 * grid.L) \
            + 1j * rng.uniform(0.5, 8.0) * rng.choice([-1.0, 1.0])
        rho = rng.normal() + 1j * rng.normal()
        vals += rho / (xi - p)
    if with_bump:
        c = rng.uniform(-0.1 * grid.L, 0.1 * grid.L)
        vals += rng.normal() * np.exp(-(xi - c) ** 2 / rng.uniform(2.0, 20.0))
    return FreqSlice(grid, vals, decay_class=H_MINUS1)


def export_columns(f: FreqSlice) -> np.ndarray:
    """Columnar form (ξ, Re f, Im f) for text export."""
    return np.column_stack([f.grid.xi, f.values.real, f.values.imag])
