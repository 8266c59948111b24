"""Adaptive rational representation of frequency slices.

A slice f(ξ) sampled on a finite window is fitted by a partial fraction
c + Σ ρ_k/(ξ - p_k) with poles off the real axis.  Splitting the poles by
half-plane realizes the Cauchy projections analytically: poles in the
upper half-plane carry the part whose inverse transform lives on x > 0,
lower poles the x < 0 part, and the constant belongs to the minus side.
Pole locations come from an AAA fit; residues are then re-solved in the
least-squares sense on the full grid, which is what makes repeated
splits reproduce each other to near machine precision.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import AAA

#: poles closer to the real axis than this (relative to the window) are
#: discarded before the residue solve; smooth slice data cannot support them.
_REAL_AXIS_GUARD = 1e-9

_MAX_FIT_POINTS = 1200


@dataclass(frozen=True)
class RationalFn:
    """Partial fraction c + Σ ρ_k/(ξ - p_k) with Im p_k ≠ 0."""

    poles: np.ndarray
    residues: np.ndarray
    const: complex
    fit_error: float

    def __call__(self, xi: np.ndarray) -> np.ndarray:
        out = np.full(np.shape(xi), self.const, dtype=complex)
        for p, r in zip(self.poles, self.residues):
            out += r / (np.asarray(xi) - p)
        return out

    def deriv(self, xi: np.ndarray, order: int = 1) -> np.ndarray:
        fact = float(np.prod(np.arange(1, order + 1))) if order else 1.0
        out = np.zeros(np.shape(xi), dtype=complex)
        for p, r in zip(self.poles, self.residues):
            out += r * (-1) ** order * fact / (np.asarray(xi) - p) ** (order + 1)
        return out

    @property
    def upper(self) -> np.ndarray:
        return self.poles.imag > 0

    def plus_values(self, xi: np.ndarray) -> np.ndarray:
        """The part holomorphic in the lower half-plane (support x > 0)."""
        out = np.zeros(np.shape(xi), dtype=complex)
        for p, r in zip(self.poles[self.upper], self.residues[self.upper]):
            out += r / (np.asarray(xi) - p)
        return out

    def minus_values(self, xi: np.ndarray) -> np.ndarray:
        out = np.full(np.shape(xi), self.const, dtype=complex)
        for p, r in zip(self.poles[~self.upper], self.residues[~self.upper]):
            out += r / (np.asarray(xi) - p)
        return out

    def spatial(self, x: np.ndarray) -> np.ndarray:
        """Inverse transform of the pole part, exactly: iρ e^{ipx} on the
        half-line matching the pole's half-plane."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for p, r in zip(self.poles, self.residues):
            if p.imag > 0:
                m = x > 0
                out[m] += 1j * r * np.exp(1j * p * x[m])
            else:
                m = x < 0
                out[m] += -1j * r * np.exp(1j * p * x[m])
        return out

    def spatial_deriv(self, x: np.ndarray, order: int, side: str = "plus") -> np.ndarray:
        """(D_x)^order of the one-sided spatial profile, D = -i d/dx."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        if side == "plus":
            for p, r in zip(self.poles[self.upper], self.residues[self.upper]):
                out += 1j * r * p ** order * np.exp(1j * p * np.maximum(x, 0.0))
            out[x <= 0] = 0.0
        else:
            low = ~self.upper
            for p, r in zip(self.poles[low], self.residues[low]):
                out += -1j * r * p ** order * np.exp(1j * p * np.minimum(x, 0.0))
            out[x >= 0] = 0.0
        return out

    def energy(self, side: str) -> float:
        """L² energy of the one-sided spatial profile, in closed form.

        ⟨1/(·-p), 1/(·-q)⟩_{L²(ℝ)} = 2πi/(p - q̄) for poles in the same
        upper half-plane (mirror formula below); cross terms between the
        half-planes vanish.  The spatial normalization carries 1/(2π).
        """
        sel = self.upper if side == "plus" else ~self.upper
        p = self.poles[sel]
        r = self.residues[sel]
        if p.size == 0:
            return 0.0
        if side == "plus":
            gram = 2j * np.pi / (p[:, None] - np.conj(p[None, :]))
        else:
            gram = 2j * np.pi / (np.conj(p[None, :]) - p[:, None])
        val = np.real(np.einsum("j,jk,k->", r, gram, np.conj(r))) / (2 * np.pi)
        return max(val, 0.0)


def fit_rational(xi: np.ndarray, values: np.ndarray, rtol: float = 1e-13,
                 max_terms: int = 120) -> RationalFn:
    """Fit a partial fraction to slice samples: AAA poles, LSQ residues."""
    xi = np.asarray(xi, dtype=float)
    values = np.asarray(values, dtype=complex)
    if not np.all(np.isfinite(values)):
        raise ValueError("slice values must be finite")
    scale = float(np.abs(values).max())
    if scale == 0.0:
        return RationalFn(np.empty(0, complex), np.empty(0, complex), 0.0, 0.0)
    # constant slices: nothing to fit
    if np.abs(values - values[0]).max() <= 1e-15 * scale:
        return RationalFn(np.empty(0, complex), np.empty(0, complex),
                          complex(values[0]), 0.0)
    if xi.size > _MAX_FIT_POINTS:
        idx = np.unique(np.round(np.linspace(0, xi.size - 1, _MAX_FIT_POINTS)).astype(int))
    else:
        idx = np.arange(xi.size)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        approx = AAA(xi[idx], values[idx], rtol=rtol, max_terms=max_terms)
        try:
            approx.clean_up()
        except Exception:
            pass
        poles = approx.poles()
    win = xi[-1] - xi[0]
    poles = poles[np.abs(poles.imag) > _REAL_AXIS_GUARD * win]
    if poles.size == 0:
        c = complex(np.mean(values))
        err = float(np.abs(values - c).max())
        return RationalFn(np.empty(0, complex), np.empty(0, complex), c, err)
    basis = np.concatenate([1.0 / (xi[:, None] - poles[None, :]),
                            np.ones((xi.size, 1))], axis=1)
    coef, *_ = np.linalg.lstsq(basis, values, rcond=None)
    err = float(np.abs(basis @ coef - values).max())
    return RationalFn(poles, coef[:-1], complex(coef[-1]), err)
