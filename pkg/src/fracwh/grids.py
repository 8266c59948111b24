"""Uniform frequency and spatial grids with exact discrete Fourier transforms.

The transform convention is f̂(ξ) = ∫ e^{-i x ξ} f(x) dx with inverse
(2π)^{-1} ∫ e^{i x ξ} f̂(ξ) dξ.  Spatial samples sit at half-integer
offsets (no sample at x = 0), so half-line restrictions split the sample
set cleanly and reflection x → -x is an exact involution of the grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class FreqGrid:
    """Uniform frequency window [-L, L) with N samples, ξ_k = -L + 2Lk/N.

    The dual spatial grid is staggered: x_j = (j + 1/2 - N/2)·π/L, which
    covers [-X, X) with X = πN/(2L).
    """

    N: int
    L: float

    def __post_init__(self):
        if self.N < 64 or (self.N & (self.N - 1)) != 0:
            raise ValueError(f"N must be a power of two >= 64, got {self.N}")
        if self.L <= 0:
            raise ValueError("L must be positive")

    @property
    def dxi(self) -> float:
        return 2.0 * self.L / self.N

    @property
    def xi(self) -> np.ndarray:
        return -self.L + self.dxi * np.arange(self.N)

    @property
    def dx(self) -> float:
        return np.pi / self.L

    @property
    def X(self) -> float:
        return np.pi * self.N / (2.0 * self.L)

    @property
    def x(self) -> np.ndarray:
        return (np.arange(self.N) + 0.5 - self.N / 2) * self.dx

    def to_freq(self, u: np.ndarray) -> np.ndarray:
        """Samples on the staggered spatial grid -> frequency samples."""
        return _dft(u, self.x, self.xi, self.dx)

    def to_space(self, f: np.ndarray) -> np.ndarray:
        """Frequency samples -> samples on the staggered spatial grid."""
        return _idft(f, self.x, self.xi, self.dx)


@dataclass(frozen=True)
class SpaceGrid:
    """Uniform spatial window [-X, X) with N staggered samples.

    Samples x_j = (j + 1/2 - N/2)·2X/N; the dual frequency grid is the
    standard one ξ_k = (k - N/2)·π/X with half-width πN/(2X).
    """

    N: int
    X: float
    dimension: int = 1

    def __post_init__(self):
        if self.N < 64 or (self.N & (self.N - 1)) != 0:
            raise ValueError(f"N must be a power of two >= 64, got {self.N}")
        if self.X <= 0:
            raise ValueError("X must be positive")
        if self.dimension != 1:
            raise ValueError("only 1-d spatial grids are supported")

    @property
    def dx(self) -> float:
        return 2.0 * self.X / self.N

    @property
    def x(self) -> np.ndarray:
        return (np.arange(self.N) + 0.5 - self.N / 2) * self.dx

    @property
    def dxi(self) -> float:
        return np.pi / self.X

    @property
    def L(self) -> float:
        return np.pi * self.N / (2.0 * self.X)

    @property
    def xi(self) -> np.ndarray:
        return (np.arange(self.N) - self.N / 2) * self.dxi

    def freq_grid(self) -> FreqGrid:
        return FreqGrid(self.N, self.L)

    def to_freq(self, u: np.ndarray) -> np.ndarray:
        return _dft(u, self.x, self.xi, self.dx)

    def to_space(self, f: np.ndarray) -> np.ndarray:
        return _idft(f, self.x, self.xi, self.dx)

    def refined(self, factor: int = 2) -> "SpaceGrid":
        return SpaceGrid(self.N * factor, self.X, self.dimension)


def _phases(x: np.ndarray, xi: np.ndarray, dx: float):
    # e^{-i x_j xi_k} = e^{-i x_j xi_0} e^{-i (x_0 + j dx)(k dxi)}; factor the
    # FFT kernel e^{-2pi i jk/N} out and keep the two diagonal phases.
    N = x.size
    dxi = xi[1] - xi[0]
    ph_j = np.exp(-1j * x * xi[0])
    ph_k = np.exp(-1j * x[0] * (xi - xi[0]))
    assert abs(dx * dxi - 2 * np.pi / N) < 1e-12 * dx * dxi
    return ph_j, ph_k


def _dft(u: np.ndarray, x: np.ndarray, xi: np.ndarray, dx: float) -> np.ndarray:
    ph_j, ph_k = _phases(x, xi, dx)
    return dx * ph_k * np.fft.fft(u * ph_j)


def _idft(f: np.ndarray, x: np.ndarray, xi: np.ndarray, dx: float) -> np.ndarray:
    ph_j, ph_k = _phases(x, xi, dx)
    return np.fft.ifft(f / ph_k / dx) / ph_j
