"""Discrete pseudodifferential operators on the line: Fourier multipliers,
x-dependent quadrature application, order-reducing operators (σ ± iξ_n)^μ
with exact half-line closed forms, truncations, support diagnostics, the
principal-value fractional-Laplacian oracle, and commutator symbols.

Order-reducing operators applied to half-line data carry an analytic
boundary-jet correction: the value/derivative jet of the input at the cut
is absorbed into a small sum of exponentials whose images under
(σ ± iξ)^μ are known in closed form (Kummer functions), and only the
twice-vanishing remainder goes through the FFT multiplier.  Without this
the window wrap of the slowly decaying transform pollutes the support
properties by several orders of magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy.special import gamma as _gamma, hyp1f1

from .grids import SpaceGrid
from .symbols import HomogeneousTerm, Symbol, eval_symbol

Region = Union[str, tuple]


class GridMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class GridFunction:
    """Complex samples on a SpaceGrid, optionally tagged with a support
    region ('plus', 'minus', or an (α, β) interval)."""

    grid: SpaceGrid
    values: np.ndarray
    support_tag: Optional[Region] = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.N,):
            raise GridMismatchError(
                f"expected {self.grid.N} samples, got {v.shape}")
        object.__setattr__(self, "values", v)

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.dx))

    def with_values(self, values, tag=None) -> "GridFunction":
        return GridFunction(self.grid, values, tag)


def region_mask(grid: SpaceGrid, region: Region) -> np.ndarray:
    x = grid.x
    if region == "plus":
        return x > 0
    if region == "minus":
        return x < 0
    lo, hi = region
    return (x >= lo) & (x <= hi)


def support_leak(u: GridFunction, region: Region) -> float:
    """Relative L² mass outside the region."""
    mask = region_mask(u.grid, region)
    total = np.sum(np.abs(u.values) ** 2)
    if total == 0.0:
        return 0.0
    outside = np.sum(np.abs(u.values[~mask]) ** 2)
    return float(np.sqrt(outside / total))


def sample(grid: SpaceGrid, fun: Callable, region: Optional[Region] = None) -> GridFunction:
    """Sample a callable; outside a given region the samples are zeroed."""
    vals = np.asarray(fun(grid.x), dtype=complex)
    if region is not None:
        vals = np.where(region_mask(grid, region), vals, 0.0)
    return GridFunction(grid, vals, support_tag=region)


# ------------------------------------------------------------- multipliers

def apply_multiplier(mult, u: GridFunction) -> GridFunction:
    """Op(m(ξ)) u via the grid transform pair; m is an array on grid.xi or
    a callable of ξ."""
    m = mult(u.grid.xi) if callable(mult) else np.asarray(mult)
    if m.shape != (u.grid.N,):
        raise GridMismatchError("multiplier sampled on a different grid")
    return GridFunction(u.grid, u.grid.to_space(m * u.grid.to_freq(u.values)))


def spectral_derivative(u: GridFunction, order: int = 1) -> GridFunction:
    return apply_multiplier((1j * u.grid.xi) ** order, u)


def apply_xdep(sym: Symbol, u: GridFunction, J: Optional[int] = None,
               chunk: int = 256) -> GridFunction:
    """Kohn-Nirenberg quadrature (2π)^{-1} Σ_k e^{ixξ_k} p(x,ξ_k) û(ξ_k) Δξ.

    O(N²) by design; N ≤ 4096 enforced."""
    g = u.grid
    if g.N > 4096:
        raise ValueError("x-dependent quadrature is limited to N <= 4096")
    uh = g.to_freq(u.values)
    xi = g.xi
    out = np.empty(g.N, dtype=complex)
    w = g.dxi / (2 * np.pi)
    for lo in range(0, g.N, chunk):
        hi = min(lo + chunk, g.N)
        xs = g.x[lo:hi]
        pvals = np.empty((hi - lo, g.N), dtype=complex)
        for i, xv in enumerate(xs):
            pvals[i] = [eval_symbol(sym, np.atleast_1d(xv), np.array([t]), J)
                        for t in xi]
        out[lo:hi] = (np.exp(1j * np.outer(xs, xi)) * pvals) @ uh * w
    return GridFunction(g, out)


def xi_symbol(mu: float, sign: int, sigma: float, xi: np.ndarray) -> np.ndarray:
    """(σ ± iξ)^μ with the principal branch (base has positive real part)."""
    return (sigma + 1j * sign * np.asarray(xi)) ** mu


# ----------------------------------------- half-line closed-form catalog
#
# Images of e^{-λx} 1_{x>0} under the order-reducing family, valid for any
# σ, λ > 0.  M is Kummer's confluent hypergeometric function.

def lift_exp(lam: float, mu: float, sigma: float, x) -> np.ndarray:
    """Ξ₊^{-μ} e⁺[e^{-λx}] = x^μ e^{-σx} M(1, 1+μ, (σ-λ)x)/Γ(1+μ), μ > 0."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape, dtype=float)
    p = x > 0
    out[p] = (x[p] ** mu * np.exp(-sigma * x[p])
              * hyp1f1(1.0, 1.0 + mu, (sigma - lam) * x[p]) / _gamma(1.0 + mu))
    return out


def dlift_exp(lam: float, mu: float, sigma: float, x) -> np.ndarray:
    """d/dx of lift_exp: x^{μ-1} e^{-σx}/Γ(μ) - λ·lift_exp (from the causal
    convolution form)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape, dtype=float)
    p = x > 0
    out[p] = (x[p] ** (mu - 1.0) * np.exp(-sigma * x[p]) / _gamma(mu)
              - lam * lift_exp(lam, mu, sigma, x[p]))
    return out


def raise_exp(lam: float, mu: float, sigma: float, x) -> np.ndarray:
    """Ξ₊^{μ} e⁺[e^{-λx}] for 0 < μ < 1:
    x^{-μ}e^{-σx}/Γ(1-μ) + (σ-λ) x^{1-μ} e^{-σx} M(1, 2-μ, (σ-λ)x)/Γ(2-μ)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape, dtype=float)
    p = x > 0
    z = (sigma - lam) * x[p]
    out[p] = (x[p] ** (-mu) * np.exp(-sigma * x[p]) / _gamma(1.0 - mu)
              + (sigma - lam) * x[p] ** (1.0 - mu) * np.exp(-sigma * x[p])
              * hyp1f1(1.0, 2.0 - mu, z) / _gamma(2.0 - mu))
    return out


def xi_plus_exp(lam: float, mu: float, sigma: float, x) -> np.ndarray:
    """Ξ₊^{μ} e⁺[e^{-λx}] on x > 0 for -1 < μ < 1 (identity at μ = 0)."""
    if abs(mu) < 1e-14:
        x = np.asarray(x, dtype=float)
        return np.where(x > 0, np.exp(-lam * np.maximum(x, 0.0)), 0.0)
    if mu < 0:
        return lift_exp(lam, -mu, sigma, x)
    return raise_exp(lam, mu, sigma, x)


def xi_minus_trunc_exp(lam: float, mu: float, sigma: float, x) -> np.ndarray:
    """r⁺ Ξ₋^{μ} e⁺[e^{-λx}] = (σ+λ)^μ e^{-λx} on x > 0, any real μ: the
    upper-half-plane pole is scaled, the branch-cut part is minus-supported
    and dies under r⁺."""
    x = np.asarray(x, dtype=float)
    return np.where(x > 0, (sigma + lam) ** mu * np.exp(-lam * np.maximum(x, 0.0)), 0.0)


_JET_RATES = (1.0, 2.0, 3.0)


def boundary_jet(u: GridFunction, side: str = "plus", n_points: int = 8):
    """(value, slope, curvature) of the one-sided data at the cut x = 0,
    from a one-sided polynomial fit of the nearest samples."""
    x = u.grid.x
    if side == "plus":
        sel = np.where(x > 0)[0][:n_points]
        xs = x[sel]
    else:
        sel = np.where(x < 0)[0][-n_points:]
        xs = -x[sel]
    vals = u.values[sel]
    cf_r = np.polyfit(xs, vals.real, 4)
    cf_i = np.polyfit(xs, vals.imag, 4)
    out = []
    for k in range(3):
        dr = np.polyval(np.polyder(cf_r, k), 0.0)
        di = np.polyval(np.polyder(cf_i, k), 0.0)
        out.append(dr + 1j * di)
    return tuple(out)


def jet_model_coeffs(jet) -> np.ndarray:
    """Coefficients c_s so Σ c_s e^{-λ_s x} matches value, slope, curvature."""
    lam = np.array(_JET_RATES)
    A = np.vstack([lam ** 0, -lam, lam ** 2])
    return np.linalg.solve(A, np.array(jet, dtype=complex))


def order_reduce(u: GridFunction, mu: float, sign: int, sigma: float = 1.0) -> GridFunction:
    """Apply Ξ_±^μ = Op((σ ± iξ_n)^μ).

    When the input's support side matches the operator (plus data under
    Ξ₊, minus data under Ξ₋) the boundary jet is absorbed analytically so
    support preservation survives discretization; the remainder, vanishing
    to second order at the cut, goes through the plain multiplier.  All
    other inputs use the plain multiplier directly."""
    if sigma < 1.0:
        raise ValueError("sigma must be >= 1")
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    g = u.grid
    matching = (u.support_tag == "plus" and sign > 0) or \
               (u.support_tag == "minus" and sign < 0)
    if not matching:
        return apply_multiplier(xi_symbol(mu, sign, sigma, g.xi), u)

    flip = u.support_tag == "minus"
    # a minus-supported input under Ξ₋ is the mirror of plus data under Ξ₊
    vals = u.values[::-1] if flip else u.values
    work = GridFunction(g, vals, support_tag="plus")
    jet = boundary_jet(work, "plus")
    coeffs = jet_model_coeffs(jet)
    if np.abs(coeffs).max() > 100.0 * max(np.abs(vals).max(), 1e-300):
        # data singular at the cut: no polynomial jet exists; the plain
        # multiplier is then the better-conditioned choice
        return apply_multiplier(xi_symbol(mu, sign, sigma, g.xi), u)
    x = g.x
    model_in = np.zeros(g.N, dtype=complex)
    model_out = np.zeros(g.N, dtype=complex)
    for c, lam in zip(coeffs, _JET_RATES):
        model_in += c * np.where(x > 0, np.exp(-lam * np.maximum(x, 0.0)), 0.0)
        model_out += c * xi_plus_exp(lam, mu, sigma, x)
    rem = work.values - model_in
    rem_out = g.to_space(xi_symbol(mu, +1, sigma, g.xi) * g.to_freq(rem))
    out = model_out + rem_out
    if flip:
        out = out[::-1]
    return GridFunction(g, out, support_tag=u.support_tag)


@dataclass(frozen=True)
class HalfLineImage:
    """r⁺(Ξ_sign^μ e⁺ w) with the jet model kept in closed form, so values
    and derivatives are available at arbitrary points of the half-line."""

    grid: SpaceGrid
    model: Callable
    model_deriv: Callable
    rem_values: np.ndarray
    rem_deriv_values: np.ndarray

    @property
    def values(self) -> np.ndarray:
        out = self.model(self.grid.x) + np.where(self.grid.x > 0, self.rem_values, 0.0)
        return np.where(self.grid.x > 0, out, 0.0)

    def grid_function(self) -> GridFunction:
        return GridFunction(self.grid, self.values, support_tag="plus")

    def _spline(self, vals):
        from scipy.interpolate import CubicSpline
        p = self.grid.x > 0
        return CubicSpline(self.grid.x[p], vals[p])

    def at(self, x) -> np.ndarray:
        return self.model(x) + self._spline(self.rem_values)(x)

    def deriv_at(self, x) -> np.ndarray:
        return self.model_deriv(x) + self._spline(self.rem_deriv_values)(x)


def xi_apply_halfline(w: GridFunction, mu: float, sign: int,
                      sigma: float = 1.0) -> HalfLineImage:
    """r⁺ Ξ_sign^μ e⁺ w for w supported on the plus side: analytic images of
    the boundary jet plus the FFT multiplier on the twice-vanishing
    remainder."""
    if sigma < 1.0:
        raise ValueError("sigma must be >= 1")
    g = w.grid
    work = GridFunction(g, np.where(g.x > 0, w.values, 0.0), support_tag="plus")
    jet = boundary_jet(work, "plus")
    coeffs = jet_model_coeffs(jet)
    x = g.x
    model_in = np.zeros(g.N, dtype=complex)
    for c, lam in zip(coeffs, _JET_RATES):
        model_in += c * np.where(x > 0, np.exp(-lam * np.maximum(x, 0.0)), 0.0)
    rem = work.values - model_in
    m = xi_symbol(mu, sign, sigma, g.xi)
    rem_hat = g.to_freq(rem)
    rem_out = g.to_space(m * rem_hat)
    rem_deriv = g.to_space(1j * g.xi * m * rem_hat)

    if sign > 0:
        def model(xx):
            xx = np.asarray(xx, dtype=float)
            out = np.zeros(xx.shape, dtype=complex)
            for c, lam in zip(coeffs, _JET_RATES):
                out += c * xi_plus_exp(lam, mu, sigma, xx)
            return out

        def model_deriv(xx):
            xx = np.asarray(xx, dtype=float)
            out = np.zeros(xx.shape, dtype=complex)
            if mu < 0:
                for c, lam in zip(coeffs, _JET_RATES):
                    out += c * dlift_exp(lam, -mu, sigma, xx)
            else:
                # fall back to a fine central difference of the closed form
                h = 1e-6
                return (model(np.asarray(xx) + h) - model(np.asarray(xx) - h)) / (2 * h)
            return out
    else:
        def model(xx):
            xx = np.asarray(xx, dtype=float)
            out = np.zeros(xx.shape, dtype=complex)
            for c, lam in zip(coeffs, _JET_RATES):
                out += c * xi_minus_trunc_exp(lam, mu, sigma, xx)
            return out

        def model_deriv(xx):
            xx = np.asarray(xx, dtype=float)
            out = np.zeros(xx.shape, dtype=complex)
            for c, lam in zip(coeffs, _JET_RATES):
                out += c * (sigma + lam) ** mu * (-lam) \
                    * np.where(xx > 0, np.exp(-lam * np.maximum(xx, 0.0)), 0.0)
            return out

    return HalfLineImage(g, model, model_deriv, rem_out, rem_deriv)


def apply_causal_multiplier(mult, u: GridFunction,
                            rtol: float = 1e-12) -> GridFunction:
    """Apply a plus-type multiplier (boundary value of a function
    holomorphic in the lower half-plane, e.g. a Wiener-Hopf plus factor)
    to plus-supported data through its causal kernel.

    The multiplier is fitted as c + Σ ρ_k/(ξ - p_k) with upper half-plane
    poles; each pole contributes the one-sided exponential convolution
    iρ ∫_0^x e^{ip(x-y)} u(y) dy, realized as a recursive filter.  Support
    preservation is exact (lower-triangular); pointwise accuracy is
    second order in the grid spacing.  Minus-supported data with a
    minus-type multiplier is handled by mirroring."""
    from .rational import fit_rational
    if u.support_tag not in ("plus", "minus"):
        raise ValueError("causal application needs support-tagged input")
    g = u.grid
    m = mult(g.xi) if callable(mult) else np.asarray(mult)
    flip = u.support_tag == "minus"
    vals = u.values[::-1] if flip else u.values
    mv = m[::-1].copy() if flip else m
    # mirrored minus data sees the reflected multiplier m(-ξ), which is
    # plus-type when m is minus-type; the standard grid reflection maps
    # ξ_k -> -ξ_k up to the half-open endpoint, folded here
    if flip:
        mv = np.roll(mv, 1)
    rat = fit_rational(g.xi, mv - 0.0, rtol=rtol)
    bad = np.abs(rat.residues[~(rat.poles.imag > 0)]).sum()
    scale = max(np.abs(mv).max(), 1e-300)
    if bad > 1e-8 * scale:
        raise ValueError(
            f"multiplier is not plus-type (wrong-side pole mass {bad:.2e})")
    x = g.x
    pos = x > 0
    out = rat.const * vals
    dx = g.dx
    for p, rho in zip(rat.poles[rat.poles.imag > 0],
                      rat.residues[rat.poles.imag > 0]):
        decay = np.exp(1j * p * dx)
        up = vals[pos]
        S = np.zeros(up.size, dtype=complex)
        for j in range(1, up.size):
            S[j] = decay * (S[j - 1] + up[j - 1])
        contrib = 1j * rho * dx * (0.5 * up + S)
        full = np.zeros(g.N, dtype=complex)
        full[pos] = contrib
        out = out + full
    out = np.where(pos, out, 0.0)
    if flip:
        out = out[::-1]
    return GridFunction(g, out, support_tag=u.support_tag)


@dataclass(frozen=True)
class DiscreteOp:
    """kind: 'multiplier' (frequency samples / callable), 'xdep' (Symbol),
    'orderreduce' (μ, sign, σ), 'composite' (list applied right to left),
    or 'identity'."""

    kind: str
    multiplier: Optional[object] = None
    symbol: Optional[Symbol] = None
    mu: float = 0.0
    sign: int = +1
    sigma: float = 1.0
    parts: tuple = ()

    def apply(self, u: GridFunction) -> GridFunction:
        if self.kind == "identity":
            return u
        if self.kind == "multiplier":
            return apply_multiplier(self.multiplier, u)
        if self.kind == "xdep":
            return apply_xdep(self.symbol, u)
        if self.kind == "orderreduce":
            return order_reduce(u, self.mu, self.sign, self.sigma)
        if self.kind == "composite":
            out = u
            for op in reversed(self.parts):
                out = op.apply(out)
            return out
        raise ValueError(f"unknown operator kind {self.kind!r}")


def truncate(P: DiscreteOp, u: GridFunction, region: Region) -> GridFunction:
    """P_+ = r⁺ P e⁺ relative to the region: zero-extend, apply, restrict.

    Half-line truncations of the order-reducing family carry the
    boundary-jet correction (the extension's jump at the cut is handled
    analytically), so r⁺Ξ∓e⁺ compositions stay accurate."""
    mask = region_mask(u.grid, region)
    ext = GridFunction(u.grid, np.where(mask, u.values, 0.0),
                       support_tag=region if region in ("plus", "minus") else None)
    if P.kind == "orderreduce" and region in ("plus", "minus"):
        flip = region == "minus"
        work = GridFunction(u.grid, ext.values[::-1] if flip else ext.values,
                            support_tag="plus")
        img = xi_apply_halfline(work, P.mu, -P.sign if flip else P.sign,
                                P.sigma)
        vals = img.values[::-1] if flip else img.values
        return GridFunction(u.grid, vals, support_tag=region)
    out = P.apply(ext)
    return GridFunction(u.grid, np.where(mask, out.values, 0.0),
                        support_tag=region)


# ------------------------------------------------- PV quadrature oracle

def frac_lap_constant(a: float) -> float:
    """c_{1,a} = 4^a Γ(1/2+a) / (√π |Γ(-a)|)."""
    return 4.0 ** a * _gamma(0.5 + a) / (np.sqrt(np.pi) * abs(_gamma(-a)))


def _pv_once(u: Callable, a: float, x: float, inner: float, n_inner: int,
             outer_span: float, n_outer: int) -> float:
    t = inner * (np.arange(n_inner + 1) / n_inner) ** 3
    ym = 0.5 * (t[1:] + t[:-1])
    dy = np.diff(t)
    ux = float(u(np.array([x]))[0])
    # below the float-cancellation scale the symmetric difference is pure
    # rounding noise that y^{-1-2a} amplifies; a local Taylor model
    # D ≈ -u''(x) y² takes over there
    y_ref = inner / 4.0
    d_ref = 2.0 * ux - float(u(np.array([x + y_ref]))[0]) \
        - float(u(np.array([x - y_ref]))[0])
    u2_est = abs(d_ref) / y_ref ** 2
    noise = 1e-15 * max(abs(ux), 1.0)
    y_floor = 30.0 * np.sqrt(noise / max(u2_est, 1e-300))
    k0 = int(np.searchsorted(ym, y_floor))
    if k0 > 0:
        lo = t[k0]
        I_in = (d_ref / y_ref ** 2) * lo ** (2.0 - 2 * a) / (2.0 - 2 * a)
    else:
        lo = 0.0
        I_in = 0.0
    D = 2.0 * ux - u(x + ym[k0:]) - u(x - ym[k0:])
    I_in += float(np.sum(D * ym[k0:] ** (-1.0 - 2 * a) * dy[k0:]))
    I_const = 2.0 * float(u(np.array([x]))[0]) * inner ** (-2 * a) / (2 * a)
    s = np.linspace(np.log(inner), np.log(outer_span), n_outer)
    yg = np.exp(s)
    ds = s[1] - s[0]
    w = np.full(n_outer, ds)
    w[0] = w[-1] = 0.5 * ds       # trapezoid in log-space
    w = w * yg
    vals = (u(x + yg) + u(x - yg)) * yg ** (-1.0 - 2 * a)
    if not np.all(np.isfinite(vals)):
        raise ValueError("unbounded tail: u must be bounded on the line")
    I_out = float(np.sum(vals * w))
    # power-law tail estimate beyond the trapezoid span, with u frozen at
    # the span boundary (annihilates constants exactly)
    I_tail = float(u(np.array([x + outer_span]))[0]
                   + u(np.array([x - outer_span]))[0]) \
        * outer_span ** (-2 * a) / (2 * a)
    return frac_lap_constant(a) * (I_in + I_const - I_out - I_tail)


def pv_fractional_laplacian_1d(u: Callable, a: float, x: float,
                               inner: float = 1.0, n_inner: int = 600,
                               outer_span: float = 1000.0,
                               n_outer: int = 4000,
                               richardson: bool = True) -> float:
    """PV quadrature of c_{1,a} ∫ (u(x) - u(x+y)) |y|^{-1-2a} dy.

    The symmetric difference 2u(x) - u(x+y) - u(x-y) cancels the PV
    singularity; inner nodes are cubically graded toward 0, the outer
    region uses the exact power-law tail for the u(x) term plus a trapezoid
    for the decaying part.  The second-order node-doubling Richardson
    combination removes the leading quadrature error.  u must be callable
    on the whole line.
    """
    if not (0 < a < 1):
        raise ValueError("a must lie in (0,1)")
    coarse = _pv_once(u, a, x, inner, n_inner, outer_span, n_outer)
    if not richardson:
        return coarse
    fine = _pv_once(u, a, x, inner, 2 * n_inner, outer_span, 2 * n_outer)
    return (4.0 * fine - coarse) / 3.0


# ------------------------------------------------- commutator symbols

def _zero_term(degree: float) -> HomogeneousTerm:
    return HomogeneousTerm(degree, lambda x, xi: 0.0)


@dataclass(frozen=True)
class RadialCommutator:
    """[P, x·∇] = P₁ - P₂ with P₁ = Op(ξ·∇_ξ p), P₂ = Op(x·∇_x p)."""

    p1: Symbol
    p2: Symbol
    #: True when ξ·∇_ξ p = 2a·p held exactly term by term (Euler collapse)
    homogeneous_collapse: bool


def commutator_symbol(sym: Symbol, kind: str):
    """Symbol of [P, ∂_j] (kind='partial_j', symbol -∂_{x_j} p) or of
    [P, x·∇] (kind='radial', returning the P₁/P₂ pair)."""
    if kind == "partial_j":
        if not sym.x_dependent:
            return Symbol(order=sym.order, terms=(_zero_term(sym.order),),
                          dimension=sym.dimension, name=sym.name + "_dcomm",
                          params=dict(sym.params))
        terms = []
        for j, t in enumerate(sym.terms):
            if t.dx_eval is None:
                raise ValueError("term lacks a closed-form x-derivative")
            terms.append(HomogeneousTerm(
                t.degree,
                (lambda tt: lambda x, xi: -tt.dx_eval(0, x, xi))(t)))
        return Symbol(order=sym.order, terms=tuple(terms),
                      x_dependent=True, dimension=sym.dimension,
                      name=sym.name + "_dcomm", params=dict(sym.params))
    if kind == "radial":
        # Euler: ξ·∇_ξ of a degree-d homogeneous term is d·term.
        p1_terms = tuple(
            HomogeneousTerm(t.degree,
                            (lambda tt: lambda x, xi: tt.degree * tt.eval(x, xi))(t))
            for t in sym.terms)
        p1 = Symbol(order=sym.order, terms=p1_terms, x_dependent=sym.x_dependent,
                    dimension=sym.dimension, name=sym.name + "_p1",
                    params=dict(sym.params),
                    full_eval=sym.radial_eval)
        if sym.x_dependent:
            p2_terms = tuple(
                HomogeneousTerm(
                    t.degree,
                    (lambda tt: lambda x, xi: float(np.asarray(x).reshape(-1)[0])
                     * tt.dx_eval(0, x, xi))(t))
                for t in sym.terms)
        else:
            p2_terms = tuple(_zero_term(t.degree) for t in sym.terms)
        p2 = Symbol(order=sym.order, terms=p2_terms, x_dependent=sym.x_dependent,
                    dimension=sym.dimension, name=sym.name + "_p2",
                    params=dict(sym.params))
        collapse = all(abs(t.degree - sym.order) < 1e-12 or _is_zero_term(sym, j)
                       for j, t in enumerate(sym.terms))
        return RadialCommutator(p1, p2, collapse)
    raise ValueError("kind must be 'partial_j' or 'radial'")


def _is_zero_term(sym: Symbol, j: int) -> bool:
    probe = np.ones(sym.dimension) / np.sqrt(sym.dimension)
    xs = np.zeros(sym.dimension)
    return abs(sym.terms[j].eval(xs, probe)) == 0.0


def export_columns(u: GridFunction) -> np.ndarray:
    return np.column_stack([u.grid.x, u.values.real, u.values.imag])
