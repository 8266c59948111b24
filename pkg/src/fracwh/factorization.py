"""Wiener-Hopf factorization of even order-0 symbol slices q = s₀ q⁻ q⁺,
the lower-order term recursion, and the plus-factor parametrix.

A slice is factorized by taking a continuous branch of log(q/s₀) off the
avoided ray, splitting it with the Cauchy projections, and exponentiating
the parts.  Because h⁺ + h⁻ = id exactly on the grid, the multiplicative
reconstruction is exact up to the accuracy of the rational split.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .cauchy import H_0, H_MINUS1, FreqSlice, h_plus, holomorphy_residual
from .grids import FreqGrid
from .rational import fit_rational
from .symbols import RayAngle, Symbol, boundary_factor_s0, eval_symbol


class FactorizationError(ValueError):
    pass


class RayViolationError(FactorizationError):
    pass


class VanishingSymbolError(FactorizationError):
    pass


class EdgeLimitError(FactorizationError):
    pass


@dataclass
class FactorizationResult:
    q_plus: FreqSlice
    q_minus: FreqSlice
    s0: complex
    mult_residual: float
    plus_leak: float
    minus_leak: float
    psi_plus: Optional[np.ndarray] = None
    psi_minus: Optional[np.ndarray] = None
    xi_prime: Optional[float] = None

    def edge_deviation(self) -> float:
        """max |q± - 1| at the window edges (they must tend to 1)."""
        devs = [abs(self.q_plus.values[0] - 1), abs(self.q_plus.values[-1] - 1),
                abs(self.q_minus.values[0] - 1), abs(self.q_minus.values[-1] - 1)]
        return float(max(devs))


def ray_log(values: np.ndarray, ray: RayAngle) -> np.ndarray:
    """Branch of log continuous on C minus the ray re^{iθ}, shifted by a
    multiple of 2πi so the window-edge phase is as close to 0 as possible."""
    theta = ray.theta
    # arg in (θ, θ+2π)
    arg = theta + np.pi + np.angle(-values * np.exp(-1j * theta))
    shift = 2 * np.pi * np.round(0.5 * (arg[0] + arg[-1]) / (2 * np.pi))
    return np.log(np.abs(values)) + 1j * (arg - shift)


def factorize_slice(q: FreqSlice, ray: RayAngle, s0: Optional[complex] = None,
                    ray_tol: float = 1e-6, edge_match_tol: float = 1e-3,
                    rtol: float = 1e-13) -> FactorizationResult:
    """Factor an even order-0 slice as s₀ q⁻ q⁺ (plus factor holomorphic in
    the lower half-plane, minus factor in the upper).

    If s0 is not given it is recovered from the fitted value at infinity,
    so q± are normalized to tend to 1 at the window edges.
    """
    vals = q.values
    scale = float(np.abs(vals).max())
    if scale == 0.0 or np.abs(vals).min() <= 1e-14 * scale:
        raise VanishingSymbolError("symbol slice vanishes on the grid")
    lo, hi = vals[0], vals[-1]
    if abs(lo - hi) > edge_match_tol * scale:
        raise EdgeLimitError(
            f"edge limits differ: {lo} vs {hi}; slice not even/normalized")
    s_ref = 0.5 * (lo + hi) if s0 is None else complex(s0)
    w = vals / s_ref
    # both the raw values and the normalized ones must stay off the ray
    # (the normalization rotates the cut)
    for probe in (vals, w):
        ang_dist = np.abs((np.angle(probe) - ray.theta + np.pi) % (2 * np.pi) - np.pi)
        if ang_dist.min() < ray_tol:
            raise RayViolationError(
                f"values approach the ray θ={ray.theta:.4f} "
                f"(min angular distance {ang_dist.min():.2e})")
    psi_hat = ray_log(w, ray)
    if np.abs(psi_hat).max() <= 1e-14:
        one = np.ones(q.grid.N, dtype=complex)
        qp = FreqSlice(q.grid, one, decay_class=H_MINUS1)
        return FactorizationResult(qp, qp, s_ref, 0.0, 0.0, 0.0,
                                   psi_plus=np.zeros(q.grid.N, complex),
                                   psi_minus=np.zeros(q.grid.N, complex))
    rat = fit_rational(q.grid.xi, psi_hat, rtol=rtol)
    if s0 is None:
        s_ref = s_ref * np.exp(rat.const)
        psi_p = rat.plus_values(q.grid.xi)
        psi_m = rat.minus_values(q.grid.xi) - rat.const
    else:
        # keep the caller's s0; the fitted constant stays in the minus factor
        psi_p = rat.plus_values(q.grid.xi)
        psi_m = rat.minus_values(q.grid.xi)
        psi_m = psi_m + (psi_hat - rat(q.grid.xi))  # fold fit defect left
    qp_vals = np.exp(psi_p)
    qm_vals = vals / (s_ref * qp_vals)
    q_plus = FreqSlice(q.grid, qp_vals, decay_class=H_MINUS1)
    q_minus = FreqSlice(q.grid, qm_vals, decay_class=H_MINUS1)
    recon = s_ref * qm_vals * qp_vals
    mult_res = float(np.abs(vals - recon).max() / scale)
    plus_leak = holomorphy_residual(
        FreqSlice(q.grid, qp_vals - 1.0), "plus", rtol=rtol)
    minus_leak = holomorphy_residual(
        FreqSlice(q.grid, qm_vals - 1.0), "minus", rtol=rtol)
    return FactorizationResult(q_plus, q_minus, complex(s_ref), mult_res,
                               plus_leak, minus_leak,
                               psi_plus=psi_p, psi_minus=psi_m)


def reduced_slice(sym: Symbol, x, xi_prime, grid: FreqGrid) -> FreqSlice:
    """Order-0 reduction q = p·|ξ|^{-2a} sampled along ξ_n at fixed ξ'."""
    xi_n = grid.xi
    n = sym.dimension
    vals = np.empty(grid.N, dtype=complex)
    xp = np.asarray(x, dtype=float)
    e_n = np.zeros(n)
    e_n[-1] = 1.0
    for i, t in enumerate(xi_n):
        if n == 1:
            xi = np.array([t])
        else:
            xi = np.concatenate([np.atleast_1d(np.asarray(xi_prime, float)),
                                 [t]])
        r = np.linalg.norm(xi)
        if r < 1e-12:
            # directional limit at the origin; valid for homogeneous symbols
            if len(sym.terms) > 1:
                raise FactorizationError(
                    "slice through ξ = 0 undefined for symbols with "
                    "lower-order terms; use |ξ'| >= 1")
            vals[i] = sym.terms[0].eval(xp, e_n)
            continue
        if sym.full_eval is not None:
            p = sym.full_eval(xp, xi)
        else:
            p = eval_symbol(sym, xp, xi)
        vals[i] = p * r ** (-sym.order)
    return FreqSlice(grid, vals, decay_class=H_0)


def factorize_principal(sym: Symbol, x, xi_prime_list: Sequence,
                        grid: Optional[FreqGrid] = None,
                        ray: Optional[RayAngle] = None) -> list:
    """Factor the reduced symbol slice by slice; s₀ = p₀(x, e_n) once per x."""
    grid = grid or FreqGrid(4096, 64.0)
    ray = ray or RayAngle(np.pi)
    e_n = np.zeros(sym.dimension)
    e_n[-1] = 1.0
    s0 = boundary_factor_s0(sym, x, e_n)
    out = []
    for xp in np.atleast_1d(np.asarray(xi_prime_list, dtype=float)):
        sl = reduced_slice(sym, x, xp, grid)
        res = factorize_slice(sl, ray, s0=s0)
        res.xi_prime = float(xp)
        out.append(res)
    return out


def exp_series_tail(psi_plus: np.ndarray, n_terms: int = 30) -> float:
    """Sup-norm gap between exp(ψ₊) and its truncated power series; the
    majorant bound guarantees it is ≤ ‖ψ₊‖∞^{n+1}/(n+1)! · e^{‖ψ₊‖∞}."""
    target = np.exp(psi_plus)
    part = np.ones_like(psi_plus)
    term = np.ones_like(psi_plus)
    for k in range(1, n_terms + 1):
        term = term * psi_plus / k
        part = part + term
    return float(np.abs(target - part).max())


# ---------------------------------------------------------- expansions

@dataclass
class SymbolExpansion:
    """Terms of decreasing order on an (x-node × frequency) grid.

    terms[j] has order -j (tag).  x_nodes is a uniform periodic grid on
    [0, 2π) so x-derivatives are spectral; x-independent expansions use a
    single node.
    """

    grid: FreqGrid
    x_nodes: np.ndarray
    terms: dict

    @property
    def nx(self) -> int:
        return self.x_nodes.size

    @property
    def max_j(self) -> int:
        return max(self.terms) if self.terms else -1

    def term(self, j: int) -> np.ndarray:
        if j in self.terms:
            return self.terms[j]
        return np.zeros((self.nx, self.grid.N), dtype=complex)

    def copy(self) -> "SymbolExpansion":
        return SymbolExpansion(self.grid, self.x_nodes,
                               {j: v.copy() for j, v in self.terms.items()})

    @staticmethod
    def from_slices(grid: FreqGrid, x_nodes: np.ndarray,
                    slices: dict) -> "SymbolExpansion":
        terms = {}
        for j, arr in slices.items():
            arr = np.asarray(arr, dtype=complex)
            if arr.ndim == 1:
                arr = np.tile(arr, (len(x_nodes), 1))
            terms[j] = arr
        return SymbolExpansion(grid, np.asarray(x_nodes, float), terms)

    def x_deriv(self, arr: np.ndarray, order: int = 1) -> np.ndarray:
        """Spectral ∂_x on the periodic x-grid (zero for a single node)."""
        if self.nx == 1 or order == 0:
            return np.zeros_like(arr) if order else arr
        k = np.fft.fftfreq(self.nx, d=(self.x_nodes[1] - self.x_nodes[0])) * 2 * np.pi
        return np.fft.ifft((1j * k[:, None]) ** order * np.fft.fft(arr, axis=0), axis=0)

    def xi_deriv(self, arr: np.ndarray, order: int = 1,
                 rtol: float = 1e-12) -> np.ndarray:
        """∂_ξ via the rational representation of each x-row (analytic)."""
        if order == 0:
            return arr
        out = np.empty_like(arr)
        for i in range(arr.shape[0]):
            rat = fit_rational(self.grid.xi, arr[i], rtol=rtol)
            # the constant part differentiates to zero
            out[i] = rat.deriv(self.grid.xi, order)
        return out


def leibniz_product(aexp: SymbolExpansion, bexp: SymbolExpansion,
                    K: int) -> SymbolExpansion:
    """Truncated composition law a#b = Σ_α ∂_ξ^α a · D_x^α b / α!, regrouped
    by homogeneity down to order -K (1-d x, so α is a scalar index)."""
    if aexp.grid.N != bexp.grid.N or aexp.nx != bexp.nx:
        raise ValueError("expansion grids do not match")
    out = {}
    for j in range(K + 1):
        acc = np.zeros((aexp.nx, aexp.grid.N), dtype=complex)
        for j1 in range(j + 1):
            for beta in range(j - j1 + 1):
                j2 = j - j1 - beta
                if j1 not in aexp.terms or j2 not in bexp.terms:
                    continue
                da = aexp.xi_deriv(aexp.terms[j1], beta)
                db = bexp.x_deriv(bexp.terms[j2], beta)
                acc += da * (-1j) ** beta * db / math.factorial(beta)
        out[j] = acc
    return SymbolExpansion(aexp.grid, aexp.x_nodes, out)


def lower_order_step(q_terms: SymbolExpansion, qplus: SymbolExpansion,
                     qminus: SymbolExpansion, k: int,
                     edge_tol: float = 0.05):
    """One step of the factor recursion: split the order -k defect

        S_k = q_k/q₀ - (1/q₀) Σ' ∂_ξ^β q_{j₁}⁻ D_x^β q_{j₂}⁺ / β!

    (sum over j₁+j₂+|β| = k excluding the two unknown extreme terms) into
    its plus/minus parts and scale by q₀±.  Returns (q_k⁺, q_k⁻)."""
    if 0 not in qplus.terms or 0 not in qminus.terms:
        raise ValueError("principal factor terms are required first")
    grid, x_nodes = q_terms.grid, q_terms.x_nodes
    q0 = q_terms.term(0)
    if np.abs(q0).min() == 0.0:
        raise VanishingSymbolError("principal term vanishes")
    acc = q_terms.term(k) / q0
    for j1 in range(k + 1):
        for beta in range(k - j1 + 1):
            j2 = k - j1 - beta
            if (j1 == k and beta == 0) or (j2 == k and beta == 0):
                continue  # unknown terms stay on the left-hand side
            if j1 not in qminus.terms or j2 not in qplus.terms:
                continue
            da = qminus.xi_deriv(qminus.terms[j1], beta)
            db = qplus.x_deriv(qplus.terms[j2], beta)
            acc -= da * (-1j) ** beta * db / math.factorial(beta) / q0
    qk_p = np.empty_like(acc)
    qk_m = np.empty_like(acc)
    scale = max(np.abs(acc).max(), 1e-300)
    edge = max(np.abs(acc[:, 0]).max(), np.abs(acc[:, -1]).max())
    if edge > edge_tol * scale and scale > 1e-12:
        raise FactorizationError(
            f"recursion right side lacks edge decay at k={k} "
            f"(edge/scale {edge / scale:.2e}); parity or type violation upstream")
    for i in range(acc.shape[0]):
        sl = FreqSlice(grid, acc[i], decay_class=H_MINUS1)
        hp = h_plus(sl).values
        qk_p[i] = qplus.terms[0][i] * hp
        qk_m[i] = qminus.terms[0][i] * (acc[i] - hp)
    return qk_p, qk_m


def factor_expansion(q_terms: SymbolExpansion, ray: RayAngle, K: int):
    """Full factor expansions q± to order -K from the term expansion of an
    order-0 symbol (normalized so the principal limit is 1)."""
    grid, x_nodes = q_terms.grid, q_terms.x_nodes
    p0 = {}
    m0 = {}
    for i in range(q_terms.nx):
        res = factorize_slice(
            FreqSlice(grid, q_terms.term(0)[i], decay_class=H_0), ray, s0=1.0)
        p0.setdefault(0, np.empty((q_terms.nx, grid.N), complex))[i] = res.q_plus.values
        m0.setdefault(0, np.empty((q_terms.nx, grid.N), complex))[i] = res.q_minus.values
    qplus = SymbolExpansion(grid, x_nodes, p0)
    qminus = SymbolExpansion(grid, x_nodes, m0)
    for k in range(1, K + 1):
        qk_p, qk_m = lower_order_step(q_terms, qplus, qminus, k)
        qplus.terms[k] = qk_p
        qminus.terms[k] = qk_m
    return qplus, qminus


def parametrix_plus(qplus: SymbolExpansion, K: int,
                    growth_guard: float = 1e6) -> SymbolExpansion:
    """Approximate inverse of the plus factor: q̃₀⁺ = 1/q₀⁺ followed by the
    Neumann series in the order ≥ -K defect r of q⁺ # q̃₀⁺."""
    q0 = qplus.term(0)
    if np.abs(q0).min() == 0.0:
        raise VanishingSymbolError("plus factor principal term vanishes")
    qt0 = SymbolExpansion(qplus.grid, qplus.x_nodes, {0: 1.0 / q0})
    comp = leibniz_product(qplus, qt0, K)
    r = comp.copy()
    r.terms[0] = r.terms[0] - 1.0
    # r has order -1; drop the (numerically zero) order-0 part
    if np.abs(r.terms[0]).max() > 1e-8 * max(np.abs(q0).max(), 1.0):
        raise FactorizationError("defect of the principal inverse is not lower order")
    del r.terms[0]
    series = SymbolExpansion(qplus.grid, qplus.x_nodes,
                             {0: np.ones_like(q0)})
    power = SymbolExpansion(qplus.grid, qplus.x_nodes,
                            {0: np.ones_like(q0)})
    for k in range(1, K + 1):
        power = leibniz_product(power, r, K)
        if max((np.abs(v).max() for v in power.terms.values()), default=0.0) > growth_guard:
            raise FactorizationError(
                f"Neumann series grows beyond guard at k={k}; K too large "
                "for the grid resolution")
        for j, v in power.terms.items():
            series.terms[j] = series.term(j) + (-1.0) ** k * v
    return leibniz_product(qt0, series, K)


def composite_defect(qplus: SymbolExpansion, qtilde: SymbolExpansion,
                     K: int) -> dict:
    """Per-order sup-norms of q⁺ # q̃⁺ - 1 through order -K."""
    comp = leibniz_product(qplus, qtilde, K)
    out = {0: float(np.abs(comp.term(0) - 1.0).max())}
    for j in range(1, K + 1):
        out[j] = float(np.abs(comp.term(j)).max())
    return out


def helmholtz_reduced_terms(a: float, m: float, xi_prime: float,
                            grid: FreqGrid, n_orders: int = 3) -> SymbolExpansion:
    """Term expansion of ((|ξ|²+m²)/|ξ|²)^a along a slice: order -2l term is
    binom(a,l) m^{2l} |ξ|^{-2l}; odd orders vanish."""
    from scipy.special import binom as _binom
    xi_n = grid.xi
    r2 = xi_prime ** 2 + xi_n ** 2
    terms = {}
    for j in range(n_orders + 1):
        if j % 2 == 0:
            l = j // 2
            terms[j] = (float(_binom(a, l)) * m ** (2 * l)
                        * r2 ** (-l)).astype(complex)[None, :]
        else:
            terms[j] = np.zeros((1, grid.N), dtype=complex)
    return SymbolExpansion(grid, np.array([0.0]), terms)


def factorization_residual(full_slice: np.ndarray, qplus: SymbolExpansion,
                           qminus: SymbolExpansion, K: int,
                           x_index: int = 0) -> float:
    """Sup-norm of s₀⁻¹ q - (q⁻ # q⁺ truncated at order -K) on one slice."""
    comp = leibniz_product(qminus, qplus, K)
    total = sum(comp.term(j)[x_index] for j in range(K + 1))
    return float(np.abs(np.asarray(full_slice) - total).max())


def fit_decay_exponent(sizes: Sequence[float], residuals: Sequence[float],
                       floor: float = 1e-10) -> float:
    """Log-log slope of residual vs ⟨ξ'⟩; residuals entirely below the
    floor (exactly factorized symbols) report -inf."""
    sizes = np.asarray(sizes, dtype=float)
    residuals = np.asarray(residuals, dtype=float)
    if np.all(residuals <= floor):
        return -np.inf
    r = np.maximum(residuals, 1e-300)
    slope = np.polyfit(np.log(sizes), np.log(r), 1)[0]
    return float(slope)


def decay_study(sym: Symbol, xi_primes: Sequence[float], K: int,
                grid: Optional[FreqGrid] = None, x=0.0,
                ray: Optional[RayAngle] = None) -> dict:
    """Remainder decay of the truncated factorization across ξ' slices."""
    grid = grid or FreqGrid(2048, 64.0)
    ray = ray or RayAngle(np.pi)
    e_n = np.zeros(sym.dimension); e_n[-1] = 1.0
    s0 = boundary_factor_s0(sym, x, e_n)
    residuals, weights = [], []
    for xp in xi_primes:
        if sym.name == "helmholtz":
            q_terms = helmholtz_reduced_terms(
                sym.params["a"], sym.params["m"], float(xp), grid,
                n_orders=max(K, 2))
        else:
            sl = reduced_slice(sym, x, xp, grid)
            q_terms = SymbolExpansion.from_slices(grid, np.array([0.0]),
                                                  {0: sl.values / s0})
        qp, qm = factor_expansion(q_terms, ray, K)
        full = reduced_slice(sym, x, xp, grid).values
        residuals.append(factorization_residual(full / s0, qp, qm, K))
        weights.append(np.sqrt(1.0 + float(xp) ** 2))
    expo = fit_decay_exponent(weights, residuals)
    return {"xi_primes": list(map(float, xi_primes)), "residuals": residuals,
            "exponent": expo}
