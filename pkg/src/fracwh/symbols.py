"""Classical even symbols of fractional order: catalog, evaluation with
excision, and structural checks (evenness, transmission condition,
ellipticity avoiding a ray)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import binom


@dataclass(frozen=True)
class RayAngle:
    """Direction θ of the ray re^{iθ} the principal symbol must avoid."""

    theta: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= 2 * np.pi):
            raise ValueError("theta must lie in [0, 2π]")


@dataclass(frozen=True)
class ExcisionFunction:
    """Radial cutoff: 0 for |ξ| ≤ radius/2, 1 for |ξ| ≥ radius, quintic
    smoothstep bridge in between (C²)."""

    radius: float = 1.0

    def __post_init__(self):
        if not (0.5 <= self.radius <= 1.0):
            raise ValueError("excision radius must lie in [1/2, 1]")

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        lo, hi = self.radius / 2.0, self.radius
        t = np.clip((r - lo) / (hi - lo), 0.0, 1.0)
        return t * t * t * (t * (6.0 * t - 15.0) + 10.0)


@dataclass(frozen=True)
class HomogeneousTerm:
    """One homogeneous piece p_j of a classical symbol.

    eval(x, ξ) must be homogeneous in ξ of the stated degree for |ξ| ≥ 1
    (the catalog terms are strictly homogeneous for all ξ ≠ 0).  Optional
    closed-form x-derivatives enable exact commutator symbols.  Terms
    flagged xi_independent (smooth at ξ = 0 already) skip the excision.
    """

    degree: float
    eval: Callable[[np.ndarray, np.ndarray], complex]
    dx_eval: Optional[Callable[[int, np.ndarray, np.ndarray], complex]] = None
    xi_independent: bool = False


@dataclass(frozen=True)
class Symbol:
    """Classical symbol p ~ Σ p_j with p_j homogeneous of degree order - j."""

    order: float
    terms: tuple
    excision: ExcisionFunction = field(default_factory=ExcisionFunction)
    x_dependent: bool = False
    dimension: int = 1
    name: str = ""
    params: dict = field(default_factory=dict)
    #: optional non-expanded closed form (e.g. (|ξ|²+m²)^a) and its radial
    #: commutator symbol ξ·∇_ξ p, where available
    full_eval: Optional[Callable] = None
    radial_eval: Optional[Callable] = None

    def __post_init__(self):
        prev = self.order + 1.0
        for j, t in enumerate(self.terms):
            if j == 0 and abs(t.degree - self.order) > 1e-12:
                raise ValueError(
                    f"principal term has degree {t.degree}, expected {self.order}")
            drop = self.order - t.degree
            if j > 0 and (t.degree >= prev - 1e-12 or abs(drop - round(drop)) > 1e-12):
                raise ValueError(
                    f"term {j}: degrees must decrease from the order by integers")
            prev = t.degree

    def parity_index(self, j: int) -> int:
        """Integer homogeneity drop of term j (the j in p_j(x,-ξ) = (-1)^j
        p_j(x,ξ)); equals order - degree."""
        return int(round(self.order - self.terms[j].degree))

    @property
    def a(self) -> float:
        return self.order / 2.0

    def term_value(self, j: int, x, xi) -> complex:
        return self.terms[j].eval(np.asarray(x, float), np.asarray(xi, float))


def eval_symbol(sym: Symbol, x, xi, J: Optional[int] = None) -> complex:
    """Σ_{j<J} η(ξ)·p_j(x, ξ); finite at ξ = 0 because η vanishes there.
    ξ-independent terms are smooth already and bypass η."""
    xi = np.asarray(xi, dtype=float)
    x = np.asarray(x, dtype=float)
    J = len(sym.terms) if J is None else J
    if J > len(sym.terms):
        raise ValueError(f"J={J} exceeds stored terms ({len(sym.terms)})")
    r = float(np.linalg.norm(xi))
    eta = float(sym.excision(r))
    total = 0.0 + 0.0j
    for j in range(J):
        t = sym.terms[j]
        w = 1.0 if t.xi_independent else eta
        if w != 0.0:
            total += w * t.eval(x, xi)
    return total


def eval_symbol_grid(sym: Symbol, x, xi_array: np.ndarray,
                     J: Optional[int] = None) -> np.ndarray:
    """Vectorized eval over an array of frequency vectors (last axis = n)."""
    xi_array = np.atleast_2d(np.asarray(xi_array, dtype=float))
    return np.array([eval_symbol(sym, x, xi, J) for xi in xi_array])


@dataclass
class CheckReport:
    passed: bool
    max_residual: float
    details: dict = field(default_factory=dict)


def _default_sphere(n: int, count: int = 64) -> np.ndarray:
    if n == 1:
        return np.array([[1.0], [-1.0]])
    th = np.linspace(0.0, 2 * np.pi, count, endpoint=False)
    return np.column_stack([np.cos(th), np.sin(th)])


def _default_points(sym: Symbol, count: int = 5) -> np.ndarray:
    if not sym.x_dependent:
        return np.zeros((1, sym.dimension))
    g = np.linspace(-2.0, 2.0, count)
    return np.column_stack([g] + [np.zeros_like(g)] * (sym.dimension - 1))


def check_even(sym: Symbol, sample_grid: Optional[np.ndarray] = None,
               tol: float = 1e-10) -> CheckReport:
    """Evenness p_j(x,-ξ) = (-1)^j p_j(x,ξ); tested per term on |ξ| ≥ 1."""
    dirs = _default_sphere(sym.dimension) if sample_grid is None else sample_grid
    radii = np.array([1.0, 2.0, 5.0])
    worst, worst_info = 0.0, {}
    for xp in _default_points(sym):
        for j, term in enumerate(sym.terms):
            pj = sym.parity_index(j)
            for d in dirs:
                for r in radii:
                    xi = r * np.asarray(d, float)
                    res = abs(term.eval(xp, -xi) - (-1.0) ** pj * term.eval(xp, xi))
                    if res > worst:
                        worst, worst_info = res, {"term": j, "xi": xi.tolist()}
    return CheckReport(worst <= tol, worst, worst_info)


def _fd_derivative(fun, x, xi, alpha: Sequence[int], beta: Sequence[int],
                   h: float = 1e-4) -> complex:
    """Central differences of p(x, ξ) in ambient coordinates, |α|+|β| ≤ 2."""
    x = np.asarray(x, dtype=float)
    xi = np.asarray(xi, dtype=float)

    def d1(f, k, freq):
        if freq:
            def g(xv, xiv):
                e = np.zeros_like(xiv); e[k] = h
                return (f(xv, xiv + e) - f(xv, xiv - e)) / (2 * h)
        else:
            def g(xv, xiv):
                e = np.zeros_like(xv); e[k] = h
                return (f(xv + e, xiv) - f(xv - e, xiv)) / (2 * h)
        return g

    f = fun
    for k, m in enumerate(alpha):
        for _ in range(m):
            f = d1(f, k, True)
    for k, m in enumerate(beta):
        for _ in range(m):
            f = d1(f, k, False)
    return f(x, xi)


def _multi_indices(n: int, total_max: int):
    if n == 1:
        for m in range(total_max + 1):
            yield (m,)
        return
    for m1 in range(total_max + 1):
        for m2 in range(total_max + 1 - m1):
            yield (m1, m2)


def check_transmission(sym: Symbol, mu: float, normal=None,
                       tol: float = 1e-6) -> CheckReport:
    """μ-transmission condition at the boundary with interior normal ν:
    ∂^β∂^α p_j(x,-ν) = e^{πi(m-2μ-j-|α|)} ∂^β∂^α p_j(x,ν), |α|+|β| ≤ 2."""
    n = sym.dimension
    nu = np.zeros(n); nu[-1] = 1.0
    if normal is not None:
        nu = np.asarray(normal, dtype=float)
        if abs(np.linalg.norm(nu) - 1.0) > 1e-12:
            raise ValueError("normal must be a unit vector")
    m = sym.order
    worst, worst_info, ok = 0.0, {}, True
    for xp in _default_points(sym, count=3):
        for j, term in enumerate(sym.terms):
            pj = sym.parity_index(j)
            for alpha in _multi_indices(n, 2):
                for beta in _multi_indices(n, 2 - sum(alpha)):
                    lhs = _fd_derivative(term.eval, xp, -nu, alpha, beta)
                    rhs = _fd_derivative(term.eval, xp, nu, alpha, beta)
                    phase = np.exp(1j * np.pi * (m - 2 * mu - pj - sum(alpha)))
                    res = abs(lhs - phase * rhs)
                    ref = max(abs(rhs), 1.0)
                    if res / ref > worst:
                        worst = res / ref
                        worst_info = {"term": j, "alpha": list(alpha),
                                      "beta": list(beta)}
                    if res / ref > tol:
                        ok = False
    return CheckReport(ok, worst, worst_info)


def check_ellipticity_ray(sym: Symbol, ray: RayAngle,
                          sphere_grid: Optional[np.ndarray] = None,
                          tol: float = 1e-6) -> CheckReport:
    """Principal symbol values on |ξ| = 1 stay away from the ray re^{iθ}:
    both the angular distance of arg p₀ to θ and |p₀| must be ≥ tol."""
    dirs = _default_sphere(sym.dimension, 256) if sphere_grid is None else sphere_grid
    min_ang, min_mod = np.inf, np.inf
    worst = {}
    for xp in _default_points(sym):
        for d in dirs:
            v = complex(sym.terms[0].eval(xp, np.asarray(d, float)))
            mod = abs(v)
            ang = abs((np.angle(v) - ray.theta + np.pi) % (2 * np.pi) - np.pi)
            if ang < min_ang or mod < min_mod:
                worst = {"x": np.asarray(xp).tolist(), "xi": np.asarray(d).tolist(),
                         "value": [v.real, v.imag]}
            min_ang = min(min_ang, ang)
            min_mod = min(min_mod, mod)
    ok = (min_ang >= tol) and (min_mod >= tol)
    worst.update({"min_angle": float(min_ang), "min_modulus": float(min_mod)})
    return CheckReport(ok, float(min(min_ang, min_mod)), worst)


def boundary_factor_s0(sym: Symbol, x, nu) -> complex:
    """Principal symbol at (x, ν): the scalar factor in the factorization."""
    nu = np.asarray(nu, dtype=float)
    if abs(np.linalg.norm(nu) - 1.0) > 1e-12:
        raise ValueError("nu must be a unit vector")
    return complex(sym.terms[0].eval(np.asarray(x, float), nu))


# ------------------------------------------------------------------ catalog

def fractional_laplacian(a: float, dimension: int = 1) -> Symbol:
    """|ξ|^{2a}."""
    _check_a(a)
    term = HomogeneousTerm(2 * a, lambda x, xi: np.linalg.norm(xi) ** (2 * a))
    return Symbol(order=2 * a, terms=(term,), dimension=dimension,
                  name="fraclap", params={"a": a},
                  full_eval=lambda x, xi: np.linalg.norm(xi) ** (2 * a),
                  radial_eval=lambda x, xi: 2 * a * np.linalg.norm(xi) ** (2 * a))


def helmholtz(a: float, m: float = 1.0, dimension: int = 1,
              n_terms: int = 3) -> Symbol:
    """(|ξ|²+m²)^a expanded in homogeneous terms binom(a,l) m^{2l} |ξ|^{2a-2l};
    the odd homogeneity drops are absent (the symbol is even)."""
    _check_a(a)
    terms = []
    for l in range(n_terms):
        deg = 2 * a - 2 * l
        c = float(binom(a, l)) * m ** (2 * l)
        terms.append(HomogeneousTerm(
            deg, (lambda cc, dd: lambda x, xi: cc * np.linalg.norm(xi) ** dd)(c, deg)))
    return Symbol(
        order=2 * a, terms=tuple(terms), dimension=dimension,
        name="helmholtz", params={"a": a, "m": m},
        full_eval=lambda x, xi: (np.linalg.norm(xi) ** 2 + m ** 2) ** a,
        radial_eval=lambda x, xi: 2 * a * np.linalg.norm(xi) ** 2
        * (np.linalg.norm(xi) ** 2 + m ** 2) ** (a - 1))


def _cfun(x):
    x1 = np.asarray(x, dtype=float).reshape(-1)[0]
    return 1.0 + 0.5 * np.sin(x1)


def _dcfun(x):
    x1 = np.asarray(x, dtype=float).reshape(-1)[0]
    return 0.5 * np.cos(x1)


def variable_coefficient(a: float, dimension: int = 1) -> Symbol:
    """c(x)|ξ|^{2a} with c(x) = 1 + sin(x₁)/2 (positive, so strongly
    elliptic)."""
    _check_a(a)
    term = HomogeneousTerm(
        2 * a,
        lambda x, xi: _cfun(x) * np.linalg.norm(xi) ** (2 * a),
        dx_eval=lambda k, x, xi: (_dcfun(x) * np.linalg.norm(xi) ** (2 * a)
                                  if k == 0 else 0.0))
    return Symbol(order=2 * a, terms=(term,), x_dependent=True,
                  dimension=dimension, name="varcoef", params={"a": a},
                  full_eval=lambda x, xi: _cfun(x) * np.linalg.norm(xi) ** (2 * a),
                  radial_eval=lambda x, xi: 2 * a * _cfun(x) * np.linalg.norm(xi) ** (2 * a))


def anisotropic(a: float, cross: float = 1.0, dimension: int = 2) -> Symbol:
    """(ξ₁⁴ + … + ξ_n⁴ + cross·Σ ξ_i²ξ_j²)^{a/2} · 2^{a/2}, an even
    non-radial symbol of order 2a; elliptic for cross > -2."""
    _check_a(a)
    if cross <= -2.0:
        raise ValueError("cross must exceed -2 for ellipticity")

    def quartic(xi):
        xi = np.asarray(xi, dtype=float)
        s4 = np.sum(xi ** 4)
        if xi.size > 1:
            s2 = sum(xi[i] ** 2 * xi[j] ** 2
                     for i in range(xi.size) for j in range(i + 1, xi.size))
        else:
            s2 = 0.0
        return s4 + cross * s2

    term = HomogeneousTerm(
        2 * a, lambda x, xi: quartic(xi) ** (a / 2.0) * 2.0 ** (a / 2.0))
    return Symbol(order=2 * a, terms=(term,), dimension=dimension,
                  name="anisotropic", params={"a": a, "cross": cross},
                  full_eval=lambda x, xi: quartic(xi) ** (a / 2.0) * 2.0 ** (a / 2.0),
                  radial_eval=lambda x, xi: 2 * a * quartic(xi) ** (a / 2.0) * 2.0 ** (a / 2.0))


CATALOG = {
    "fraclap": fractional_laplacian,
    "helmholtz": helmholtz,
    "varcoef": variable_coefficient,
    "anisotropic": anisotropic,
}


def catalog_symbol(key: str, **params) -> Symbol:
    if key not in CATALOG:
        raise KeyError(f"unknown catalog symbol {key!r}; have {sorted(CATALOG)}")
    return CATALOG[key](**params)


def _check_a(a: float):
    if not (0.0 < a < 1.0):
        raise ValueError(f"order parameter a must lie in (0,1), got {a}")


def load_symbol_table(path, order: float, dimension: int = 2) -> Symbol:
    """Custom principal symbol from a columnar table (ξ components, Re, Im)
    sampled on rays; values are interpolated in angle on the unit sphere and
    extended homogeneously."""
    data = np.loadtxt(path)
    if data.ndim != 2 or data.shape[1] != dimension + 2:
        raise ValueError(f"expected {dimension + 2} columns")
    xi_cols = data[:, :dimension]
    vals = data[:, dimension] + 1j * data[:, dimension + 1]
    radii = np.linalg.norm(xi_cols, axis=1)
    unit_vals = vals / radii ** order
    if dimension == 1:
        vplus = unit_vals[xi_cols[:, 0] > 0].mean()
        vminus = unit_vals[xi_cols[:, 0] < 0].mean()

        def ev(x, xi):
            r = abs(float(np.asarray(xi).reshape(-1)[0]))
            v = vplus if float(np.asarray(xi).reshape(-1)[0]) > 0 else vminus
            return v * r ** order
    else:
        ang = np.arctan2(xi_cols[:, 1], xi_cols[:, 0])
        srt = np.argsort(ang)
        ang_s, val_s = ang[srt], unit_vals[srt]

        def ev(x, xi):
            xi = np.asarray(xi, dtype=float)
            r = np.linalg.norm(xi)
            th = np.arctan2(xi[1], xi[0])
            vr = np.interp(th, ang_s, val_s.real, period=2 * np.pi)
            vi = np.interp(th, ang_s, val_s.imag, period=2 * np.pi)
            return (vr + 1j * vi) * r ** order

    term = HomogeneousTerm(order, ev)
    return Symbol(order=order, terms=(term,), dimension=dimension,
                  name="table", params={"path": str(path)})
