"""Dispatch a RunConfig to the numerical modules and assemble a
ReportBundle; file output is atomic (temp + rename)."""

from __future__ import annotations

import datetime
import json
import os
import tempfile
from typing import Optional

import numpy as np
from scipy.special import gamma as _gamma

from . import acceptance, cauchy, dirichlet, identities as idn, operators as ops
from . import factorization as fz
from .grids import FreqGrid, SpaceGrid
from .schemas import CheckRecord, ReportBundle, RunConfig
from .symbols import RayAngle, catalog_symbol


class CheckFailure(RuntimeError):
    def __init__(self, check_id, message):
        super().__init__(f"[{check_id}] {message}")
        self.check_id = check_id


def build_symbol(cfg: RunConfig, dimension: Optional[int] = None):
    key = cfg.symbol
    kwargs = {"a": cfg.a}
    if key == "helmholtz":
        kwargs["m"] = cfg.m
    if key == "anisotropic":
        kwargs["cross"] = cfg.cross
        return catalog_symbol(key, **kwargs)
    if dimension is not None:
        kwargs["dimension"] = dimension
    return catalog_symbol(key, **kwargs)


def _c2c(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _run_factorize(cfg: RunConfig) -> tuple:
    grid = FreqGrid(cfg.grid.N, cfg.grid.L)
    tol = cfg.tolerances.scale
    records, artifacts = [], {}
    if cfg.symbol == "helmholtz":
        xi = grid.xi
        for sig in cfg.xi_primes:
            vals = ((sig ** 2 + xi ** 2) / (1.0 + xi ** 2)) ** cfg.a
            sl = cauchy.FreqSlice(grid, vals, decay_class=cauchy.H_0)
            res = fz.factorize_slice(sl, RayAngle(np.pi))
            passed = (res.mult_residual <= 1e-7 * tol
                      and res.plus_leak <= 1e-6 * tol
                      and res.minus_leak <= 1e-6 * tol)
            records.append(CheckRecord(
                check_id=f"factorize:sigma={sig}", passed=passed,
                description="Helmholtz slice factorization",
                measures={"s0": _c2c(res.s0),
                          "mult_residual": res.mult_residual,
                          "plus_leak": res.plus_leak,
                          "minus_leak": res.minus_leak,
                          "edge_deviation": res.edge_deviation()}))
            if cfg.dump_slices:
                artifacts[f"qplus_sigma{sig}"] = cauchy.export_columns(res.q_plus)
                artifacts[f"qminus_sigma{sig}"] = cauchy.export_columns(res.q_minus)
    else:
        sym = build_symbol(cfg, dimension=2)
        x0 = np.zeros(sym.dimension)
        for res in fz.factorize_principal(sym, x0, cfg.xi_primes, grid=grid):
            passed = res.mult_residual <= 1e-7 * tol
            records.append(CheckRecord(
                check_id=f"factorize:xi_prime={res.xi_prime}", passed=passed,
                description=f"{cfg.symbol} principal slice factorization",
                measures={"s0": _c2c(res.s0),
                          "mult_residual": res.mult_residual,
                          "plus_leak": res.plus_leak,
                          "minus_leak": res.minus_leak}))
            if cfg.dump_slices:
                artifacts[f"qplus_xp{res.xi_prime}"] = cauchy.export_columns(res.q_plus)
    return records, artifacts


_IDENTITY_TOL = {
    "green_3_11": 1e-10,
    "ibp_halfline_3_2": 1e-4,
    "ibp_helmholtz_3_12": 5e-3,
    "ibp_fraclap_3_39": 5e-3,
    "pairing_4_2": 1e-8,
    "ibp_domain_4_14": 5e-3,
    "radial_4_23": 1e-5,
    "radial_homog_4_28": 1e-5,
    "pohozaev_4_30": 1e-5,
    "pohozaev_homog_4_32": 1e-5,
    "minusfactor_4_7": 1e-4,
}


def _run_verify(cfg: RunConfig) -> tuple:
    ident = cfg.identity
    if ident is None:
        raise ValueError("verify requires an identity id")
    g = SpaceGrid(cfg.grid.N, cfg.grid.X)
    a = cfg.a
    w = ops.sample(g, lambda x: np.exp(-np.abs(x)), region="plus")
    wp = ops.sample(g, lambda x: (np.exp(-0.8 * np.abs(x)) * (1 + 0.2 * x ** 2)
                                  * np.exp(-x ** 2 / 50)), region="plus")
    sym = build_symbol(cfg)
    if cfg.data == "solved" and sym.name in ("fraclap", "helmholtz", "varcoef"):
        # interval data taken from actual Dirichlet solves instead of the
        # closed-form family
        u = dirichlet.solve_interval(sym, 1.0, a, n_basis=cfg.basis_size,
                                     residual_tol=1e-3).fn
        up = dirichlet.solve_interval(sym, lambda x: x, a,
                                      n_basis=cfg.basis_size,
                                      residual_tol=1e-3).fn
    else:
        u = dirichlet.WeightedFn(a, coeffs=np.array([1.0]))
        up = dirichlet.WeightedFn(a, coeffs=np.array([0.4, 1.0]))
    if ident == "green_3_11":
        rep = idn.verify_green_classical(
            lambda x: np.exp(-np.abs(x)), lambda x: np.exp(-np.abs(x)),
            dv=lambda x: -np.exp(-np.abs(x)), dvp=lambda x: -np.exp(-np.abs(x)))
    elif ident == "ibp_halfline_3_2":
        rep = idn.verify_ibp_halfline(w, wp, a)
    elif ident == "ibp_helmholtz_3_12":
        rep = idn.verify_ibp_helmholtz(w, wp, a, cfg.m)
    elif ident == "ibp_fraclap_3_39":
        rep = idn.verify_ibp_fraclap_halfline(w, wp, a)
    elif ident == "minusfactor_4_7":
        rep = idn.verify_minusfactor(w, wp, a)
    elif ident == "pairing_4_2":
        rep = idn.verify_pairing(sym, u, up)
    elif ident == "ibp_domain_4_14":
        rep = idn.verify_ibp_domain(sym, u, up, a)
    elif ident in ("radial_4_23", "radial_homog_4_28"):
        rep = idn.verify_radial(sym, u, up, a)
    elif ident in ("pohozaev_4_30", "pohozaev_homog_4_32"):
        nl = idn.NonlinearSpec(cfg.nl_kind, cfg.nl_value)
        rep = idn.pohozaev(sym, nl, u, a)
    else:
        raise ValueError(f"no manufactured run for identity {ident!r}")
    tol = _IDENTITY_TOL.get(rep.identity_id, 1e-5) * cfg.tolerances.scale
    rec = CheckRecord(
        check_id=f"verify:{rep.identity_id}",
        passed=rep.rel_residual <= tol,
        description=f"identity {rep.identity_id} at tolerance {tol:g}",
        measures={"lhs": _c2c(rep.lhs), "rhs": _c2c(rep.rhs),
                  "abs_residual": rep.abs_residual,
                  "rel_residual": rep.rel_residual,
                  "terms": {k: _c2c(v) for k, v in rep.terms.items()},
                  "bookkeeping_defect": rep.bookkeeping_defect()})
    csv = "term,re,im\n" + "\n".join(
        f"{k},{complex(v).real:+.16e},{complex(v).imag:+.16e}"
        for k, v in rep.terms.items()) + "\n"
    return [rec], {f"terms_{rep.identity_id}": csv}


def _named_datum(name: str, a: float):
    if name == "one":
        return 1.0
    if name == "gamma2a1":
        return float(_gamma(2 * a + 1.0))
    if name == "zero":
        return 0.0
    if name.startswith("file:"):
        data = np.loadtxt(name[5:])
        from scipy.interpolate import make_interp_spline
        spl = make_interp_spline(data[:, 0], data[:, 1], k=3)
        return lambda x: spl(x)
    raise ValueError(f"unknown datum {name!r}")


def _run_solve(cfg: RunConfig) -> tuple:
    sym = build_symbol(cfg)
    f = _named_datum(cfg.f, cfg.a)
    sol = dirichlet.solve_interval(sym, f, cfg.a, n_basis=cfg.basis_size,
                                   residual_tol=1e-4)
    g = SpaceGrid(cfg.grid.N, cfg.grid.X)
    gf = dirichlet.sample_weighted(sol.fn, g)
    traces = {}
    for side, ori, b in (("right", -1, 1.0), ("left", +1, -1.0)):
        try:
            tr = dirichlet.weighted_trace(gf, cfg.a, side=side,
                                          orientation=ori, boundary=b)
            traces[side] = {"value": _c2c(tr.value),
                            "fit_error": tr.extrapolation_error}
        except dirichlet.TraceError as e:
            traces[side] = {"error": str(e)}
    rec = CheckRecord(
        check_id=f"solve:{cfg.symbol}:a={cfg.a}:f={cfg.f}",
        passed=sol.residual <= 1e-4 * cfg.tolerances.scale,
        description="interval Dirichlet solve",
        measures={"residual": sol.residual,
                  "coeffs": [float(c) for c in sol.coeffs[:12]],
                  "traces": traces})
    artifacts = {"solution": ops.export_columns(gf)}
    return [rec], artifacts


def _run_pohozaev(cfg: RunConfig) -> tuple:
    sym = build_symbol(cfg)
    nl = idn.NonlinearSpec(cfg.nl_kind, cfg.nl_value)
    u = dirichlet.WeightedFn(cfg.a, coeffs=np.array([1.0]))
    rep = idn.pohozaev(sym, nl, u, cfg.a)
    tol = _IDENTITY_TOL[rep.identity_id] * cfg.tolerances.scale
    rec = CheckRecord(
        check_id=f"pohozaev:{rep.identity_id}",
        passed=(rep.rel_residual <= tol and not rep.flags.get("inconclusive")),
        description=f"Pohozaev balance ({rep.identity_id})",
        measures={"lhs": _c2c(rep.lhs), "rhs": _c2c(rep.rhs),
                  "rel_residual": rep.rel_residual,
                  "solution_residual": rep.flags["solution_residual"],
                  "terms": {k: _c2c(v) for k, v in rep.terms.items()}})
    return [rec], {}


def _run_suite(cfg: RunConfig) -> tuple:
    if cfg.suite != "acceptance":
        raise ValueError(f"unknown suite {cfg.suite!r}")
    results = acceptance.run_all(tol_scale=cfg.tolerances.scale,
                                 verbose=False, threads=cfg.threads)
    records = [CheckRecord(check_id=r.cid, passed=r.passed,
                           description=r.description,
                           measures=_jsonable(r.measures))
               for r in results]
    return records, {}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, float) and (np.isinf(obj) or np.isnan(obj)):
        return repr(obj)
    return obj


_DISPATCH = {
    "factorize": _run_factorize,
    "verify": _run_verify,
    "solve": _run_solve,
    "pohozaev": _run_pohozaev,
    "suite": _run_suite,
}


def run(cfg: RunConfig) -> ReportBundle:
    np.random.seed(cfg.seed)
    records, artifacts = _DISPATCH[cfg.command](cfg)
    bundle = ReportBundle(
        config=cfg, results=records,
        passed=all(r.passed for r in records),
        metadata={
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "versions": _versions(),
        })
    if cfg.out_dir:
        write_bundle(bundle, artifacts, cfg.out_dir)
    return bundle


def _versions() -> dict:
    import numpy
    import scipy
    from importlib.metadata import version as _v
    try:
        own = _v("fracwh")
    except Exception:
        own = "dev"
    return {"fracwh": own, "numpy": numpy.__version__,
            "scipy": scipy.__version__}


def atomic_write_text(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_bundle(bundle: ReportBundle, artifacts: dict, out_dir: str):
    payload = bundle.model_dump()
    payload["results"] = _jsonable(payload["results"])
    atomic_write_text(os.path.join(out_dir, "report.json"),
                      json.dumps(payload, sort_keys=True, indent=2, default=str))
    for name, content in artifacts.items():
        if isinstance(content, str):
            atomic_write_text(os.path.join(out_dir, f"{name}.csv"), content)
        else:
            emit_columns(os.path.join(out_dir, f"{name}.dat"), content)


def emit_columns(path: str, cols: np.ndarray):
    lines = "\n".join("  ".join(f"{v:+.16e}" for v in row) for row in cols)
    atomic_write_text(path, lines + "\n")


def emit_plotdata(bundle: ReportBundle, what: str, out_dir: str):
    """Columnar plot data for a finished run, regenerated from the bundle's
    config: factor slices and solution profiles as (coordinate, Re, Im)
    files, and residual-vs-N convergence ladders."""
    if not bundle.results:
        raise ValueError("bundle contains no results to plot")
    cfg = bundle.config
    if what == "factor_slice":
        grid = FreqGrid(cfg.grid.N, cfg.grid.L)
        xi = grid.xi
        sig = cfg.xi_primes[0] if cfg.xi_primes else 2.0
        sl = cauchy.FreqSlice(grid, ((sig ** 2 + xi ** 2) / (1 + xi ** 2)) ** cfg.a,
                              decay_class=cauchy.H_0)
        from .symbols import RayAngle as _Ray
        res = fz.factorize_slice(sl, _Ray(np.pi))
        path = os.path.join(out_dir, "qplus.dat")
        emit_columns(path, cauchy.export_columns(res.q_plus))
        return [path]
    if what == "solution":
        sym = build_symbol(cfg)
        sol = dirichlet.solve_interval(sym, _named_datum(cfg.f, cfg.a), cfg.a,
                                       n_basis=cfg.basis_size, residual_tol=1e-4)
        g = SpaceGrid(cfg.grid.N, cfg.grid.X)
        path = os.path.join(out_dir, "solution.dat")
        emit_columns(path, ops.export_columns(dirichlet.sample_weighted(sol.fn, g)))
        return [path]
    if what == "convergence":
        rows = []
        for N in (512, 1024, 2048, 4096, 8192):
            g = SpaceGrid(N, cfg.grid.X)
            w = ops.sample(g, lambda x: np.exp(-np.abs(x)), region="plus")
            rep = idn.verify_ibp_helmholtz(w, w, cfg.a, cfg.m)
            rows.append([float(N), rep.rel_residual])
        path = os.path.join(out_dir, "convergence.dat")
        emit_columns(path, np.array(rows))
        return [path]
    raise KeyError(f"unknown plot-data series {what!r}")
