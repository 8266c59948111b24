"""Thin command-line client: builds a RunConfig from an INI config file
plus flag overrides (flags win), then either runs in process or posts to a
running service.

Exit codes: 0 all checks passed, 1 a check failed, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys

from pydantic import ValidationError

from .schemas import RunConfig


def _config_from_ini(path: str) -> dict:
    cp = configparser.ConfigParser()
    if not cp.read(path):
        raise FileNotFoundError(f"config file {path!r} not found")
    out: dict = {}
    grid, tol = {}, {}
    for section in cp.sections():
        for key, val in cp.items(section):
            if section == "grid":
                grid[key.upper() if key in ("n", "l", "x") else key] = _coerce(val)
            elif section == "tolerances":
                tol[key] = _coerce(val)
            else:
                out[key] = _coerce(val)
    if grid:
        out["grid"] = grid
    if tol:
        out["tolerances"] = tol
    return out


def _coerce(val: str):
    low = val.strip()
    if low.lower() in ("true", "false"):
        return low.lower() == "true"
    try:
        return int(low)
    except ValueError:
        pass
    try:
        return float(low)
    except ValueError:
        pass
    if low.startswith("["):
        return json.loads(low)
    return low


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="fracwh",
        description="Wiener-Hopf factorization, fractional Dirichlet "
                    "solves, and identity verification")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI config file (flags override)")
    common.add_argument("--server", help="base URL of a running service; "
                                         "runs in process when omitted")
    common.add_argument("--out", dest="out_dir", help="output directory")
    common.add_argument("--symbol",
                        choices=["fraclap", "helmholtz", "varcoef", "anisotropic"])
    common.add_argument("--a", type=float)
    common.add_argument("--m", type=float)
    common.add_argument("--N", type=int)
    common.add_argument("--L", type=float)
    common.add_argument("--X", type=float)
    common.add_argument("--tol-scale", type=float, dest="tol_scale")
    common.add_argument("--seed", type=int)
    common.add_argument("--threads", type=int)

    fp = sub.add_parser("factorize", parents=[common],
                        help="factor symbol slices and report diagnostics")
    fp.add_argument("--xi-primes", type=float, nargs="+", dest="xi_primes")
    fp.add_argument("--dump-slices", action="store_true", dest="dump_slices")

    vp = sub.add_parser("verify", parents=[common],
                        help="verify one integration-by-parts identity")
    vp.add_argument("--identity", required=True)
    vp.add_argument("--data", default="manufactured")

    sp = sub.add_parser("solve", parents=[common],
                        help="solve the interval Dirichlet problem")
    sp.add_argument("--f", default="one",
                    help="named datum: one, gamma2a1, zero, or file:<path>")
    sp.add_argument("--basis-size", type=int, dest="basis_size")

    pp = sub.add_parser("pohozaev", parents=[common],
                        help="verify the Pohozaev balance for a nonlinearity")
    pp.add_argument("--nl-kind", dest="nl_kind",
                    choices=["constant", "power", "linear"])
    pp.add_argument("--nl-value", type=float, dest="nl_value")

    up = sub.add_parser("suite", parents=[common],
                        help="run a named check suite")
    up.add_argument("--suite", default="acceptance")
    return p


def _assemble_config(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if args.config:
        data.update(_config_from_ini(args.config))
    data["command"] = args.command
    grid = dict(data.get("grid", {}))
    for key in ("N", "L", "X"):
        v = getattr(args, key, None)
        if v is not None:
            grid[key] = v
    if grid:
        data["grid"] = grid
    if getattr(args, "tol_scale", None) is not None:
        data["tolerances"] = {"scale": args.tol_scale}
    for key in ("symbol", "a", "m", "seed", "threads", "out_dir", "identity",
                "data", "f", "basis_size", "nl_kind", "nl_value", "suite",
                "xi_primes", "dump_slices"):
        v = getattr(args, key, None)
        if v is not None and v is not False:
            data[key] = v
    return RunConfig(**data)


def _run_remote(server: str, cfg: RunConfig) -> dict:
    import httpx
    url = server.rstrip("/") + f"/{cfg.command}"
    resp = httpx.post(url, json=cfg.model_dump(), timeout=600.0)
    resp.raise_for_status()
    return resp.json()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        cfg = _assemble_config(args)
    except (ValidationError, ValueError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        if args.server:
            payload = _run_remote(args.server, cfg)
            passed = payload.get("passed", False)
            print(json.dumps(payload, sort_keys=True, indent=2, default=str))
        else:
            from .runner import run
            bundle = run(cfg)
            passed = bundle.passed
            for rec in bundle.results:
                mark = "PASS" if rec.passed else "FAIL"
                print(f"[{mark}] {rec.check_id}: {rec.description}")
            if cfg.out_dir:
                print(f"report written to {cfg.out_dir}/report.json")
    except (ValueError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"check failed with error: {exc}", file=sys.stderr)
        return 1
    return 0 if passed else 1


if __name__ == "__main__":
    sys.exit(main())
