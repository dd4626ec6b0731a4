"""Command-line front end: constants, sweeps, verification, witness plots.

Output contract: JSON (default for constants/verify) or CSV (sweep/witness,
opt-in for constants).  All numbers are printed with 12 significant digits,
lowercase scientific below 1e-4, identically in JSON and CSV.  Identical
invocations produce byte-identical output except for the isolated timing key.

Exit codes: 0 success / all checks pass; 1 failed checks or a failed constant
computation; 2 usage or parse errors.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import replace

import numpy as np

from . import constants as con
from .oracle import oracle_infsup, oracle_pair_norm_extrema
from .search import ConstantEstimate, SearchConfig, sphere_grid
from .spaces import NormSpec, battery_specs, build_space, parse_space_spec
from .verify import VerificationReport, run_checks


def fmt(v: float) -> str:
    """12 significant digits; %g renders |v| < 1e-4 in lowercase scientific."""
    return f"{float(v):.12g}"


def _jnum(v: float):
    f = float(v)
    if not math.isfinite(f):
        return "inf" if f > 0 else ("-inf" if f < 0 else "nan")
    return float(fmt(f))


def _cfg_dict(cfg: SearchConfig) -> dict:
    return {
        "grid_per_dim": cfg.grid_per_dim,
        "refine_iters": cfg.refine_iters,
        "multistart": cfg.multistart,
        "tol": _jnum(cfg.tol),
        "eta": _jnum(cfg.eta),
        "seed": cfg.seed,
    }


def _estimate_dict(est: ConstantEstimate) -> dict:
    witness = {k: ([_jnum(c) for c in v] if isinstance(v, list) else _jnum(v))
               for k, v in est.witness_dict().items()}
    return {
        "value": _jnum(est.value),
        "witness": witness,
        "converged": bool(est.converged),
        "evaluations": int(est.evaluations),
    }


def _report_dict(report: VerificationReport) -> dict:
    checks = []
    for c in report.checks:
        d = c.to_dict()
        d["lhs"] = _jnum(d["lhs"])
        d["rhs"] = _jnum(d["rhs"])
        d["slack"] = _jnum(d["slack"])
        checks.append(d)
    return {
        "space": report.space.spec.to_dict() if report.space.spec else {"dim": report.space.dim},
        "config": _cfg_dict(report.cfg),
        "constants": {k: _estimate_dict(v) for k, v in report.constants.items()},
        "checks": checks,
        "labels": list(report.labels),
    }


# --------------------------------------------------------------------------
# Argument plumbing
# --------------------------------------------------------------------------

def _add_cfg_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--grid", type=int, help="grid points per parameter")
    p.add_argument("--refine", type=int, help="polish budget per start, in line searches")
    p.add_argument("--multistart", type=int, help="grid cells polished per extremum")
    p.add_argument("--tol", type=float, help="polish convergence tolerance")
    p.add_argument("--eta", type=float, help="degeneracy exclusion radius")
    p.add_argument("--seed", type=int, help="seed echoed into reports")


def _config_for(dim: int, args) -> SearchConfig:
    cfg = SearchConfig.for_dim(dim)
    updates = {}
    for flag, field_name in (("grid", "grid_per_dim"), ("refine", "refine_iters"),
                             ("multistart", "multistart"), ("tol", "tol"),
                             ("eta", "eta"), ("seed", "seed")):
        v = getattr(args, flag)
        if v is not None:
            updates[field_name] = v
    return replace(cfg, **updates) if updates else cfg


def _space_from(args):
    spec = parse_space_spec(args.space)
    return build_space(spec)


def _parse_float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v != ""]
    except Exception as exc:
        raise ValueError(f"could not parse value list {text!r}: {exc}") from exc


def _parse_range(text: str) -> list[float]:
    """a:b:step, endpoints inclusive up to rounding."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"expected a range a:b:step, got {text!r}")
    a, b, step = (float(v) for v in parts)
    if step <= 0.0 or b < a:
        raise ValueError(f"empty or inverted range {text!r}")
    n = int(math.floor((b - a) / step + 1e-9)) + 1
    return [a + i * step for i in range(n)]


def _parse_battery(text: str) -> tuple[int, int]:
    kv = {}
    for part in text.split(","):
        key, eq, value = part.partition("=")
        if not eq or key not in ("seed", "count") or key in kv:
            raise ValueError(f"battery spec must be seed=N,count=K, got {text!r}")
        kv[key] = int(value)
    if set(kv) != {"seed", "count"} or kv["count"] < 1:
        raise ValueError(f"battery spec must be seed=N,count=K, got {text!r}")
    return kv["seed"], kv["count"]


# --------------------------------------------------------------------------
# constants
# --------------------------------------------------------------------------

_ORACLE_CONSTANTS = ("sp", "james", "cnj_prime", "schaffer", "T", "t")


def cmd_constants(args) -> int:
    space = _space_from(args)
    cfg = _config_for(space.dim, args)
    gamma_ts = _parse_float_list(args.gamma_t) if args.gamma_t else []
    delta_eps = _parse_float_list(args.delta_eps) if args.delta_eps else []
    rho_ts = _parse_float_list(args.rho_t) if args.rho_t else []
    if args.oracle and space.dim != 2:
        raise ValueError("--oracle requires a 2D space")

    t0 = time.perf_counter()
    ests = con.compute_all(space, cfg, gamma_ts=gamma_ts, delta_eps=delta_eps,
                           rho_ts=rho_ts)
    oracle_section = None
    if args.oracle:
        combines = {
            "sp": (con.pair_cosine, "sup"),
            "james": (con.min_norm, "sup"),
            "cnj_prime": (con.mean_square_quarter, "sup"),
            "schaffer": (con.max_norm, "inf"),
            "T": (con.geom_mean, "sup"),
        }
        oracle_vals = oracle_pair_norm_extrema(space, combines,
                                               grid_size=args.oracle_grid,
                                               eta=cfg.eta)
        t_oracle = oracle_infsup(space, con.geom_mean, grid_size=args.oracle_grid,
                                 eta=cfg.eta)
        oracle_section = {"grid_size": args.oracle_grid}
        for name in _ORACLE_CONSTANTS:
            ov = t_oracle.value if name == "t" else oracle_vals[name].value
            oracle_section[name] = {
                "value": _jnum(ov),
                "optimizer_delta": _jnum(ests[name].value - ov),
            }
    elapsed = time.perf_counter() - t0

    if args.format == "csv":
        lines = ["name,value,converged,evaluations,x,y,t"]
        for name, est in ests.items():
            w = est.witness_dict()
            x = ";".join(fmt(c) for c in w.get("x", []))
            y = ";".join(fmt(c) for c in w.get("y", []))
            tv = fmt(w["t"]) if "t" in w else ""
            lines.append(f"{name},{fmt(est.value)},{str(est.converged).lower()},"
                         f"{est.evaluations},{x},{y},{tv}")
        print("\n".join(lines))
        return 0

    out = {
        "space": space.spec.to_dict(),
        "config": _cfg_dict(cfg),
        "constants": {name: _estimate_dict(est) for name, est in ests.items()},
    }
    if oracle_section is not None:
        out["oracle"] = oracle_section
    out["timing"] = {"seconds": _jnum(elapsed)}
    print(json.dumps(out, indent=2))
    return 0


# --------------------------------------------------------------------------
# sweep
# --------------------------------------------------------------------------

def cmd_sweep(args) -> int:
    chosen = [name for name, v in (("p", args.p), ("gamma-t", args.gamma_t),
                                   ("delta-eps", args.delta_eps)) if v]
    if len(chosen) != 1:
        raise ValueError("sweep needs exactly one of --p, --gamma-t, --delta-eps")

    if args.p:
        spec = parse_space_spec(args.space, allow_missing_p=True)
        if spec.family not in ("lp", "weighted-lp"):
            raise ValueError("--p sweeps require an lp or wlp space skeleton")
        values = _parse_range(args.p)
        bad = [v for v in values if v < 1.0]
        if bad:
            raise ValueError(f"p values must be >= 1, got {bad[0]:g}")
        lines = ["p,sp,sp_lower_bound,bound_ok"]
        for p in values:
            space = build_space(replace(spec, p=p))
            cfg = _config_for(space.dim, args)
            est = con.sp_constant(space, cfg)
            bound = 1.0 - 2.0 ** (-abs(2.0 / p - 1.0))
            ok = est.value >= bound - 1e-6
            lines.append(f"{fmt(p)},{fmt(est.value)},{fmt(bound)},{str(ok).lower()}")
        print("\n".join(lines))
        return 0

    space = _space_from(args)
    cfg = _config_for(space.dim, args)
    if args.gamma_t:
        lines = ["t,gamma"]
        for t in _parse_range(args.gamma_t):
            lines.append(f"{fmt(t)},{fmt(con.gamma(space, t, cfg).value)}")
    else:
        lines = ["eps,delta"]
        for e in _parse_range(args.delta_eps):
            lines.append(f"{fmt(e)},{fmt(con.delta(space, e, cfg).value)}")
    print("\n".join(lines))
    return 0


# --------------------------------------------------------------------------
# verify
# --------------------------------------------------------------------------

def cmd_verify(args) -> int:
    if bool(args.space) == bool(args.battery):
        raise ValueError("verify needs exactly one of --space or --battery")

    t0 = time.perf_counter()
    if args.space:
        space = _space_from(args)
        cfg = _config_for(space.dim, args)
        report = run_checks(space, cfg)
        out = _report_dict(report)
        out["timing"] = {"seconds": _jnum(time.perf_counter() - t0)}
        print(json.dumps(out, indent=2))
        failed = report.failures()
        for c in failed:
            print(f"FAIL {space.name}: {c.name} ({c.lhs:.9g} {c.relation} "
                  f"{c.rhs:.9g} at slack {c.slack:g})", file=sys.stderr)
        return 1 if failed else 0

    seed, count = _parse_battery(args.battery)
    reports = []
    any_failed = False
    for spec in battery_specs(seed, count):
        space = build_space(spec)
        cfg = _config_for(space.dim, args)
        report = run_checks(space, cfg)
        reports.append(_report_dict(report))
        for c in report.failures():
            any_failed = True
            print(f"FAIL {space.name}: {c.name} ({c.lhs:.9g} {c.relation} "
                  f"{c.rhs:.9g} at slack {c.slack:g})", file=sys.stderr)
    out = {"battery": reports,
           "timing": {"seconds": _jnum(time.perf_counter() - t0)}}
    print(json.dumps(out, indent=2))
    return 1 if any_failed else 0


# --------------------------------------------------------------------------
# witness
# --------------------------------------------------------------------------

_WITNESS_OPS = {
    "sp": lambda s, c: con.sp_constant(s, c),
    "james": lambda s, c: con.james(s, c),
    "cnj": lambda s, c: con.cnj(s, c),
    "cnj_prime": lambda s, c: con.cnj_prime(s, c),
    "zbaganu": lambda s, c: con.zbaganu(s, c),
    "schaffer": lambda s, c: con.schaffer(s, c),
    "t": lambda s, c: con.t_and_T(s, c)[0],
    "T": lambda s, c: con.t_and_T(s, c)[1],
}


def cmd_witness(args) -> int:
    if args.constant not in _WITNESS_OPS:
        raise ValueError(f"unknown constant {args.constant!r}; "
                         f"valid names: {', '.join(sorted(_WITNESS_OPS))}")
    space = _space_from(args)
    cfg = _config_for(space.dim, args)
    est = _WITNESS_OPS[args.constant](space, cfg)

    coords = ",".join(f"x{i}" for i in range(space.dim))
    lines = [f"label,{coords}"]

    def row(label, vec):
        lines.append(label + "," + ",".join(fmt(c) for c in vec))

    if space.dim == 2:
        for v in sphere_grid(space, 720).vectors:
            row("sphere", v)
    x = np.asarray(est.x, dtype=float)
    y = np.asarray(est.y, dtype=float)
    if est.t is not None:
        y = est.t * y   # scaled constants pair x with t*y
    row("x", x)
    row("y", y)
    row("x+y", x + y)
    row("x-y", x - y)
    print("\n".join(lines))
    return 0


# --------------------------------------------------------------------------
# Entry point
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="normgeo",
        description="Geometric constants of finite-dimensional normed spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="compute every constant of one space")
    p.add_argument("--space", required=True, help="space spec, e.g. lp:p=1.5,dim=2")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--gamma-t", help="comma list of t values for gamma")
    p.add_argument("--delta-eps", help="comma list of eps values for delta")
    p.add_argument("--rho-t", help="comma list of t values for rho")
    p.add_argument("--oracle", action="store_true",
                   help="cross-check against the dense-grid oracle (2D only)")
    p.add_argument("--oracle-grid", type=int, default=3600)
    _add_cfg_flags(p)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("sweep", help="sweep a parameter, one CSV row per value")
    p.add_argument("--space", required=True)
    p.add_argument("--p", help="p range a:b:step over an lp/wlp skeleton")
    p.add_argument("--gamma-t", help="t range a:b:step for gamma")
    p.add_argument("--delta-eps", help="eps range a:b:step for delta")
    _add_cfg_flags(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run every check; exit 0 iff none fail")
    p.add_argument("--space")
    p.add_argument("--battery", metavar="seed=N,count=K",
                   help="seeded random 2D polyhedral norm battery")
    _add_cfg_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("witness", help="emit sphere polyline and witness vectors as CSV")
    p.add_argument("--space", required=True)
    p.add_argument("--constant", required=True,
                   help="one of " + ", ".join(sorted(_WITNESS_OPS)))
    _add_cfg_flags(p)
    p.set_defaults(func=cmd_witness)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        code = args.func(args)
        # Flush inside the try: output small enough to sit in the stream
        # buffer would otherwise hit a closed pipe only during interpreter
        # shutdown, past this handler.
        sys.stdout.flush()
        return code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        # Reader (e.g. head) went away; swallow the shutdown flush too.
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0


if __name__ == "__main__":
    sys.exit(main())
