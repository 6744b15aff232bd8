"""Command-line entry point: ``run``, ``sweep``, ``check`` and ``bounds``.

Option values are resolved in three layers: built-in defaults, then a
``--config`` file of ``key = value`` lines, then explicit flags.  The
default output directory comes from ``$INTERMETHODS_OUT`` (else ``.``).
"""

import argparse
import csv
import logging
import math
from pathlib import Path
import sys

import numpy as np

from .aim import certificate_estimate1, certificate_estimate2
from .certify import interpolation_check
from .harness import (FUNCTIONS, NOISE_KINDS, SET_KINDS, SOLVERS, ConfigError,
                      SolverConfig, build_objective, default_out_dir, run_config,
                      run_sweep, trace_filename)
from .istm import istm_bound, istm_bound_proper
from .trace import read_trace, write_trace

log = logging.getLogger("intermethods")


def _bool(v):
    if isinstance(v, bool):
        return v
    s = str(v).strip().lower()
    if s in ("1", "true", "yes", "on"):
        return True
    if s in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {v!r}")


def _floats(v):
    if isinstance(v, (tuple, list)):
        return tuple(float(x) for x in v)
    return tuple(float(x) for x in str(v).replace(",", " ").split())


# config key -> (SolverConfig field, converter)
OPTIONS = {
    "solver": ("solver", str),
    "fn": ("fn", str),
    "n": ("n", int),
    "L": ("L", float),
    "mu": ("mu", float),
    "p": ("p", float),
    "a": ("a", float),
    "auto-a": ("auto_a", _bool),
    "a-multipliers": ("a_multipliers", _floats),
    "eps-hat": ("eps_hat", float),
    "noise": ("noise", str),
    "seed": ("seed", int),
    "iters": ("iters", int),
    "eps-target": ("eps_target", float),
    "c-hat": ("c_hat", float),
    "eta": ("eta", float),
    "L-s": ("L_s", float),
    "set": ("set", str),
    "set-lower": ("set_lower", float),
    "set-upper": ("set_upper", float),
    "set-radius": ("set_radius", float),
    "aimvp-restart": ("aimvp_restart", _bool),
    "record-triplets": ("record_triplets", _bool),
    "format": ("fmt", str),
}
_BY_FIELD = {fld: key for key, (fld, _) in OPTIONS.items()}


def _convert(key, raw):
    fld, conv = OPTIONS[key]
    try:
        return fld, conv(raw)
    except (TypeError, ValueError):
        raise ConfigError(f"--{key}", f"cannot parse {raw!r}") from None


def _lookup(key):
    k = key.strip().lstrip("-")
    if k in OPTIONS:
        return k
    alt = k.replace("_", "-")
    if alt in OPTIONS:
        return alt
    if k in _BY_FIELD:
        return _BY_FIELD[k]
    return None


def read_config_file(path):
    """Parse ``key = value`` lines; blank lines and ``#`` comments are skipped."""
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError("--config", f"cannot read {path}: {exc.strerror}") from None
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("--config", f"{path}:{lineno}: expected 'key = value'")
        key, raw = (s.strip() for s in line.split("=", 1))
        name = _lookup(key)
        if name is None:
            raise ConfigError("--config", f"{path}:{lineno}: unknown key {key!r}")
        fld, val = _convert(name, raw)
        values[fld] = val
    return values


def _add_config_flags(ap):
    g = ap.add_argument_group("configuration")
    S = argparse.SUPPRESS
    g.add_argument("--config", help="file of 'key = value' lines; flags override it")
    g.add_argument("--solver", choices=SOLVERS, default=S)
    g.add_argument("--fn", choices=FUNCTIONS, default=S)
    g.add_argument("--n", default=S, help="dimension (default 100)")
    g.add_argument("--L", default=S, help="smoothness constant (default 1)")
    g.add_argument("--mu", default=S, help="strong convexity (quadratic objectives)")
    g.add_argument("--p", default=S, help="intermediate parameter in [1, 2] (default 2)")
    a = g.add_mutually_exclusive_group()
    a.add_argument("--a", default=S, help="ISTM step damping (default 2)")
    a.add_argument("--auto-a", action="store_const", const="true", default=S,
                   help="choose a from the noise level and budget")
    g.add_argument("--a-multipliers", nargs=4, metavar="M", default=S,
                   help="multipliers of the automatic a rule (default 1 1 1 20)")
    g.add_argument("--eps-hat", default=S, help="relative noise level in [0, 1]")
    g.add_argument("--noise", choices=tuple(NOISE_KINDS), default=S)
    g.add_argument("--seed", default=S)
    g.add_argument("--iters", default=S, help="iteration budget")
    g.add_argument("--eps-target", default=S, help="restart target accuracy")
    g.add_argument("--c-hat", default=S, help="AIM slack divisor (default 1000)")
    g.add_argument("--eta", default=S, help="p decrement of aimvp (default 0.05)")
    g.add_argument("--L-s", default=S, help="initial AIM smoothness guess")
    g.add_argument("--set", choices=SET_KINDS, default=S)
    g.add_argument("--set-lower", default=S, help="box lower bound (scalar)")
    g.add_argument("--set-upper", default=S, help="box upper bound (scalar)")
    g.add_argument("--set-radius", default=S, help="ball radius (centered at 0)")
    g.add_argument("--aimvp-restart", action="store_const", const="true", default=S,
                   help="aimvp: re-initialize AIM at every outer step")
    g.add_argument("--record-triplets", action="store_const", const="true", default=S)
    g.add_argument("--format", choices=("csv", "json"), default=S)


def build_config(ns):
    """Defaults, then the config file, then explicit flags."""
    values = read_config_file(ns.config) if getattr(ns, "config", None) else {}
    for key in OPTIONS:
        attr = key.replace("-", "_")
        if hasattr(ns, attr):
            fld, val = _convert(key, getattr(ns, attr))
            values[fld] = val
    return SolverConfig(**values).validate()


def _parse_grid(items):
    grid = {}
    for item in items or ():
        if "=" not in item:
            raise ConfigError("--grid", f"expected key=v1,v2,... got {item!r}")
        key, raw = item.split("=", 1)
        name = _lookup(key)
        if name is None:
            raise ConfigError("--grid", f"unknown key {key.strip()!r}")
        vals = [v.strip() for v in raw.split(",") if v.strip()]
        fld = OPTIONS[name][0]
        grid[fld] = [_convert(name, v)[1] for v in vals]
    return grid


def _fmt(v):
    return "nan" if v is None or (isinstance(v, float) and math.isnan(v)) else f"{v:.6g}"


def cmd_run(ns):
    cfg = build_config(ns)
    out = Path(ns.out) if ns.out else default_out_dir() / trace_filename(cfg)
    if out.suffix == "" or out.is_dir():
        out = out / trace_filename(cfg)
    out.parent.mkdir(parents=True, exist_ok=True)
    tr = run_config(cfg)
    write_trace(tr, out, cfg.fmt)
    last = tr.final
    print(f"solver={cfg.solver} fn={cfg.fn} iterations={last['k']} "
          f"oracle_calls={last['oracle_calls_cum']}")
    print(f"final_gap={_fmt(last['f_gap'])} bound_est1={_fmt(last['bound_est1'])} "
          f"bound_est2={_fmt(last['bound_est2'])} bound_istm={_fmt(last['bound_istm'])}")
    if tr.restarts:
        d = [r["dist_sq"] for r in tr.restarts]
        worst = max(d[i + 1] / d[i] for i in range(len(d) - 1) if d[i] > 0)
        print(f"restarts={len(d) - 1} worst_dist_sq_ratio={worst:.4g}")
    print(f"trace={out}")
    return 0


def cmd_sweep(ns):
    base = build_config(ns)
    grid = _parse_grid(ns.grid)
    out = Path(ns.out) if ns.out else default_out_dir() / "sweep"
    rows = run_sweep(base, grid, out, workers=ns.workers)
    ok = sum(r["status"] == "ok" for r in rows)
    print(f"cells={len(rows)} ok={ok} skipped={len(rows) - ok} summary={out / 'summary.csv'}")
    return 0


def cmd_check(ns):
    path = Path(ns.trace)
    try:
        tr = read_trace(path)
    except (OSError, ValueError, KeyError) as exc:
        raise ConfigError("trace", f"cannot read {path}: {exc}") from None
    if not tr.triplets:
        raise ConfigError("trace", f"{path} has no triplets; rerun with --record-triplets")
    L = float(ns.L) if ns.L is not None else float(tr.meta.get("L", math.nan))
    if not L > 0:
        raise ConfigError("--L", "must be positive (or stored in the trace)")
    res = interpolation_check(tr.triplets, L, ns.tol)
    status = "PASS" if res.passed else "FAIL"
    wit = "none" if res.witness is None else f"{res.witness[0]},{res.witness[1]}"
    print(f"{status} triplets={len(tr.triplets)} L={L:g} "
          f"worst_violation={res.worst_violation:.6g} witness={wit}")
    return 0 if res.passed else 1


def bound_curves(cfg, iters):
    """Rows ``(k, istm_fixed_a, istm_proper, est1, est2)`` for ``k = 1..iters``.

    AIM curves use ``L_k = L`` and the slack ``delta = eps^2 ||grad f(x0)||^2 / c_hat``
    held constant, i.e. the nominal schedule without backtracking.
    """
    f = build_objective(cfg)
    x0 = np.zeros(f.n)
    R0 = math.sqrt(f.dist_sq(x0))
    L, p, eps = f.L, cfg.p, cfg.eps_hat
    g0 = f.gradient(x0)
    delta = eps ** 2 * float(g0 @ g0) / cfg.c_hat
    rows = []
    A = 1.0 / L
    M = A * delta
    for k in range(1, iters + 1):
        alpha = ((k + 2.0 * p) / (2.0 * p)) ** (p - 1.0) / L
        A += alpha
        M += alpha * alpha * L * delta
        rows.append((k, istm_bound(k, cfg.a, L, R0, p), istm_bound_proper(k, L, R0, p, eps),
                     certificate_estimate1(A, M, 0.5 * R0 ** 2),
                     certificate_estimate2(k, R0, L, delta, p)))
    return rows


def cmd_bounds(ns):
    cfg = build_config(ns)
    out = Path(ns.out) if ns.out else default_out_dir() / "bounds.csv"
    out.parent.mkdir(parents=True, exist_ok=True)
    rows = bound_curves(cfg, cfg.iters)
    with out.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("k", "istm_fixed_a", "istm_proper_a", "aim_est1", "aim_est2"))
        for r in rows:
            w.writerow((r[0],) + tuple(format(v, ".17g") for v in r[1:]))
    print(f"rows={len(rows)} bounds={out}")
    return 0


def make_parser():
    ap = argparse.ArgumentParser(prog="intermethods",
                                 description="First-order methods under relative gradient noise.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one solver and write its trace")
    _add_config_flags(run)
    run.add_argument("--out", help="trace file or directory")
    run.set_defaults(func=cmd_run)

    sw = sub.add_parser("sweep", help="run a Cartesian grid of configurations")
    _add_config_flags(sw)
    sw.add_argument("--grid", action="append", metavar="KEY=V1,V2,...",
                    help="grid axis; repeat for more axes")
    sw.add_argument("--workers", type=int, default=1)
    sw.add_argument("--out", help="output directory")
    sw.set_defaults(func=cmd_sweep)

    ck = sub.add_parser("check", help="interpolation check of a trace with triplets")
    ck.add_argument("trace")
    ck.add_argument("--L", default=None, help="smoothness constant (default: trace metadata)")
    ck.add_argument("--tol", type=float, default=0.0)
    ck.set_defaults(func=cmd_check)

    bd = sub.add_parser("bounds", help="write theoretical bound curves to CSV")
    _add_config_flags(bd)
    bd.add_argument("--out", help="CSV path")
    bd.set_defaults(func=cmd_bounds)
    return ap


def main(argv=None):
    ap = make_parser()
    ns = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return ns.func(ns)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
