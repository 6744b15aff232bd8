"""Experiment configuration, single runs and parameter sweeps.

:class:`SolverConfig` carries every scalar a run needs; :func:`run_config`
executes one configuration and :func:`run_sweep` the Cartesian product of
a grid of overrides, writing one trace per cell plus ``summary.csv``.
"""

from concurrent.futures import ProcessPoolExecutor
import csv
from dataclasses import asdict, dataclass, field, fields, replace
from datetime import datetime, timezone
import itertools
import logging
import math
import os
from pathlib import Path

import numpy as np

from . import sets
from .aim import aim_run
from .aim_varp import aimvp_run
from .certify import divergence_onset, plateau_detect
from .istm import istm_run
from .noise import NoisePolicy
from .objective import quadratic, regularized_worst_case, worst_case_function
from .ristm import restart_schedule, ristm_run
from .schedule import DEFAULT_A_MULTIPLIERS, proper_a
from .trace import write_trace

__all__ = [
    "OUT_DIR_ENV",
    "SOLVERS",
    "FUNCTIONS",
    "NOISE_KINDS",
    "ConfigError",
    "SolverConfig",
    "build_objective",
    "build_set",
    "run_config",
    "run_sweep",
    "default_out_dir",
]

log = logging.getLogger(__name__)

OUT_DIR_ENV = "INTERMETHODS_OUT"
SOLVERS = ("istm", "ristm", "aim", "aimvp")
FUNCTIONS = ("worst-case", "quadratic", "quadratic-reg")
NOISE_KINDS = {"exact": "exact", "shrink": "shrink", "random": "random_sphere",
               "anti": "anti_progress"}
SET_KINDS = ("all", "box", "ball")


class ConfigError(ValueError):
    """Invalid configuration; ``field`` names the offending option."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass
class SolverConfig:
    solver: str = "istm"
    fn: str = "worst-case"
    n: int = 100
    L: float = 1.0
    mu: float = None
    p: float = 2.0
    a: float = 2.0
    auto_a: bool = False
    a_multipliers: tuple = DEFAULT_A_MULTIPLIERS
    eps_hat: float = 0.0
    noise: str = "random"
    seed: int = 0
    iters: int = 300
    eps_target: float = 1e-6
    c_hat: float = 1000.0
    eta: float = 0.05
    L_s: float = 1.0
    set: str = "all"
    set_lower: float = 0.0
    set_upper: float = 1.0
    set_radius: float = 1.0
    aimvp_restart: bool = False
    record_triplets: bool = False
    fmt: str = "csv"
    extra: dict = field(default_factory=dict)

    def validate(self):
        if self.solver not in SOLVERS:
            raise ConfigError("--solver", f"unknown solver {self.solver!r}; choose from {SOLVERS}")
        if self.fn not in FUNCTIONS:
            raise ConfigError("--fn", f"unknown function {self.fn!r}; choose from {FUNCTIONS}")
        if self.noise not in NOISE_KINDS:
            raise ConfigError("--noise", f"unknown noise {self.noise!r}; choose from {tuple(NOISE_KINDS)}")
        if self.set not in SET_KINDS:
            raise ConfigError("--set", f"unknown set {self.set!r}; choose from {SET_KINDS}")
        if self.fmt not in ("csv", "json"):
            raise ConfigError("--format", "must be csv or json")
        if int(self.n) < 1:
            raise ConfigError("--n", "must be a positive integer")
        if not self.L > 0:
            raise ConfigError("--L", "must be positive")
        if self.mu is not None and not 0 <= self.mu <= self.L:
            raise ConfigError("--mu", "must satisfy 0 <= mu <= L")
        if not 1.0 <= self.p <= 2.0:
            raise ConfigError("--p", "must lie in [1, 2]")
        if not self.auto_a and not self.a >= 1.0:
            raise ConfigError("--a", "must be >= 1")
        if len(self.a_multipliers) != 4 or any(m < 0 for m in self.a_multipliers):
            raise ConfigError("--a-multipliers", "need four nonnegative values")
        if not 0.0 <= self.eps_hat <= 1.0:
            raise ConfigError("--eps-hat", "must lie in [0, 1]")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("--seed", "must be a 64-bit unsigned integer")
        if int(self.iters) < 1:
            raise ConfigError("--iters", "must be >= 1")
        if not self.eps_target > 0:
            raise ConfigError("--eps-target", "must be positive")
        if not self.c_hat > 0:
            raise ConfigError("--c-hat", "must be positive")
        if not 0 < self.eta <= 1:
            raise ConfigError("--eta", "must lie in (0, 1]")
        if not self.L_s > 0:
            raise ConfigError("--L-s", "must be positive")
        if self.set == "box" and self.set_lower > self.set_upper:
            raise ConfigError("--set-lower", "must not exceed --set-upper")
        if self.set == "ball" and not self.set_radius > 0:
            raise ConfigError("--set-radius", "must be positive")
        if self.solver in ("istm", "ristm") and self.set != "all":
            raise ConfigError("--set", f"{self.solver} is unconstrained; use --set all")
        if self.solver == "ristm":
            mu = self.effective_mu
            if not mu > 0 or self.fn == "worst-case":
                raise ConfigError("--mu", "ristm needs a strongly convex objective "
                                  "(--fn quadratic or quadratic-reg with --mu > 0)")
        if self.fn == "quadratic-reg" and not 0 < self.effective_mu < self.L:
            raise ConfigError("--mu", "quadratic-reg needs 0 < mu < L")
        if (self.solver in ("aim", "aimvp") and self.noise != "exact"
                and self.eps_hat >= 1.0 - 1e-9):
            raise ConfigError("--eps-hat", "AIM needs eps-hat < 1 unless --noise exact")
        return self

    @property
    def effective_mu(self):
        if self.mu is not None:
            return float(self.mu)
        if self.fn == "quadratic-reg":
            return 0.01
        if self.fn == "quadratic":
            return self.L / self.n
        return 0.0


def build_objective(cfg):
    n, L = int(cfg.n), float(cfg.L)
    if cfg.fn == "worst-case":
        return worst_case_function(n, L)
    if cfg.fn == "quadratic-reg":
        return regularized_worst_case(n, L, cfg.effective_mu)
    d = np.linspace(cfg.effective_mu, L, n) if n > 1 else np.array([L])
    b = np.linspace(1.0, -1.0, n) if n > 1 else np.array([1.0])
    return quadratic(d, b)


def build_set(cfg):
    n = int(cfg.n)
    if cfg.set == "box":
        return sets.box(cfg.set_lower, cfg.set_upper, n)
    if cfg.set == "ball":
        return sets.ball(0.0, cfg.set_radius, n)
    return sets.whole_space()


def default_out_dir():
    return Path(os.environ.get(OUT_DIR_ENV, "."))


def _metadata(cfg, a_used):
    return dict(solver=cfg.solver, objective=cfg.fn, n=int(cfg.n), L=float(cfg.L),
                mu=cfg.effective_mu, epsilon_hat=float(cfg.eps_hat), a=a_used,
                p=float(cfg.p), seed=int(cfg.seed), policy=NOISE_KINDS[cfg.noise],
                c_hat=float(cfg.c_hat), eta=float(cfg.eta))


def run_config(cfg):
    """Execute one validated configuration and return its trace."""
    cfg.validate()
    f = build_objective(cfg)
    policy = NoisePolicy(NOISE_KINDS[cfg.noise], cfg.eps_hat, int(cfg.seed))
    x0 = np.zeros(f.n)
    iters = int(cfg.iters)
    a_used = None
    if cfg.solver == "istm":
        a_used = (proper_a(iters, cfg.p, policy.effective_epsilon, cfg.a_multipliers)
                  if cfg.auto_a else float(cfg.a))
        tr = istm_run(f, policy, x0, iters, a=a_used, p=cfg.p,
                      record_triplets=cfg.record_triplets)
    elif cfg.solver == "ristm":
        R0 = math.sqrt(f.dist_sq(x0))
        plan = restart_schedule(f.mu, f.L, R0, cfg.eps_target, cfg.p,
                                policy.effective_epsilon, cfg.a_multipliers)
        a_used = plan.a_per_restart
        tr = ristm_run(f, policy, x0, plan, record_triplets=cfg.record_triplets)
    elif cfg.solver == "aim":
        tr = aim_run(f, policy, x0, iters, p=cfg.p, Q=build_set(cfg), L_s=cfg.L_s,
                     c_hat=cfg.c_hat, record_triplets=cfg.record_triplets)
    else:
        tr = aimvp_run(f, policy, x0, iters, Q=build_set(cfg), L_s=cfg.L_s, eta=cfg.eta,
                       c_hat=cfg.c_hat, restart_each_step=cfg.aimvp_restart,
                       record_triplets=cfg.record_triplets)
    meta = dict(tr.meta)
    meta.update(_metadata(cfg, a_used))
    meta["timestamp"] = datetime.now(timezone.utc).isoformat()
    tr.meta = meta
    tr.check_invariants()
    return tr


def trace_filename(cfg, tag=None):
    stem = f"{cfg.solver}_{cfg.fn}_seed{cfg.seed}" if tag is None else tag
    return f"{stem}.{cfg.fmt}"


SUMMARY_COLUMNS = ("cell", "params", "status", "final_gap", "min_gap", "plateau_index",
                   "plateau_level", "divergence_onset", "trace")


def _run_cell(args):
    idx, cfg, out_dir, window, rtol = args
    try:
        tr = run_config(cfg)
    except (ConfigError, ValueError) as exc:
        return idx, None, f"skipped: {exc}"
    path = Path(out_dir) / trace_filename(cfg, f"cell{idx:04d}_{cfg.solver}")
    write_trace(tr, path, cfg.fmt)
    gaps = tr.column("f_gap")
    plateau = plateau_detect(gaps, window, rtol) if gaps.size > window else None
    return idx, dict(final_gap=gaps[-1], min_gap=float(np.nanmin(gaps)),
                     plateau_index=None if plateau is None else plateau[0],
                     plateau_level=None if plateau is None else plateau[1],
                     divergence_onset=divergence_onset(gaps), trace=path.name), "ok"


def expand_grid(base, grid):
    """Configurations for the Cartesian product of ``grid`` (name -> values).

    An empty grid, or any key with no values, yields no cells.
    """
    if not grid or any(len(v) == 0 for v in grid.values()):
        return []
    keys = list(grid)
    cells = []
    for combo in itertools.product(*(grid[k] for k in keys)):
        cells.append((dict(zip(keys, combo)), replace(base, **dict(zip(keys, combo)))))
    return cells


def run_sweep(base, grid, out_dir, workers=1, window=20, rtol=1e-3):
    """Run every grid cell and write ``summary.csv``; return its rows."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    cells = expand_grid(base, grid)
    jobs = [(i, cfg, str(out_dir), window, rtol) for i, (_, cfg) in enumerate(cells)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(_run_cell, jobs))
    else:
        results = [_run_cell(j) for j in jobs]
    rows = []
    for (idx, stats, status), (params, _) in zip(results, cells):
        if stats is None:
            log.warning("cell %d %s %s", idx, params, status)
            stats = {}
        row = {c: "" for c in SUMMARY_COLUMNS}
        row.update(cell=idx, params=";".join(f"{k}={v}" for k, v in params.items()),
                   status=status)
        row.update({k: ("" if v is None else v) for k, v in stats.items()})
        rows.append(row)
    with (out_dir / "summary.csv").open("w", newline="") as fh:
        w = csv.DictWriter(fh, SUMMARY_COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: (format(v, ".17g") if isinstance(v, float) else v)
                        for k, v in row.items()})
    return rows


def config_field_names():
    return [f.name for f in fields(SolverConfig) if f.name != "extra"]


def config_as_dict(cfg):
    d = asdict(cfg)
    d.pop("extra", None)
    return d
