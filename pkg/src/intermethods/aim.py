"""Adaptive Intermediate Method (AIM) with relative gradient noise.

An estimate-sequence method on a feasible set ``Q`` with doubling
backtracking on the smoothness estimate ``L_k``.  The dual point is kept in
closed form, ``z^k = P_Q(x^0 - s_k)`` with ``s_k = sum_{i<=k} alpha_i
g_tilde(x^i)``, so a backtracking retry only swaps the last term of the
running sum.

The descent test accepts ``L_k`` once

    f(w) <= f(x) + <g_tilde(x), w - x> + L_k/2 ||w - x||^2 + delta_k

and the default slack is ``delta_k = eps^2 ||g_tilde(x^k)||^2 / c_hat``.
"""

from dataclasses import dataclass, replace
import math

import numpy as np

from .noise import NoisyGradientOracle
from .schedule import aim_alpha_B
from .sets import whole_space
from .trace import RunTrace

__all__ = [
    "MAX_DOUBLINGS",
    "BacktrackingError",
    "AimState",
    "relative_delta_rule",
    "aim_init",
    "aim_iteration",
    "aim_run",
    "certificate_estimate1",
    "certificate_estimate2",
    "l_hat",
]

MAX_DOUBLINGS = 60


class BacktrackingError(RuntimeError):
    """The descent test kept failing; the objective is probably not smooth
    or ``L`` is badly mis-specified."""


@dataclass(frozen=True)
class AimState:
    k: int
    x0: np.ndarray
    L: float
    s: np.ndarray
    x: np.ndarray
    z: np.ndarray
    w: np.ndarray
    y: np.ndarray
    alpha: float
    B: float
    A: float
    delta: float
    M: float
    max_L: float
    max_delta: float
    trials: int = 1
    doublings: int = 0


def relative_delta_rule(epsilon_hat, c_hat=1000.0):
    """``delta(g) = eps^2 ||g||^2 / c_hat``."""
    if not c_hat > 0:
        raise ValueError("c_hat must be positive")
    scale = epsilon_hat ** 2 / c_hat

    def rule(g):
        return scale * float(g @ g)

    return rule


def _as_rule(delta):
    if callable(delta):
        return delta
    d = float(delta)
    if d < 0:
        raise ValueError("delta must be nonnegative")
    return lambda g: d


def l_hat(L, epsilon_hat, c_hat):
    """Smoothness level at which the descent test is guaranteed to pass."""
    if epsilon_hat >= 1.0:
        return math.inf
    return L * (1.0 + c_hat / (1.0 - epsilon_hat) ** 2)


def _descent_ok(f, x, gx, w, L, delta):
    d = w - x
    rhs = f.value(x) + float(gx @ d) + 0.5 * L * float(d @ d) + delta
    return f.value(w) <= rhs


def aim_init(f, oracle, x0, Q=None, L_s=1.0, delta=0.0, on_query=None):
    """Initial backtracking: find ``L_0 = 2^i L_s`` and ``y^0``.

    ``delta`` is a nonnegative float or a rule ``g_tilde -> delta``.
    ``on_query(x, g_true)`` is called after every oracle query.
    """
    if not L_s > 0:
        raise ValueError("L_s must be positive")
    Q = Q or whole_space()
    rule = _as_rule(delta)
    x0 = Q.project(x0)
    gt, g = oracle.query(x0)
    if on_query:
        on_query(x0, g)
    d0 = rule(gt)
    L = float(L_s)
    for i in range(MAX_DOUBLINGS + 1):
        y0 = Q.project(x0 - gt / L)
        if _descent_ok(f, x0, gt, y0, L, d0):
            break
        L *= 2.0
    else:
        raise BacktrackingError(f"initial descent test failed after {MAX_DOUBLINGS} doublings")
    alpha = 1.0 / L
    s = alpha * gt
    z0 = Q.project(x0 - s)
    return AimState(k=0, x0=x0, L=L, s=s, x=x0, z=z0, w=y0, y=y0, alpha=alpha,
                    B=alpha, A=alpha, delta=d0, M=alpha * d0, max_L=L,
                    max_delta=d0, trials=i + 1, doublings=i)


def aim_iteration(state, f, oracle, Q=None, p=2.0, delta=0.0, on_query=None):
    """One outer AIM iteration ``k-1 -> k`` with inner doubling on ``L_k``.

    Every trial value of ``L_k`` moves ``x^k`` and therefore re-queries the
    oracle.
    """
    Q = Q or whole_space()
    rule = _as_rule(delta)
    k = state.k + 1
    L = state.L
    for i in range(MAX_DOUBLINGS + 1):
        alpha, B = aim_alpha_B(k, p, L)
        tau = alpha / B
        x = tau * state.z + (1.0 - tau) * state.y
        gt, g = oracle.query(x)
        if on_query:
            on_query(x, g)
        d = rule(gt)
        s = state.s + alpha * gt
        z = Q.project(state.x0 - s)
        w = tau * z + (1.0 - tau) * state.y
        if _descent_ok(f, x, gt, w, L, d):
            break
        L *= 2.0
    else:
        raise BacktrackingError(f"descent test failed after {MAX_DOUBLINGS} doublings at k={k}")
    A = state.A + alpha
    r = B / A
    y = r * w + (1.0 - r) * state.y
    return replace(state, k=k, L=L, s=s, x=x, z=z, w=w, y=y, alpha=alpha, B=B,
                   A=A, delta=d, M=state.M + B * d, max_L=max(state.max_L, L),
                   max_delta=max(state.max_delta, d), trials=i + 1,
                   doublings=state.doublings + i)


def certificate_estimate1(A_k, M_k, h_star):
    """Trace-computable bound ``(h_star + M_k) / A_k`` on ``f(y^k) - f*``."""
    if not A_k > 0:
        raise ValueError("A_k must be positive")
    return (h_star + M_k) / A_k


def estimate1_from_trace(trace, h_star):
    """Recompute estimate 1 for every row of an AIM trace from its
    ``alpha_k``, ``L_k`` and ``delta_k`` columns."""
    alpha = trace.column("alpha_k")
    L = trace.column("L_k")
    delta = trace.column("delta_k")
    A = np.cumsum(alpha)
    M = np.cumsum(alpha * alpha * L * delta)
    return (h_star + M) / A


def certificate_estimate2(k, R0, max_L, max_delta, p):
    """``4 R0^2 max_L / (k+2)^p + 2 max_delta k^(p-1)``, valid for ``k >= 1``."""
    if k < 1:
        raise ValueError("estimate 2 is stated for k >= 1")
    return 4.0 * R0 ** 2 * max_L / (k + 2.0) ** p + 2.0 * max_delta * k ** (p - 1.0)


def _check_eps(policy):
    if policy.kind != "exact" and policy.epsilon_hat >= 1.0 - 1e-9:
        raise ValueError("AIM needs epsilon_hat < 1 unless the oracle is exact")


class _Recorder:
    """Shared trace bookkeeping for AIM-type runs."""

    def __init__(self, f, trace, oracle, R0, record_triplets, keep_points):
        self.f = f
        self.trace = trace
        self.oracle = oracle
        self.calls0 = oracle.calls
        self.R0 = R0
        self.h_star = 0.5 * R0 ** 2 if not math.isnan(R0) else math.nan
        self.record_triplets = record_triplets
        self.keep_points = keep_points

    def on_query(self, x, g):
        if self.record_triplets:
            self.trace.add_triplet(x, self.f.value(x), g)

    def emit(self, st, p, k=None):
        f = self.f
        k = st.k if k is None else k
        est2 = (certificate_estimate2(k, self.R0, st.max_L, st.max_delta, p)
                if k >= 1 else math.nan)
        self.trace.append(
            k=k, f_gap=f.gap(st.y), grad_norm=float(np.linalg.norm(f.gradient(st.y))),
            dist_sq_to_opt=f.dist_sq(st.z), L_k=st.L, p_k=p, alpha_k=st.alpha,
            A_k=st.A, delta_k=st.delta, oracle_calls_cum=self.oracle.calls - self.calls0,
            bound_est1=certificate_estimate1(st.A, st.M, self.h_star), bound_est2=est2)
        if self.keep_points:
            self.trace.points.append(st.y)


def _resolve_R0(f, x0, R0):
    if R0 is not None:
        return float(R0)
    if f.x_star is not None:
        return float(np.linalg.norm(np.asarray(x0, dtype=float) - f.x_star))
    return math.nan


def aim_run(f, policy, x0, N, p=2.0, *, Q=None, L_s=1.0, c_hat=1000.0,
            delta=None, R0=None, record_triplets=False, keep_points=False,
            oracle=None):
    """Run AIM for ``N`` outer iterations.

    ``delta`` overrides the default relative slack rule; ``R0`` defaults to
    ``||x0 - x*||``.  Rows carry both certificates (estimate 2 from
    ``k = 1`` on).
    """
    N = int(N)
    if N < 1:
        raise ValueError("N must be >= 1")
    _check_eps(policy)
    Q = Q or whole_space()
    rule = delta if delta is not None else relative_delta_rule(policy.effective_epsilon, c_hat)
    oracle = oracle or NoisyGradientOracle(f, policy)
    R0 = _resolve_R0(f, Q.project(x0), R0)
    trace = RunTrace(dict(solver="aim", objective=f.name, n=f.n, L=f.L, mu=f.mu,
                          epsilon_hat=policy.epsilon_hat, policy=policy.kind,
                          seed=policy.seed, p=float(p), c_hat=float(c_hat),
                          L_s=float(L_s), N=N, R0=R0, set=Q.describe()))
    rec = _Recorder(f, trace, oracle, R0, record_triplets, keep_points)
    if record_triplets and f.x_star is not None:
        trace.add_triplet(f.x_star, f.f_star, np.zeros(f.n))
    st = aim_init(f, oracle, x0, Q, L_s, rule, rec.on_query)
    rec.emit(st, p)
    for _ in range(N):
        st = aim_iteration(st, f, oracle, Q, p, rule, rec.on_query)
        rec.emit(st, p)
    trace.meta["doublings"] = st.doublings
    trace.final_point = st.y
    trace.final_state = st
    return trace
