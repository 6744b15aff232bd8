"""Intermediate Similar Triangle Method (ISTM) under relative gradient noise.

One iteration with ``alpha = alpha_{k+1}`` and ``A' = A_k + alpha``::

    x <- (A_k y + alpha z) / A'
    z <- z - alpha * g_tilde(x)
    y <- (A_k y + alpha z) / A'

The oracle is queried once per iteration, at the fresh ``x``.
"""

from dataclasses import dataclass, replace
import math

import numpy as np

from .noise import NoisyGradientOracle
from .schedule import DEFAULT_A_MULTIPLIERS, IstmSchedule, proper_a
from .trace import RunTrace

__all__ = [
    "C1_SQ",
    "IstmState",
    "istm_init",
    "istm_query_point",
    "istm_step",
    "istm_run",
    "istm_bound",
    "istm_bound_proper",
]

# squared constant of the distance bound ||z^k - x*||^2 <= C1^2 R0^2
C1_SQ = 2.0


@dataclass(frozen=True)
class IstmState:
    k: int
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    schedule: IstmSchedule

    @property
    def A(self):
        return self.schedule.A(self.k)


def istm_init(x0, schedule):
    x0 = np.array(x0, dtype=float)
    return IstmState(0, x0.copy(), x0.copy(), x0.copy(), schedule)


def istm_query_point(state):
    """The point ``x^{k+1}`` at which the next gradient is requested."""
    sch = state.schedule
    alpha = sch.alpha(state.k)
    A_k = sch.A(state.k)
    return (A_k * state.y + alpha * state.z) / (A_k + alpha)


def istm_step(state, g_tilde):
    """Advance ``state`` by one iteration given the oracle output at
    :func:`istm_query_point` ``(state)``."""
    g_tilde = np.asarray(g_tilde, dtype=float)
    if g_tilde.shape != state.z.shape:
        raise ValueError(f"gradient shape {g_tilde.shape} does not match {state.z.shape}")
    sch = state.schedule
    alpha = sch.alpha(state.k)
    A_k = sch.A(state.k)
    A_next = A_k + alpha
    x = (A_k * state.y + alpha * state.z) / A_next
    z = state.z - alpha * g_tilde
    y = (A_k * state.y + alpha * z) / A_next
    return replace(state, k=state.k + 1, x=x, y=y, z=z)


def istm_bound(N, a, L, R0, p):
    """Final-gap guarantee ``8 a L C1^2 R0^2 / (N+1)^p`` for fixed ``a``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return 8.0 * a * L * C1_SQ * R0 ** 2 / (N + 1.0) ** p


def istm_bound_proper(N, L, R0, p, epsilon_hat, constants=(16.0, 16.0, 16.0, 16.0)):
    """Rate with ``a`` chosen by :func:`~intermethods.schedule.proper_a`:
    the largest of the noiseless ``L R0^2 / N^p`` term and the three noise
    terms, the last one being the plateau ``eps^2 L R0^2``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    c = constants
    base = L * R0 ** 2
    return max(
        c[0] * base / N ** p,
        c[1] * math.sqrt(epsilon_hat) * base / N ** (0.75 * p),
        c[2] * epsilon_hat * base / N ** (0.5 * p),
        c[3] * epsilon_hat ** 2 * base,
    )


def _resolve_R0(f, x0, R0):
    if f.x_star is not None:
        return float(np.linalg.norm(np.asarray(x0, dtype=float) - f.x_star))
    if R0 is None:
        return math.nan
    return float(R0)


def istm_run(f, policy, x0, N, L=None, a=None, p=2.0, *, R0=None,
             multipliers=DEFAULT_A_MULTIPLIERS, record_triplets=False,
             keep_points=False, oracle=None):
    """Run ``N`` ISTM iterations from ``x0``.

    ``L`` defaults to ``f.L``; ``a=None`` selects
    :func:`~intermethods.schedule.proper_a` for ``N`` and the policy's noise
    level.  Row ``k`` of the trace reports ``y^k``: its gap, true gradient
    norm, ``||z^k - x*||^2`` and the bound ``C1^2 R0^2 / (2 A_k)``.
    """
    N = int(N)
    if N < 1:
        raise ValueError("N must be >= 1")
    L = f.L if L is None else float(L)
    eps = policy.effective_epsilon
    if a is None:
        a = proper_a(N, p, eps, multipliers)
    sch = IstmSchedule(p, a, L)
    sch.prefix(N)
    oracle = oracle or NoisyGradientOracle(f, policy)
    R0 = _resolve_R0(f, x0, R0)
    trace = RunTrace(dict(solver="istm", objective=f.name, n=f.n, L=L, mu=f.mu,
                          epsilon_hat=policy.epsilon_hat, policy=policy.kind,
                          seed=policy.seed, a=float(a), p=float(p), N=N, R0=R0))
    if record_triplets and f.x_star is not None:
        trace.add_triplet(f.x_star, f.f_star, np.zeros(f.n))

    state = istm_init(x0, sch)
    calls0 = oracle.calls

    def emit(st, alpha):
        A = st.A
        bound = C1_SQ * R0 ** 2 / (2.0 * A) if A > 0 else math.nan
        trace.append(k=st.k, f_gap=f.gap(st.y),
                     grad_norm=float(np.linalg.norm(f.gradient(st.y))),
                     dist_sq_to_opt=f.dist_sq(st.z), L_k=L, p_k=p, alpha_k=alpha,
                     A_k=A, oracle_calls_cum=oracle.calls - calls0,
                     bound_istm=bound)
        if keep_points:
            trace.points.append(st.y)

    emit(state, 0.0)
    for _ in range(N):
        xq = istm_query_point(state)
        gt, g = oracle.query(xq)
        if record_triplets:
            trace.add_triplet(xq, f.value(xq), g)
        alpha = sch.alpha(state.k)
        state = istm_step(state, gt)
        emit(state, alpha)
    trace.final_point = state.y
    return trace
