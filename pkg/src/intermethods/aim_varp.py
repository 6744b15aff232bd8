"""AIM with adaptation in both ``L`` and the intermediate parameter ``p``.

Starting from ``p = 2``, each outer step performs one AIM iteration and
evaluates

    E_{k+1} = 4 R0^2 max L_i / (k+3)^p_k + 2 max delta_i (k+1)^(p_k - 1).

If ``E_{k+1} > E_k`` the iteration is discarded, ``p_k`` drops by ``eta``
(never below 1) and the same iteration is redone.  At ``p = 1`` the
iteration is accepted unconditionally.
"""

from dataclasses import dataclass
import math

import numpy as np

from .aim import (_Recorder, _check_eps, _resolve_R0, aim_init, aim_iteration,
                  relative_delta_rule)
from .noise import NoisyGradientOracle
from .sets import whole_space
from .trace import RunTrace

__all__ = ["VarPState", "compute_E", "aimvp_run"]


@dataclass(frozen=True)
class VarPState:
    p: float
    E: float
    aim: object


def compute_E(k, R0, max_L, max_delta, p):
    """The estimate that drives the ``p`` decrements (index ``k >= 0``)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return 4.0 * R0 ** 2 / (k + 3.0) ** p * max_L + 2.0 * max_delta * (k + 1.0) ** (p - 1.0)


def aimvp_run(f, policy, x0, budget, *, Q=None, L_s=1.0, eta=0.05, c_hat=1000.0,
              delta=None, R0=None, restart_each_step=False, record_triplets=False,
              keep_points=False, oracle=None):
    """Run ``budget`` accepted outer steps of variable-``p`` AIM.

    By default one AIM state is continued across outer steps.  With
    ``restart_each_step=True`` every outer step instead re-initializes AIM
    at the current output with ``L_s = L_k`` and performs one iteration
    from there; the ``E`` test uses running maxima over the whole run.

    ``R0`` defaults to ``||x0 - x*||``, which satisfies
    ``R0^2 >= ||x0 - x*||^2 / 2``.  The ``p_k`` column holds the ``p`` under
    which each row was accepted, and ``trace.meta['E']`` the accepted
    ``E_k`` sequence.
    """
    budget = int(budget)
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if not 0 < eta <= 1:
        raise ValueError("eta must lie in (0, 1]")
    _check_eps(policy)
    Q = Q or whole_space()
    rule = delta if delta is not None else relative_delta_rule(policy.effective_epsilon, c_hat)
    oracle = oracle or NoisyGradientOracle(f, policy)
    R0 = _resolve_R0(f, Q.project(x0), R0)
    if math.isnan(R0):
        raise ValueError("R0 is required when the objective has no known minimizer")
    trace = RunTrace(dict(solver="aimvp", objective=f.name, n=f.n, L=f.L, mu=f.mu,
                          epsilon_hat=policy.epsilon_hat, policy=policy.kind,
                          seed=policy.seed, p=2.0, eta=float(eta), c_hat=float(c_hat),
                          L_s=float(L_s), N=budget, R0=R0, set=Q.describe(),
                          restart_each_step=bool(restart_each_step)))
    rec = _Recorder(f, trace, oracle, R0, record_triplets, keep_points)
    if record_triplets and f.x_star is not None:
        trace.add_triplet(f.x_star, f.f_star, np.zeros(f.n))

    st = aim_init(f, oracle, x0, Q, L_s, rule, rec.on_query)
    p = 2.0
    E = st.L * R0 ** 2
    E_seq = [E]
    max_L, max_delta = st.max_L, st.max_delta
    rec.emit(st, p)
    decrements = 0
    for k in range(budget):
        while True:
            if restart_each_step:
                base = aim_init(f, oracle, st.y, Q, st.L, rule, rec.on_query)
            else:
                base = st
            cand = aim_iteration(base, f, oracle, Q, p, rule, rec.on_query)
            mL = max(max_L, cand.max_L)
            md = max(max_delta, cand.max_delta)
            E_new = compute_E(k, R0, mL, md, p)
            if E_new <= E or p <= 1.0:
                break
            decrements += 1
            p = max(1.0, 2.0 - decrements * eta)
        st = cand
        max_L, max_delta = mL, md
        E = E_new
        E_seq.append(E)
        if restart_each_step:
            # certificates of a restarted state refer to its own anchor
            rec.emit(st, p, k=k + 1)
        else:
            rec.emit(st, p)
    trace.meta["E"] = E_seq
    trace.meta["p_decrements"] = decrements
    trace.final_point = st.y
    trace.final_state = VarPState(p=p, E=E, aim=st)
    return trace
