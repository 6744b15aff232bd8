"""Gradient oracles with relative noise.

A returned gradient ``g_tilde`` always satisfies
``||g_tilde - grad f(x)|| <= eps_hat * ||grad f(x)||``.  Three adversaries
are provided besides the exact oracle:

``shrink``
    ``(1 - eps_hat) grad f(x)``.
``random_sphere``
    ``grad f(x) + eps_hat ||grad f(x)|| u`` with ``u`` uniform on the unit
    sphere, drawn from a seeded Philox stream.
``anti_progress``
    pushes the step away from a known target (normally ``x_star``).  It
    uses information a real oracle never has and exists for experiments
    only.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "POLICY_KINDS",
    "NoisePolicy",
    "NoiseRecord",
    "NoisyGradientOracle",
    "noisy_gradient",
    "verify_relative_bound",
]

POLICY_KINDS = ("exact", "shrink", "random_sphere", "anti_progress")


class NoisePolicy:
    """Adversary selection plus its private random stream.

    One instance belongs to one solver run; build a fresh policy (or call
    :meth:`reset`) to replay a run.
    """

    def __init__(self, kind="exact", epsilon_hat=0.0, seed=0):
        if kind not in POLICY_KINDS:
            raise ValueError(f"unknown noise policy {kind!r}; expected one of {POLICY_KINDS}")
        epsilon_hat = float(epsilon_hat)
        if not 0.0 <= epsilon_hat <= 1.0:
            raise ValueError(f"epsilon_hat must lie in [0, 1], got {epsilon_hat}")
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.kind = kind
        self.epsilon_hat = epsilon_hat
        self.seed = seed
        self.reset()

    def reset(self):
        self._rng = np.random.Generator(np.random.Philox(self.seed))

    @property
    def effective_epsilon(self):
        return 0.0 if self.kind == "exact" else self.epsilon_hat

    def unit_vector(self, n):
        u = self._rng.standard_normal(n)
        return u / np.linalg.norm(u)

    def perturb(self, g, x=None, target=None):
        """Return the noisy version of the true gradient ``g`` at ``x``."""
        if self.kind == "exact":
            return g.copy()
        eps = self.epsilon_hat
        if self.kind == "shrink":
            return (1.0 - eps) * g
        gnorm = np.linalg.norm(g)
        if self.kind == "random_sphere":
            # draw even when gnorm == 0 so the stream depends only on the call count
            u = self.unit_vector(g.size)
            return g + (eps * gnorm) * u
        if target is None or x is None:
            raise ValueError("anti_progress noise needs the query point and a target")
        if gnorm == 0.0:
            return g.copy()
        v = np.asarray(target, dtype=float) - x
        vnorm = np.linalg.norm(v)
        v = v / vnorm if vnorm > 0 else -g / gnorm
        return g + (eps * gnorm) * v

    def __repr__(self):
        return f"NoisePolicy(kind={self.kind!r}, epsilon_hat={self.epsilon_hat}, seed={self.seed})"


@dataclass(frozen=True)
class NoiseRecord:
    query_point: np.ndarray
    true_gradient: np.ndarray
    returned_gradient: np.ndarray
    theta: np.ndarray


def noisy_gradient(f, policy, x, target=None):
    """Query ``f``'s gradient at ``x`` through ``policy``.

    Returns ``(g_tilde, record)``.
    """
    x = np.asarray(x, dtype=float)
    g = np.asarray(f.gradient(x), dtype=float)
    gt = policy.perturb(g, x, target)
    return gt, NoiseRecord(x.copy(), g, gt, gt - g)


def verify_relative_bound(record, epsilon_hat):
    """Check both the noise ball and the norm sandwich
    ``(1-eps)||g|| <= ||g_tilde|| <= (1+eps)||g||``."""
    gn = float(np.linalg.norm(record.true_gradient))
    tn = float(np.linalg.norm(record.returned_gradient))
    tol = 1e-12 * (1.0 + gn)
    if np.linalg.norm(record.theta) > epsilon_hat * gn + tol:
        return False
    return (1.0 - epsilon_hat) * gn - tol <= tn <= (1.0 + epsilon_hat) * gn + tol


class NoisyGradientOracle:
    """Callable oracle counting queries and optionally keeping records.

    ``target`` defaults to the objective's minimizer, which is what the
    ``anti_progress`` policy needs.
    """

    def __init__(self, f, policy, target=None, keep_records=False):
        self.f = f
        self.policy = policy
        self.target = f.x_star if target is None else np.asarray(target, dtype=float)
        if policy.kind == "anti_progress" and self.target is None:
            raise ValueError("anti_progress noise needs a target (objective has no x_star)")
        self.keep_records = keep_records
        self.records = []
        self.calls = 0

    def query(self, x):
        """Return ``(g_tilde, true_gradient)`` at ``x``."""
        gt, rec = noisy_gradient(self.f, self.policy, x, self.target)
        self.calls += 1
        if self.keep_records:
            self.records.append(rec)
        return gt, rec.true_gradient

    def __call__(self, x):
        return self.query(x)[0]
