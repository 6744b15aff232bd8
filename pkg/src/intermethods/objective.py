"""Smooth convex test objectives with known minimizers.

Every objective is an immutable :class:`ObjectiveSpec` holding a value map,
a gradient map and the constants the solvers need (``L``, ``mu``) plus the
minimizer and optimal value when they are known in closed form.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.linalg import solve_banded

__all__ = [
    "ObjectiveSpec",
    "worst_case_function",
    "regularized_worst_case",
    "quadratic",
    "finite_difference_gradient",
]


@dataclass(frozen=True)
class ObjectiveSpec:
    """A smooth convex function ``f: R^n -> R``.

    Attributes
    ----------
    n : int
        Dimension of the domain.
    value, gradient : callable
        ``f(x)`` and ``grad f(x)`` for a length-``n`` array ``x``.
    L : float
        Lipschitz constant of the gradient.
    mu : float
        Strong convexity constant, 0 for merely convex functions.
    x_star, f_star : array or None, float or None
        Minimizer and optimal value when known.
    name : str
        Short identifier used in trace metadata.
    """

    n: int
    value: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    L: float
    mu: float = 0.0
    x_star: Optional[np.ndarray] = None
    f_star: Optional[float] = None
    name: str = "objective"

    def gap(self, x):
        """Return ``f(x) - f_star``, or NaN when the optimum is unknown."""
        if self.f_star is None:
            return float("nan")
        return float(self.value(x)) - self.f_star

    def dist_sq(self, x):
        if self.x_star is None:
            return float("nan")
        d = np.asarray(x, dtype=float) - self.x_star
        return float(d @ d)


def _tridiag_apply(x):
    # (2 x_i - x_{i-1} - x_{i+1}) with zero boundary values
    out = 2.0 * x
    out[1:] -= x[:-1]
    out[:-1] -= x[1:]
    return out


def worst_case_function(n, L=1.0):
    """Nesterov's worst-case quadratic for first-order methods.

    ``f(x) = L/8 (x_1^2 + sum (x_i - x_{i+1})^2 + x_n^2) - L/4 x_1``

    The minimizer is ``x*_i = 1 - i/(n+1)``; ``f_star`` is obtained by
    evaluating ``f`` there.
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")
    if not L > 0:
        raise ValueError(f"L must be positive, got {L}")
    L = float(L)

    def value(x):
        x = np.asarray(x, dtype=float)
        diffs = x[:-1] - x[1:]
        quad = x[0] ** 2 + diffs @ diffs + x[-1] ** 2
        return float(L / 8.0 * quad - L / 4.0 * x[0])

    def gradient(x):
        x = np.asarray(x, dtype=float)
        g = (L / 4.0) * _tridiag_apply(x.copy())
        g[0] -= L / 4.0
        return g

    x_star = 1.0 - np.arange(1, n + 1) / (n + 1.0)
    x_star.setflags(write=False)
    return ObjectiveSpec(n=n, value=value, gradient=gradient, L=L, mu=0.0,
                         x_star=x_star, f_star=value(x_star),
                         name="worst-case")


def regularized_worst_case(n, L=1.0, mu=0.01):
    """Worst-case quadratic plus ``mu/2 ||x||^2``, scaled so that the total
    smoothness constant stays ``L``.

    The tridiagonal part uses ``L - mu`` so the Hessian spectrum lies in
    ``(mu, L)``.
    """
    if not 0 < mu < L:
        raise ValueError(f"need 0 < mu < L, got mu={mu}, L={L}")
    base = worst_case_function(n, L - mu)
    Lb = L - mu

    def value(x):
        x = np.asarray(x, dtype=float)
        return base.value(x) + 0.5 * mu * float(x @ x)

    def gradient(x):
        x = np.asarray(x, dtype=float)
        return base.gradient(x) + mu * x

    # banded form of (Lb/4) T + mu I
    ab = np.empty((3, base.n))
    ab[0, :] = -Lb / 4.0
    ab[1, :] = Lb / 2.0 + mu
    ab[2, :] = -Lb / 4.0
    rhs = np.zeros(base.n)
    rhs[0] = Lb / 4.0
    x_star = solve_banded((1, 1), ab, rhs)
    x_star.setflags(write=False)
    return ObjectiveSpec(n=base.n, value=value, gradient=gradient, L=float(L),
                         mu=float(mu), x_star=x_star, f_star=value(x_star),
                         name="quadratic-reg")


def quadratic(d, b):
    """Separable quadratic ``f(x) = 1/2 sum d_i (x_i - b_i)^2``."""
    d = np.array(d, dtype=float).ravel()
    b = np.array(b, dtype=float).ravel()
    if d.shape != b.shape:
        raise ValueError("d and b must have the same length")
    if d.size == 0 or np.any(d <= 0):
        raise ValueError("all diagonal entries must be positive")

    def value(x):
        r = np.asarray(x, dtype=float) - b
        return float(0.5 * (d * r) @ r)

    def gradient(x):
        return d * (np.asarray(x, dtype=float) - b)

    x_star = b.copy()
    x_star.setflags(write=False)
    d.setflags(write=False)
    return ObjectiveSpec(n=d.size, value=value, gradient=gradient,
                         L=float(d.max()), mu=float(d.min()), x_star=x_star,
                         f_star=0.0, name="quadratic")


def finite_difference_gradient(f, x, h=1e-5):
    """Central-difference approximation of ``grad f(x)``."""
    if not h > 0:
        raise ValueError("h must be positive")
    x = np.asarray(x, dtype=float)
    if x.shape != (f.n,):
        raise ValueError(f"expected a point of length {f.n}, got shape {x.shape}")
    g = np.empty(f.n)
    e = np.zeros(f.n)
    for i in range(f.n):
        e[i] = h
        g[i] = (f.value(x + e) - f.value(x - e)) / (2.0 * h)
        e[i] = 0.0
    return g
