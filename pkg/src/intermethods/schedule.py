"""Coefficient sequences for the intermediate methods.

ISTM uses ``alpha_{k+1} = (k+2)^(p-1) / (2 a L)`` and prefix sums ``A_k``;
AIM uses ``alpha_k = ((k + 2p) / (2p))^(p-1) / L_k`` and ``B_k = alpha_k^2 L_k``.
"""

import math

import numpy as np

__all__ = [
    "DEFAULT_A_MULTIPLIERS",
    "IstmSchedule",
    "istm_alpha",
    "istm_A",
    "proper_a",
    "aim_alpha_B",
]

DEFAULT_A_MULTIPLIERS = (1.0, 1.0, 1.0, 20.0)


def _check_p(p):
    if not 1.0 <= p <= 2.0:
        raise ValueError(f"intermediate parameter p must lie in [1, 2], got {p}")


def _check_istm(p, a, L):
    _check_p(p)
    if not a >= 1.0:
        raise ValueError(f"a must be >= 1, got {a}")
    if not L > 0:
        raise ValueError(f"L must be positive, got {L}")


def istm_alpha(k, p, a, L):
    """Return ``alpha_{k+1}`` for iteration index ``k >= 0``."""
    _check_istm(p, a, L)
    if k < 0:
        raise ValueError("k must be nonnegative")
    return (k + 2.0) ** (p - 1.0) / (2.0 * a * L)


def _neumaier_prefix(terms):
    """Compensated running sums ``[0, t0, t0+t1, ...]``."""
    out = np.empty(len(terms) + 1)
    out[0] = 0.0
    s = 0.0
    c = 0.0
    for i, t in enumerate(terms):
        t = float(t)
        u = s + t
        if abs(s) >= abs(t):
            c += (s - u) + t
        else:
            c += (t - u) + s
        s = u
        out[i + 1] = s + c
    return out


class IstmSchedule:
    """ISTM step sizes with cached, compensated prefix sums.

    ``alpha(k)`` is ``alpha_{k+1}`` and ``A(k)`` is ``A_k`` (so ``A(0) == 0``).
    """

    def __init__(self, p, a, L):
        _check_istm(p, a, L)
        self.p = float(p)
        self.a = float(a)
        self.L = float(L)
        self._A = np.zeros(1)

    def alpha(self, k):
        return (k + 2.0) ** (self.p - 1.0) / (2.0 * self.a * self.L)

    def alphas(self, N):
        """``alpha_1 .. alpha_N`` as an array."""
        return (np.arange(N) + 2.0) ** (self.p - 1.0) / (2.0 * self.a * self.L)

    def prefix(self, N):
        """``A_0 .. A_N`` as an array."""
        if len(self._A) <= N:
            self._A = _neumaier_prefix(self.alphas(N))
        return self._A[: N + 1]

    def A(self, k):
        return float(self.prefix(k)[k])


def istm_A(k, p, a, L):
    """Return ``A_k``, the compensated sum of ``alpha_1 .. alpha_k``."""
    _check_istm(p, a, L)
    if k < 0:
        raise ValueError("k must be nonnegative")
    return IstmSchedule(p, a, L).A(k)


def proper_a(N, p, epsilon_hat, multipliers=DEFAULT_A_MULTIPLIERS):
    """Step-damping parameter that keeps ISTM stable under relative noise.

    ``max{m0, m1 N^(p/4) sqrt(eps), m2 N^(p/2) eps, m3 N^p eps^2}``,
    clamped below at 1.
    """
    if N < 1:
        raise ValueError("N must be a positive integer")
    _check_p(p)
    if not 0.0 <= epsilon_hat <= 1.0:
        raise ValueError(f"epsilon_hat must lie in [0, 1], got {epsilon_hat}")
    m = tuple(float(v) for v in multipliers)
    if len(m) != 4 or any(v < 0 for v in m):
        raise ValueError("multipliers must be four nonnegative reals")
    terms = (
        m[0],
        m[1] * N ** (p / 4.0) * math.sqrt(epsilon_hat),
        m[2] * N ** (p / 2.0) * epsilon_hat,
        m[3] * N ** p * epsilon_hat ** 2,
    )
    return max(1.0, *terms)


def aim_alpha_B(k, p, L_k):
    """AIM coefficients ``(alpha_k, B_k)`` for ``k >= 1``."""
    if k < 1:
        raise ValueError("k must be >= 1 (k = 0 uses alpha_0 = 1/L_0)")
    _check_p(p)
    if not L_k > 0:
        raise ValueError(f"L_k must be positive, got {L_k}")
    alpha = ((k + 2.0 * p) / (2.0 * p)) ** (p - 1.0) / L_k
    return alpha, alpha * alpha * L_k
