"""Post-hoc checks on recorded runs.

* :func:`interpolation_check` decides whether a set of ``(x, f, g)``
  triplets can come from an L-smooth convex function.
* :func:`plateau_detect` and :func:`divergence_onset` locate where a gap
  series stops improving or starts to blow up.
"""

from typing import NamedTuple, Optional, Tuple

import numpy as np

__all__ = [
    "InterpolationResult",
    "as_triplets",
    "interpolation_slack",
    "interpolation_check",
    "plateau_detect",
    "divergence_onset",
]


class InterpolationResult(NamedTuple):
    passed: bool
    worst_violation: float
    witness: Optional[Tuple[int, int]]


def as_triplets(triplets):
    """Stack a list of ``(x, f, g)`` into arrays ``(X, F, G)``."""
    if len(triplets) == 0:
        raise ValueError("need at least one triplet")
    X = np.array([t[0] for t in triplets], dtype=float)
    F = np.array([t[1] for t in triplets], dtype=float)
    G = np.array([t[2] for t in triplets], dtype=float)
    if X.ndim != 2 or G.shape != X.shape or F.shape != (X.shape[0],):
        raise ValueError("inconsistent triplet dimensions")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(F)) and np.all(np.isfinite(G))):
        raise ValueError("triplets must be finite")
    return X, F, G


def interpolation_slack(X, F, G, L, tol=0.0):
    """Matrix ``S[i, j]`` of slacks; the pair condition holds iff ``S >= 0``.

    ``S[i, j] = f_i - f_j - <g_j, x_i - x_j> - ||g_i - g_j||^2 / (2L)
    + tol (1 + |f_i| + |f_j|)``
    """
    if not L > 0:
        raise ValueError("L must be positive")
    GX = G @ X.T                      # GX[j, i] = <g_j, x_i>
    gx_self = np.diag(GX)             # <g_j, x_j>
    GG = G @ G.T
    gsq = np.diag(GG)
    lin = GX.T - gx_self[None, :]     # <g_j, x_i - x_j> at [i, j]
    dgsq = gsq[:, None] + gsq[None, :] - 2.0 * GG
    S = F[:, None] - F[None, :] - lin - dgsq / (2.0 * L)
    absF = np.abs(F)
    S += tol * (1.0 + absF[:, None] + absF[None, :])
    np.fill_diagonal(S, 0.0)
    return S


def interpolation_check(triplets, L, tol=0.0):
    """Check the smooth-convex interpolation conditions on every ordered
    pair of ``triplets``.

    Returns ``(passed, worst_violation, witness)``; ``witness`` is the
    ``(i, j)`` pair with the most negative slack, ``None`` when the check
    passes.  ``worst_violation`` is ``max(0, -min slack)``.
    """
    X, F, G = as_triplets(triplets)
    if len(F) == 1:
        return InterpolationResult(True, 0.0, None)
    S = interpolation_slack(X, F, G, L, tol)
    idx = np.unravel_index(np.argmin(S), S.shape)
    worst = float(S[idx])
    if worst >= 0.0:
        return InterpolationResult(True, 0.0, None)
    return InterpolationResult(False, -worst, (int(idx[0]), int(idx[1])))


def plateau_detect(series, window, rtol):
    """First index where the series stops decreasing appreciably.

    Index ``i`` qualifies when the best value over ``[i, i + window]``
    improves on the best over ``[0, i]`` by at most ``rtol`` (relative).
    Returns ``(i, level)`` with ``level`` the median over that window, or
    ``None``.
    """
    s = np.asarray(series, dtype=float)
    W = int(window)
    if W < 1:
        raise ValueError("window must be positive")
    if not rtol > 0:
        raise ValueError("rtol must be positive")
    if s.size <= W:
        raise ValueError("series must be longer than the window")
    prefix_best = np.minimum.accumulate(s)
    for i in range(s.size - W):
        seg = s[i:i + W + 1]
        improvement = prefix_best[i] - seg.min()
        if improvement <= rtol * abs(prefix_best[i]):
            return i, float(np.median(seg))
    return None


def divergence_onset(series):
    """First index at which the series exceeds twice its running minimum."""
    s = np.asarray(series, dtype=float)
    if s.size == 0:
        return None
    running = np.minimum.accumulate(s)
    hits = np.nonzero(s > 2.0 * running)[0]
    return int(hits[0]) if hits.size else None
