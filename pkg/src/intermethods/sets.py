"""Closed convex feasible sets with Euclidean projection."""

import numpy as np

__all__ = ["FeasibleSet", "whole_space", "box", "ball"]


class FeasibleSet:
    """A feasible set ``Q`` described by ``kind`` and its parameters.

    Use :func:`whole_space`, :func:`box` or :func:`ball` to build one.
    """

    def __init__(self, kind, **params):
        self.kind = kind
        self.params = params

    def project(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == "whole_space":
            return x.copy()
        if self.kind == "box":
            return np.clip(x, self.params["lower"], self.params["upper"])
        if self.kind == "ball":
            c = self.params["center"]
            r = self.params["radius"]
            d = x - c
            nd = np.linalg.norm(d)
            if nd <= r:
                return x.copy()
            return c + (r / nd) * d
        raise ValueError(f"unknown set kind {self.kind!r}")

    __call__ = project

    def contains(self, x, tol=1e-12):
        x = np.asarray(x, dtype=float)
        if self.kind == "whole_space":
            return True
        if self.kind == "box":
            return bool(np.all(x >= self.params["lower"] - tol)
                        and np.all(x <= self.params["upper"] + tol))
        return bool(np.linalg.norm(x - self.params["center"]) <= self.params["radius"] * (1 + tol) + tol)

    def describe(self):
        out = {"kind": self.kind}
        for k, v in self.params.items():
            out[k] = v.tolist() if isinstance(v, np.ndarray) else v
        return out

    def __repr__(self):
        return f"FeasibleSet({self.kind!r})"


def whole_space():
    return FeasibleSet("whole_space")


def box(lower, upper, n=None):
    """Box ``lower <= x <= upper``; scalars are broadcast to length ``n``."""
    lo = np.asarray(lower, dtype=float)
    hi = np.asarray(upper, dtype=float)
    if n is not None:
        lo = np.broadcast_to(lo, (n,)).copy()
        hi = np.broadcast_to(hi, (n,)).copy()
    if np.any(lo > hi):
        raise ValueError("box needs lower <= upper componentwise")
    return FeasibleSet("box", lower=lo, upper=hi)


def ball(center, radius, n=None):
    c = np.asarray(center, dtype=float)
    if n is not None:
        c = np.broadcast_to(c, (n,)).copy()
    if not radius > 0:
        raise ValueError("ball radius must be positive")
    return FeasibleSet("ball", center=c, radius=float(radius))
