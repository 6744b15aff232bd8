"""
Auditing a trace with interpolation conditions
==============================================

A list of ``(x, f(x), grad f(x))`` triplets comes from some convex
``L``-smooth function exactly when every ordered pair satisfies the
interpolation inequality.  Exact-oracle traces pass; tampered ones
usually do not.
"""

import numpy as np

from intermethods import NoisePolicy, interpolation_check, istm_run, worst_case_function

f = worst_case_function(100)
tr = istm_run(f, NoisePolicy("exact"), np.zeros(f.n), 300, a=2.0, record_triplets=True)
print("clean trace:", interpolation_check(tr.triplets, f.L, tol=1e-8))
print("checked at L/2:", interpolation_check(tr.triplets, f.L / 2))

# lower one function value by 1%
for i in (2, 150):
    bad = list(tr.triplets)
    x, fv, g = bad[i]
    bad[i] = (x, fv - 0.01 * abs(fv), g)
    res = interpolation_check(bad, f.L, tol=1e-8)
    print(f"f[{i}] lowered 1%: passed={res.passed} worst={res.worst_violation:.2e} "
          f"witness={res.witness}")

# early iterates keep some slack, so a small drop there can still be
# consistent with a smooth convex function
