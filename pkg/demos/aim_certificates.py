"""
AIM and its computable certificates
===================================

AIM needs no smoothness constant: it doubles ``L_k`` until a descent test
passes.  The trace carries two upper bounds on the gap that can be
evaluated without knowing ``f*``.
"""

import numpy as np

from intermethods import NoisePolicy, aim_run, box, worst_case_function

f = worst_case_function(100)
x0 = np.zeros(f.n)

for eps in (0.0, 0.9, 0.99):
    tr = aim_run(f, NoisePolicy("random_sphere", eps, seed=0), x0, 500, c_hat=1000.0)
    gap = tr.column("f_gap")
    e1, e2 = tr.column("bound_est1"), tr.column("bound_est2")
    print(f"eps={eps:4.2f}  final gap {gap[-1]:.3e}  est1 {e1[-1]:.3e}  est2 {e2[-1]:.3e}  "
          f"L_k {tr.final['L_k']:g}  doublings {tr.meta['doublings']}")

# the same run restricted to a box; every iterate stays feasible
Q = box(0.0, 0.5, f.n)
tr = aim_run(f, NoisePolicy("random_sphere", 0.5, seed=0), x0, 300, Q=Q, keep_points=True)
print("\nbox [0, 0.5]: all iterates feasible:", all(Q.contains(y) for y in tr.points))
