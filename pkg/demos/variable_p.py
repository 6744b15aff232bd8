"""
Letting AIM choose its own acceleration
=======================================

The variable-``p`` variant starts fully accelerated and lowers ``p`` in
steps of ``eta`` whenever its running estimate would increase, trading
speed for robustness when the gradient noise is strong.
"""

import numpy as np

from intermethods import NoisePolicy, aim_run, aimvp_run, worst_case_function

f = worst_case_function(100)
x0 = np.zeros(f.n)

for eps in (0.0, 0.9, 0.99):
    vp = aimvp_run(f, NoisePolicy("random_sphere", eps, seed=0), x0, 500, eta=0.05)
    fixed = aim_run(f, NoisePolicy("random_sphere", eps, seed=0), x0, 500, p=2.0)
    p = vp.column("p_k")
    drops = np.nonzero(np.diff(p))[0] + 1
    print(f"eps={eps:4.2f}  final p {p[-1]:.2f}  p changed at k={drops.tolist()}  "
          f"gap (variable p) {vp.final['f_gap']:.3e}  gap (p=2) {fixed.final['f_gap']:.3e}")
