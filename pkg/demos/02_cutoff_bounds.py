"""Sharpening the basic bound with a cutoff on the frustration count.

Knowing a little about the low end of the distribution of u (v1, or the
mass up to the cutoff) lowers the bound, and can certify UNSAT.
"""

import numpy as np

from cnfmoments import (
    CnfFormula,
    basic_bound,
    bound_report,
    cutoff_value,
    enumerate_distribution,
    medium_cutoff_bound,
    moments,
    optimized_cutoff_m1,
)

rows = [
    [-1, 0, 1, -1], [1, 0, -1, 1], [1, 1, 0, 0], [-1, -1, 0, 0],
    [0, -1, -1, 0], [0, -1, 1, -1], [-1, 1, 0, -1], [0, 1, 0, 1],
]
F_ex = CnfFormula.from_adjacency(rows)
mom, d = moments(F_ex), enumerate_distribution(F_ex)

mc = medium_cutoff_bound(mom, d.v_le(1))
print(f"medium cutoff a={mc.params.a}, M={mc.params.M}, x_app={mc.x_app}, bound~{float(mc.bound):.5f}")
opt = optimized_cutoff_m1(mom, d.v(1))
print(f"optimal a^2={opt.a_squared}, f_min={opt.f_min} (valid={opt.valid})")

# %% the cutoff bound as a function of a
for a in np.linspace(1.0, 3.0, 9):
    print(f"  a={a:.2f}  f(a)={float(cutoff_value(mom, d, a * a)):.5f}")

# %% one extra clause makes the formula unsatisfiable
F_unsat = F_ex.conjoin([1, 3])  # (a1 or a3)
mom_u, d_u = moments(F_unsat), enumerate_distribution(F_unsat)
print(f"\nbasic bound x16 = {float(16 * basic_bound(mom_u)):.3f}  (no certificate)")
opt = optimized_cutoff_m1(mom_u, d_u.v(1))
print(f"optimized bound x16 = {float(16 * opt.f_min):.3f}  -> {bound_report(F_unsat, d_u).verdict}")
