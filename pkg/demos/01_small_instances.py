"""Walk through the two small hand-checkable formulas.

Run with ``python3 demos/01_small_instances.py``.
"""

from cnfmoments import (
    CnfFormula,
    basic_bound,
    enumerate_distribution,
    moments,
    parse_dimacs,
    poly_coefficients,
)
from cnfmoments.cnf import assignment_to_bits
from cnfmoments.oracle import iter_solutions

# %% a three-variable formula
F = parse_dimacs("p cnf 3 3\n1 -2 0\n-1 -2 -3 0\n2 3 0\n")
p = poly_coefficients(F)
print("constant term:", p.constant)
print("linear:", {s: str(c) for s, c in p.linear.items()})
print("quadratic:", {k: str(c) for k, c in p.quadratic.items()})
print("cubic:", {k: str(c) for k, c in p.cubic.items()})

mom = moments(F)
print(f"E(u)={mom.mean}  Var(u)={mom.variance}  basic bound={basic_bound(mom)}")
d = enumerate_distribution(F)
print("histogram of u:", d.counts, "-> solutions:", d.counts[0])
# the basic bound is tight here: v0 equals 3/8 as well

# %% a four-variable formula with a single solution
rows = [
    [-1, 0, 1, -1], [1, 0, -1, 1], [1, 1, 0, 0], [-1, -1, 0, 0],
    [0, -1, -1, 0], [0, -1, 1, -1], [-1, 1, 0, -1], [0, 1, 0, 1],
]
F_ex = CnfFormula.from_adjacency(rows)
mom = moments(F_ex)
b = basic_bound(mom)
print(f"\nE(u)={mom.mean}  Var(u)={mom.variance}  basic bound={b} -> at most {float(16 * b):.3f} solutions")
print("actual solutions:", [assignment_to_bits(x) for x in iter_solutions(F_ex)])
