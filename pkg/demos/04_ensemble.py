"""How loose are the bounds on random formulas?  A small comparison run."""

import numpy as np

from cnfmoments import generate
from cnfmoments.compare import run_compare
from cnfmoments.generate import ensemble

instances = [(f"inst{i}", generate(spec)) for i, spec in enumerate(ensemble(60, seed=7))]
rows = [r for r in run_compare(instances) if r.exact_count]

for name in ("basic", "medium_cutoff", "cs_given_v1", "cutoff_scan"):
    ratios = np.array([float(r.values[name]) / float(r.v0) for r in rows if r.values.get(name) is not None])
    print(f"{name:<15} median bound/v0 = {np.median(ratios):7.2f}   worst = {ratios.max():9.2f}")

print("soundness violations:", sum(len(r.violations) for r in rows))
