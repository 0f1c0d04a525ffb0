"""
Generating versus distinguishing power
======================================

Depolarizing noise after a CNOT controlled in the |+-> basis. At weak noise
the distinguishing power dominates (it diverges as mu -> 1); at strong noise
the generating power does. The two maxima meet at mu = 2/3 where both equal
log2(3) / 2.
"""

import math

from opq.channels import Einselection
from opq.optimizer import OptimizerConfig
from opq.quantumness import depolarized_rotated_cnot, locate_crossover, power_sweep

gamma = Einselection.full([2, 2])
cfg = OptimizerConfig(starts=2, seed=0)


def generating_formula(mu):
    return 0.75 * (1 - mu) * math.log2(1 - mu) + (1 + 3 * mu) / 4 * math.log2(1 + 3 * mu)


def distinguishing_formula(mu):
    return -0.75 * math.log2(1 - mu) - 0.25 * math.log2(1 + 3 * mu)


# %%
# A coarse sweep, compared with the closed forms.
print(" mu    generating  (formula)   distinguishing (formula)  dominant")
for row in power_sweep(depolarized_rotated_cnot, [0.1, 0.3, 0.5, 0.7, 0.9], gamma, cfg):
    mu = row.parameter
    print(
        f"{mu:4.2f}  {row.generating_max:10.6f}  ({generating_formula(mu):8.6f})"
        f"  {row.distinguishing_max:12.6f}  ({distinguishing_formula(mu):8.6f})   {row.dominant}"
    )

# %%
# Bisection for the crossing point.
mu_c, g, d = locate_crossover(depolarized_rotated_cnot, 0.5, 0.8, gamma, cfg, tol=1e-4)
print(f"\ncrossover at mu = {mu_c:.5f} (2/3 = {2 / 3:.5f})")
print(f"powers there: {g:.6f} and {d:.6f}; log2(3)/2 = {math.log2(3) / 2:.6f}")
