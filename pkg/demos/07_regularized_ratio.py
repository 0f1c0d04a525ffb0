"""
Comparing two infinitely quantum unitaries
==========================================

Every non-permutation unitary has infinite quantumness. A little depolarizing
noise after each makes the values finite; their ratio as the noise vanishes
is a way to compare them.
"""

import numpy as np

from opq.channels import H_GATE, I2, ROTATED_CNOT_GATE, Einselection
from opq.optimizer import OptimizerConfig
from opq.quantumness import regularized_ratio

gamma = Einselection.full([2, 2])
cfg = OptimizerConfig(starts=2, seed=0)

rep = regularized_ratio(np.kron(H_GATE, I2), ROTATED_CNOT_GATE, gamma, (0.9, 0.99, 0.999), cfg)
print("   mu     W(H x 1)   W(rotated CNOT)   ratio")
for mu, a, b, r in zip(rep.schedule, rep.w_first, rep.w_second, rep.ratios):
    print(f"{mu:6.3f}  {a:10.5f}  {b:14.5f}  {r:9.5f}")
print(f"extrapolated ratio: {rep.extrapolated:.5f}  monotone: {rep.monotone}  converged: {rep.converged}")
