"""
Quantumness of channels
=======================

``quantumness`` maximises S(Omega Gamma rho || Gamma Omega rho) over pure
input states and separately maximises its two pieces: the generating power
S(Omega Gamma rho || Gamma Omega Gamma rho) and the distinguishing power
S(Gamma Omega Gamma rho || Gamma Omega rho).
"""

import numpy as np

from opq.channels import Einselection, amplitude_damping, bit_flip, discord_map, hadamard
from opq.optimizer import OptimizerConfig
from opq.quantumness import decomposition_terms, hadamard_sandwich, integrand, quantumness

cfg = OptimizerConfig(starts=4, seed=0)
g1 = Einselection.full(2)
g2 = Einselection.full([2, 2])

# %%
# Channels that commute with dephasing have zero quantumness.
for ch in (amplitude_damping(0.3), bit_flip(0.2)):
    print(f"W({ch.name}) = {float(quantumness(ch, g1, cfg).w_value):.3e}")

# %%
# The discord-generating map reaches W = 1, all of it generating power.
rep = quantumness(discord_map(), g2, cfg)
print(f"W(1 x Omega_B) = {float(rep.w_value):.10f}")
print("witness amplitudes:", np.round(rep.witness_state, 4))
dist, gen = decomposition_terms(discord_map(), g2, rep.witness_state)
print(f"at the witness: distinguishing {float(dist):.2e}, generating {float(gen):.10f}")

# %%
# Hadamard has infinite quantumness; |+> is a witness.
print("integrand(H, |+>) =", repr(integrand(hadamard(), g1, np.array([1, 1]) / np.sqrt(2))))

# %%
# Sandwiching amplitude damping between Hadamards gives a finite value that
# rises from 0 (gamma = 0) to 1 (gamma = 1).
for gamma in (0.0, 0.25, 0.5, 0.75, 1.0):
    w = float(quantumness(hadamard_sandwich(gamma), g1, cfg).w_value)
    print(f"W(H Xi_{gamma:<4} H) = {w:.9f}")
