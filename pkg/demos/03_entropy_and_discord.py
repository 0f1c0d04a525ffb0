"""
Relative entropy and discord
============================

Relative entropies are returned as :class:`~opq.entropy.ExtendedNonNegative`,
a float that may be infinite and then carries a note on which kernel
direction of the second argument caught weight from the first.
"""

import numpy as np

from opq.channels import Einselection, apply, discord_map
from opq.entropy import conditional_entropy, discord_min, q_g, relative_entropy, von_neumann, zurek_discord
from opq.states import classical_state, max_entangled, pure_to_density

# %%
# Base-2 entropies.
print("S(I/2) =", von_neumann(np.eye(2) / 2))
print("S(|+><+| || I/2) =", float(relative_entropy(np.full((2, 2), 0.5), np.eye(2) / 2)))

# %%
# Disjoint supports give an infinite value with a witness.
inf = relative_entropy(np.diag([1, 0]), np.diag([0, 1]))
print(repr(inf))

# %%
# The Bell state has conditional entropy -1 and Zurek discord 1 in any basis.
bell = pure_to_density(max_entangled(2))
print("S(A|B) of Bell state:", conditional_entropy(bell, [2, 2]))
print("Zurek discord (computational basis):", zurek_discord(bell, [2, 2]))

# %%
# The einselected relative entropy of discord S(rho || Gamma rho) vanishes on
# classical states and equals 1 on |+><+|.
print("Q_g(|+><+|) =", float(q_g(np.full((2, 2), 0.5), Einselection.full(2))))

# %%
# The output of the discord-generating map on a classical input has nonzero
# discord even after minimising over the measurement basis on B.
sigma_c = classical_state({0: 0.5, 3: 0.5}, [2, 2])
rho = apply(discord_map(), sigma_c)
report = discord_min(rho, [2, 2])
print(f"Zurek discord, computational basis: {report.zurek_value:.6f}")
print(f"minimised over qubit bases:         {report.minimized_value:.6f}")
print("optimal Bloch angles (theta, phi):", np.round(report.optimal_angles, 6))
