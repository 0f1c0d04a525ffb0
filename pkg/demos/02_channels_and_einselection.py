"""
Channels, composition and einselection
======================================

Channels are Kraus lists. Composition ``compose(a, b)`` applies ``b`` first,
and an :class:`~opq.channels.Einselection` describes which tensor factors are
dephased and in which basis.
"""

import numpy as np

from opq.channels import (
    CLASSICAL,
    H_GATE,
    ROTATED_CNOT_GATE,
    Einselection,
    apply,
    classify_unitary,
    compose,
    depolarizing,
    discord_map,
    rotated_cnot,
    same_action,
)
from opq.states import classical_state, random_mixed

# %%
# Full dephasing of a qubit erases coherences: |+><+| becomes I/2.
gamma = Einselection.full(2)
plus = np.full((2, 2), 0.5)
print("Gamma(|+><+|) =\n", gamma(plus).real)

# %%
# The discord-generating map acts as the identity on A and as
# {|0><0|, |+><1|} on B. Fed the classical state (|00><00| + |11><11|) / 2 it
# produces a state with coherence on B.
sigma_c = classical_state({0: 0.5, 3: 0.5}, [2, 2])
out = apply(discord_map(), sigma_c)
print("1 x Omega_B (sigma_c) =\n", np.round(out.real, 3))

# %%
# The depolarizing channel is realised with Weyl operators. Its action agrees
# with the affine form mu * rho + (1 - mu) I / d.
lam = depolarizing(4, 0.7, dims=[2, 2])
rho = random_mixed(4, seed=3)
affine = 0.7 * rho + 0.3 * np.eye(4) / 4
print("depolarizing vs affine form:", np.max(np.abs(apply(lam, rho) - affine)))

# %%
# The rotated CNOT conjugates the control by H. It sends
# (|0-> + |1+>) / sqrt(2) to the basis state |10>.
minus, plus_v = np.array([1, -1]) / np.sqrt(2), np.array([1, 1]) / np.sqrt(2)
psi = (np.kron([1, 0], minus) + np.kron([0, 1], plus_v)) / np.sqrt(2)
print("rotated CNOT |Psi> =", np.round(ROTATED_CNOT_GATE @ psi, 12).real)

# %%
# Whether a unitary is classical depends on the einselected basis. In the
# computational basis the rotated CNOT is nonclassical. In the basis
# {|+>, |->} on the control it is an ordinary CNOT.
print("computational basis:", classify_unitary(ROTATED_CNOT_GATE, Einselection.full([2, 2])))
rotated = Einselection.full([2, 2], bases={0: H_GATE})
print("|+-> basis on control:", classify_unitary(ROTATED_CNOT_GATE, rotated))
assert classify_unitary(ROTATED_CNOT_GATE, rotated) == CLASSICAL

# %%
# Composition order: depolarizing after the rotated CNOT.
both = compose(lam, rotated_cnot())
stepwise = apply(lam, apply(rotated_cnot(), rho))
print("compose matches stepwise:", np.allclose(apply(both, rho), stepwise))
print("dephasing is idempotent:", same_action(compose(gamma.as_channel(), gamma.as_channel()), gamma.as_channel()))
