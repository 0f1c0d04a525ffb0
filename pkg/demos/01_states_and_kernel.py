"""
States, tensor products and partial traces
==========================================

A first tour of the array conventions used throughout ``opq``. States are
plain numpy arrays and composite systems are described by a list of factor
dimensions, with basis labels in row-major order (``|ab> -> a * d_B + b``).
"""

import numpy as np

from opq.numkernel import hermitian_eigen, partial_trace, partial_transpose, tensor
from opq.states import classical_state, max_entangled, pure_to_density, random_density

# %%
# The maximally entangled state of two qubits puts amplitude 1/sqrt(2) on
# the labels 0 (|00>) and 3 (|11>).
phi = max_entangled(2)
print("|Phi_2> amplitudes:", np.round(phi.real, 4))

rho = pure_to_density(phi)
print("rho_AB =\n", np.round(rho.real, 3))

# %%
# Tracing out either half leaves the maximally mixed qubit.
print("rho_A =\n", np.round(partial_trace(rho, [2, 2], keep=[0]).real, 3))

# %%
# The partial transpose of the Bell projector is SWAP / 2, whose smallest
# eigenvalue -1/2 flags entanglement.
pt = partial_transpose(rho, [2, 2], factor=1)
print("spectrum of rho^T_B:", np.round(hermitian_eigen(pt).eigenvalues, 6))

# %%
# Classical states are diagonal in the product basis. A probability table can
# be given as a mapping from composite labels.
sigma_c = classical_state({0: 0.5, 3: 0.5}, [2, 2])
print("sigma_c diagonal:", np.diag(sigma_c).real)

# %%
# Tensor products follow numpy's Kronecker convention: factor 0 is the most
# significant digit of the composite label.
ket0, ket1 = np.array([1, 0]), np.array([0, 1])
print("|0> x |1> =", tensor(ket0, ket1).real)

# %%
# Seeded random states are reproducible. A rank-2 mixture on a qutrit:
mixed = random_density(3, rank=2, seed=7)
dec = hermitian_eigen(mixed)
print("random rank-2 spectrum:", np.round(dec.eigenvalues, 6))
print("reconstruction error:", np.max(np.abs(dec.reconstruct() - mixed)))
