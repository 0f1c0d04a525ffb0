"""Quantumness of quantum operations: the relative-entropy commutator measure,
its generating/distinguishing split, discord and dense-coding capacities."""

__version__ = "0.1.0"

from opq.channels import (  # noqa: E402
    Einselection,
    QuantumChannel,
    amplitude_damping,
    apply,
    classical_channel,
    classify_unitary,
    cnot,
    compose,
    depolarizing,
    discord_map,
    hadamard,
    pauli_channel,
    rotated_cnot,
    tensor_channels,
    unitary_channel,
)
from opq.entropy import (  # noqa: E402
    ExtendedNonNegative,
    conditional_entropy,
    discord_min,
    q_g,
    relative_entropy,
    von_neumann,
    zurek_discord,
)
from opq.optimizer import OptimizerConfig, maximize  # noqa: E402
from opq.protocols import (  # noqa: E402
    dense_coding_sweep,
    discord_capacity_gap,
    ppt_min_eigenvalue,
    sdc_capacity,
)
from opq.quantumness import (  # noqa: E402
    decomposition_terms,
    depolarized_rotated_cnot,
    hadamard_sandwich,
    integrand,
    quantumness,
    regularized_ratio,
    unitary_quantumness,
)
