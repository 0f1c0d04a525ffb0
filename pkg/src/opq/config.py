"""Central tolerance record.

Every numerical threshold used by the package lives here. The record can be
overridden from a JSON file named by the ``OPQ_TOLERANCE_FILE`` environment
variable; unknown keys are rejected.
"""

import dataclasses
import json
import os
from dataclasses import dataclass

TOLERANCE_ENV_VAR = "OPQ_TOLERANCE_FILE"


@dataclass(frozen=True)
class Tolerances:
    # eigenvalues at or below this are treated as zero in log2 on support
    zero_tol: float = 1e-12
    # Hermiticity, trace, positivity and completeness checks
    validation: float = 1e-10
    # pure-state normalisation
    norm: float = 1e-12
    # relative entropy is infinite when sigma has an eigenvalue below
    # kernel_eigenvalue whose eigenvector carries rho-weight above kernel_weight
    kernel_eigenvalue: float = 1e-10
    kernel_weight: float = 1e-8
    # finite relative entropies in [-clamp, 0) are reported as 0
    clamp: float = 1e-9
    # unitary classification: |U_ij| within this of 0 or 1
    unitary_entry: float = 1e-10
    # commutation [Gamma, Omega] = 0 on a spanning set
    commutation: float = 1e-10
    # eigenvalue ties in hermitian_eigen ordering
    eigen_tie: float = 1e-10


def load_tolerances(path=None):
    """Build a :class:`Tolerances`, optionally overridden from a JSON file.

    Args:
        path: JSON file with a flat object of overrides. When ``None`` the
            ``OPQ_TOLERANCE_FILE`` environment variable is consulted.

    Returns:
        Tolerances: the resolved record.
    """
    if path is None:
        path = os.environ.get(TOLERANCE_ENV_VAR)
    if not path:
        return Tolerances()
    with open(path, encoding="utf-8") as fh:
        overrides = json.load(fh)
    known = {f.name for f in dataclasses.fields(Tolerances)}
    unknown = set(overrides) - known
    if unknown:
        raise ValueError(f"unknown tolerance keys in {path}: {sorted(unknown)}")
    values = {}
    for key, value in overrides.items():
        value = float(value)
        if not value > 0:
            raise ValueError(f"tolerance {key!r} must be positive, got {value}")
        values[key] = value
    return Tolerances(**values)


TOL = load_tolerances()


def set_tolerances(tol):
    """Replace the process-wide tolerance record."""
    global TOL
    TOL = tol


def get_tolerances():
    return TOL
