"""Quantum state constructors and validation.

States are plain arrays: a pure state is a 1-D complex vector, a density
matrix a 2-D complex array. Composite structure is carried separately as a
list of factor dimensions (``dims``). Basis labels are integers in row-major
composite order.
"""

from dataclasses import dataclass

import numpy as np

from opq import config
from opq.numkernel import dagger


@dataclass(frozen=True)
class BipartiteDims:
    d_A: int
    d_B: int

    def __post_init__(self):
        if self.d_A < 2 or self.d_B < 2:
            raise ValueError(f"bipartite dimensions must be >= 2, got {self.d_A}x{self.d_B}")

    @property
    def dims(self):
        return [self.d_A, self.d_B]

    @classmethod
    def coerce(cls, dims):
        if isinstance(dims, cls):
            return dims
        dims = list(dims)
        if len(dims) != 2:
            raise ValueError(f"expected two factor dimensions, got {dims}")
        return cls(int(dims[0]), int(dims[1]))


def check_dims(dims, total):
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims) or int(np.prod(dims)) != total:
        raise ValueError(f"dims {dims} do not multiply to {total}")
    return dims


def validate_pure(psi, atol=None):
    """Return ``psi`` as a complex vector after checking its norm."""
    atol = config.TOL.norm if atol is None else atol
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise ValueError(f"pure state must be a vector, got shape {psi.shape}")
    if not np.all(np.isfinite(psi)):
        raise ValueError("pure state has non-finite amplitudes")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > atol:
        raise ValueError(f"pure state norm is {norm!r}, expected 1")
    return psi


def validate_density(rho, atol=None):
    """Check Hermiticity, unit trace and positivity.

    Args:
        rho: candidate density matrix.
        atol: tolerance for all three checks; defaults to the central
            ``validation`` tolerance.

    Returns:
        ndarray: ``rho`` as a complex array.

    Raises:
        ValueError: if any check fails.
    """
    atol = config.TOL.validation if atol is None else atol
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise ValueError("density matrix has non-finite entries")
    if not np.allclose(rho, dagger(rho), rtol=0, atol=atol):
        raise ValueError("density matrix is not Hermitian")
    tr = np.trace(rho)
    if abs(tr - 1.0) > atol:
        raise ValueError(f"density matrix trace is {tr.real!r}, expected 1")
    lam_min = np.linalg.eigvalsh(0.5 * (rho + dagger(rho)))[0]
    if lam_min < -atol:
        raise ValueError(f"density matrix has negative eigenvalue {lam_min:.3e}")
    return rho


def is_density(rho, atol=None):
    try:
        validate_density(rho, atol)
    except ValueError:
        return False
    return True


def pure_to_density(psi):
    psi = validate_pure(psi)
    return np.outer(psi, psi.conj())


def basis_state(index, dim):
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} out of range for dimension {dim}")
    psi = np.zeros(dim, dtype=complex)
    psi[index] = 1.0
    return psi


def classical_state(p, dims):
    """Diagonal state ``sum_k p_k |k><k|`` over composite basis labels.

    Args:
        p: either a sequence of length ``prod(dims)`` or a mapping from integer
            labels to probabilities (missing labels are 0).
        dims: factor dimensions.
    """
    total = int(np.prod(dims))
    check_dims(dims, total)
    if isinstance(p, dict):
        probs = np.zeros(total)
        for label, value in p.items():
            label = int(label)
            if not 0 <= label < total:
                raise ValueError(f"basis label {label} out of range for dims {list(dims)}")
            probs[label] += float(value)
    else:
        probs = np.asarray(p, dtype=float)
        if probs.shape != (total,):
            raise ValueError(f"probability table has shape {probs.shape}, expected ({total},)")
    if np.any(probs < 0) or not np.all(np.isfinite(probs)):
        raise ValueError("probabilities must be finite and non-negative")
    if abs(probs.sum() - 1.0) > 1e-12:
        raise ValueError(f"probabilities sum to {probs.sum()!r}, expected 1")
    return np.diag(probs).astype(complex)


def max_entangled(d):
    """``|Phi_d> = sum_a |a>|a> / sqrt(d)`` on a ``d x d`` system."""
    if d < 2:
        raise ValueError(f"max_entangled needs d >= 2, got {d}")
    psi = np.zeros(d * d, dtype=complex)
    psi[np.arange(d) * (d + 1)] = 1.0 / np.sqrt(d)
    return psi


def maximally_mixed(d):
    return np.eye(d, dtype=complex) / d


def random_pure(dim, seed):
    """Haar-random pure state from normalised complex Gaussian components."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_density(dim, rank, seed):
    """Uniform mixture of ``rank`` random pure states."""
    if not 1 <= rank <= dim:
        raise ValueError(f"rank must be in [1, {dim}], got {rank}")
    rng = np.random.default_rng(seed)
    rho = np.zeros((dim, dim), dtype=complex)
    for _ in range(rank):
        v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        v /= np.linalg.norm(v)
        rho += np.outer(v, v.conj())
    return rho / rank


def random_mixed(dim, seed):
    """Full-rank state with random (non-uniform) spectrum."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ dagger(g)
    return rho / np.trace(rho).real
