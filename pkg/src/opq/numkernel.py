"""Dense complex linear algebra for small composite systems.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Composite indices
are row-major: factor 0 is the most significant digit, matching ``np.kron``.
"""

from dataclasses import dataclass

import numpy as np

from opq import config


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues sorted descending; eigenvectors as the columns of a unitary."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self):
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m):
    """Coerce to a finite 2-D complex array."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return arr


def dagger(m):
    return np.conj(np.transpose(m))


def tensor(*ops):
    """Kronecker product of one or more matrices (or vectors)."""
    if not ops:
        raise ValueError("tensor needs at least one operand")
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def is_hermitian(m, atol=None):
    atol = config.TOL.validation if atol is None else atol
    m = np.asarray(m)
    return m.shape[0] == m.shape[1] and np.allclose(m, dagger(m), rtol=0, atol=atol)


def is_unitary(u, atol=None):
    atol = config.TOL.validation if atol is None else atol
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return np.allclose(dagger(u) @ u, np.eye(u.shape[0]), rtol=0, atol=atol)


def partial_trace(m, dims, keep):
    """Trace out every factor not listed in ``keep``.

    Args:
        m: square matrix on the composite space.
        dims: factor dimensions, factor 0 most significant.
        keep: indices of the factors to keep (order is normalised to ascending).

    Returns:
        The reduced matrix on the kept factors.
    """
    m = np.asarray(m, dtype=complex)
    dims = [int(d) for d in dims]
    total = int(np.prod(dims))
    if m.ndim != 2 or m.shape != (total, total):
        raise ValueError(f"matrix shape {m.shape} does not match dims {dims}")
    if isinstance(keep, (int, np.integer)):
        keep = [keep]
    keep = sorted(set(int(k) for k in keep))
    n = len(dims)
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep {keep} out of range for {n} factors")

    # einsum subscripts: row labels 0..n-1, column labels n..2n-1; traced
    # factors share their row label.
    row = list(range(n))
    col = [k + n if k in keep else k for k in range(n)]
    out = [k for k in keep] + [k + n for k in keep]
    reshaped = m.reshape(dims + dims)
    reduced = np.einsum(reshaped, row + col, out)
    kept_dim = int(np.prod([dims[k] for k in keep])) if keep else 1
    return reduced.reshape(kept_dim, kept_dim)


def partial_transpose(m, dims, factor):
    """Transpose the indices of one tensor factor."""
    m = np.asarray(m, dtype=complex)
    dims = [int(d) for d in dims]
    n = len(dims)
    t = m.reshape(dims + dims)
    axes = list(range(2 * n))
    axes[factor], axes[factor + n] = axes[factor + n], axes[factor]
    total = int(np.prod(dims))
    return t.transpose(axes).reshape(total, total)


def _phase_normalise(v, atol):
    idx = np.flatnonzero(np.abs(v) > atol)
    if idx.size == 0:
        return v
    first = v[idx[0]]
    return v * (abs(first) / first)


def hermitian_eigen(m):
    """Eigendecomposition of a Hermitian matrix with a deterministic ordering.

    Eigenvalues come out descending. Within a tie (eigenvalues equal up to
    ``eigen_tie``) vectors are phase-normalised so their first non-negligible
    entry is real positive and then ordered lexicographically by entries.
    """
    tol = config.TOL
    m = as_matrix(m)
    if not is_hermitian(m, tol.validation):
        raise ValueError("hermitian_eigen requires a Hermitian matrix")
    h = 0.5 * (m + dagger(m))
    vals, vecs = np.linalg.eigh(h)
    n = vals.size
    vecs = np.column_stack([_phase_normalise(vecs[:, k], tol.eigen_tie) for k in range(n)])

    def key(k):
        v = np.round(vecs[:, k], 12)
        flat = []
        for z in v:
            flat.extend((-z.real, -z.imag))
        return flat

    order = list(np.argsort(-vals, kind="stable"))
    # group ties, then sort each group by entries
    result = []
    i = 0
    while i < n:
        j = i + 1
        while j < n and abs(vals[order[i]] - vals[order[j]]) <= tol.eigen_tie:
            j += 1
        result.extend(sorted(order[i:j], key=key))
        i = j
    return EigenDecomposition(vals[result].copy(), vecs[:, result].copy())


def matrix_log2_on_support(m, zero_tol=None):
    """``V diag(f(lambda)) V^dagger`` with ``f = log2`` above ``zero_tol`` and 0 below.

    Kernel directions map to 0; callers decide what a kernel means.
    """
    zero_tol = config.TOL.zero_tol if zero_tol is None else zero_tol
    dec = hermitian_eigen(m)
    lam = dec.eigenvalues
    if lam.min() < -max(zero_tol, config.TOL.validation):
        raise ValueError(f"matrix has negative eigenvalue {lam.min():.3e}")
    f = np.zeros_like(lam)
    pos = lam > zero_tol
    f[pos] = np.log2(lam[pos])
    v = dec.eigenvectors
    return (v * f) @ dagger(v)


def spectral_function(m, func):
    """Apply a scalar function to the spectrum of a Hermitian matrix."""
    dec = hermitian_eigen(m)
    v = dec.eigenvectors
    return (v * func(dec.eigenvalues)) @ dagger(v)
