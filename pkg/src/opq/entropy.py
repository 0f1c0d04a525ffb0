"""Entropies (base 2), extended-real relative entropy, and discord quantities."""

import math
from dataclasses import dataclass

import numpy as np

from opq import config
from opq.channels import Einselection
from opq.numkernel import dagger, partial_trace
from opq.states import BipartiteDims


class ExtendedNonNegative(float):
    """A non-negative float that may be ``+inf``; infinite values carry a witness.

    Behaves as a plain ``float`` in arithmetic and comparisons.
    """

    def __new__(cls, value, witness=None):
        value = float(value)
        if math.isnan(value):
            raise ValueError("relative entropy cannot be NaN")
        if value < 0:
            if value < -config.TOL.clamp:
                raise ValueError(f"negative relative entropy {value!r}")
            value = 0.0
        obj = super().__new__(cls, value)
        obj.witness = witness
        return obj

    @classmethod
    def infinite(cls, witness):
        return cls(math.inf, witness)

    @property
    def is_infinite(self):
        return math.isinf(self)

    def __repr__(self):
        if self.is_infinite:
            return f"Infinite({self.witness!r})"
        return f"Finite({float(self)!r})"


def _eigvalsh(rho):
    return np.linalg.eigvalsh(0.5 * (rho + dagger(rho)))


def shannon(p):
    p = np.asarray(p, dtype=float)
    p = p[p > config.TOL.zero_tol]
    return float(-np.sum(p * np.log2(p))) + 0.0


def von_neumann(rho):
    """``-Tr rho log2 rho`` with ``0 log 0 = 0``."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"von_neumann needs a square matrix, got shape {rho.shape}")
    lam = _eigvalsh(rho)
    if lam[0] < -config.TOL.validation or abs(lam.sum() - 1) > config.TOL.validation:
        raise ValueError("von_neumann needs a valid density matrix")
    s = shannon(lam)
    return min(max(s, 0.0), math.log2(rho.shape[0]))


def relative_entropy(rho, sigma):
    """Quantum relative entropy ``Tr rho (log2 rho - log2 sigma)``.

    Evaluated in the eigenbasis of ``sigma``. When an eigenvalue of ``sigma``
    falls below ``kernel_eigenvalue`` while its eigenvector carries more than
    ``kernel_weight`` of ``rho``, the result is infinite and the witness names
    that eigenvalue and the weight.

    Returns:
        ExtendedNonNegative
    """
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.shape != sigma.shape:
        raise ValueError(f"shape mismatch {rho.shape} vs {sigma.shape}")
    tol = config.TOL
    lam_s, vecs = np.linalg.eigh(0.5 * (sigma + dagger(sigma)))
    weights = np.real(np.einsum("ik,ij,jk->k", vecs.conj(), rho, vecs))
    kernel = lam_s < tol.kernel_eigenvalue
    bad = kernel & (weights > tol.kernel_weight)
    if np.any(bad):
        k = int(np.flatnonzero(bad)[np.argmax(weights[bad])])
        return ExtendedNonNegative.infinite(
            f"sigma eigenvalue {lam_s[k]:.3e} carries rho-weight {weights[k]:.6g}"
        )
    lam_r = _eigvalsh(rho)
    pos = lam_r > 0
    neg_entropy = float(np.sum(lam_r[pos] * np.log2(np.maximum(lam_r[pos], tol.zero_tol))))
    # kernel directions with negligible rho-weight keep their (floored)
    # eigenvalue so that rho == sigma cancels exactly
    cross = float(np.sum(weights * np.log2(np.maximum(lam_s, tol.zero_tol))))
    return ExtendedNonNegative(neg_entropy - cross)


def conditional_entropy(rho, dims):
    """``S(AB) - S(B)``; may be negative."""
    dims = BipartiteDims.coerce(dims)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (dims.d_A * dims.d_B,) * 2:
        raise ValueError(f"state of shape {rho.shape} does not match dims {dims.dims}")
    return von_neumann(rho) - von_neumann(partial_trace(rho, dims.dims, keep=[1]))


def q_g(rho, gamma):
    """Einselected relative entropy of discord ``S(rho || Gamma(rho))``."""
    return relative_entropy(rho, gamma(rho))


def _check_b_side(gamma, dims):
    if tuple(gamma.dims) != tuple(dims.dims) or gamma.dephased != (1,):
        raise ValueError("zurek_discord needs an einselection acting on factor B only")


def zurek_discord(rho, dims, gamma_b=None):
    """Zurek discord ``S(A|B)`` after one-sided dephasing of B minus before.

    ``gamma_b`` defaults to the computational basis on B.
    """
    dims = BipartiteDims.coerce(dims)
    if gamma_b is None:
        gamma_b = Einselection.on(dims.dims, 1)
    _check_b_side(gamma_b, dims)
    return conditional_entropy(gamma_b(rho), dims) - conditional_entropy(rho, dims)


def zurek_discord_branches(rho, dims, gamma_b=None):
    """Same quantity via measurement branches ``sum_a p_a S(rho_A^a) - S(A|B)``."""
    dims = BipartiteDims.coerce(dims)
    if gamma_b is None:
        gamma_b = Einselection.on(dims.dims, 1)
    _check_b_side(gamma_b, dims)
    basis = gamma_b.bases.get(1, np.eye(dims.d_B, dtype=complex))
    avg = 0.0
    for a in range(dims.d_B):
        proj = np.kron(np.eye(dims.d_A), np.outer(basis[:, a], basis[:, a].conj()))
        branch = proj @ rho @ proj
        p = float(np.real(np.trace(branch)))
        if p > config.TOL.zero_tol:
            avg += p * von_neumann(partial_trace(branch / p, dims.dims, keep=[0]))
    return avg - conditional_entropy(rho, dims)


def bloch_basis(theta, phi):
    """Qubit basis ``{|n>, |n_perp>}`` as the columns of a unitary."""
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    e = complex(math.cos(phi), math.sin(phi))
    return np.array([[c, -s * e.conjugate()], [s * e, c]], dtype=complex)


@dataclass(frozen=True)
class DiscordReport:
    zurek_value: float
    minimized_value: float
    optimal_measurement_basis: np.ndarray
    optimal_angles: tuple
    conditional_entropy_before: float
    conditional_entropy_after: float


def discord_min(rho, dims, optimizer_config=None):
    """Minimise Zurek discord over rank-1 projective measurements on a qubit B.

    The basis is parameterised by Bloch angles ``(theta, phi)``; the
    computational basis is always among the seeded candidates, so the result
    never exceeds the computational-basis value.
    """
    from opq.optimizer import OptimizerConfig, maximize

    dims = BipartiteDims.coerce(dims)
    if dims.d_B != 2:
        raise ValueError("discord_min supports a qubit measurement side only (d_B = 2)")
    rho = np.asarray(rho, dtype=complex)
    before = conditional_entropy(rho, dims)

    def gamma_for(x):
        return Einselection.on(dims.dims, 1, {1: bloch_basis(x[0], x[1])})

    def objective(x):
        return -(conditional_entropy(gamma_for(x)(rho), dims) - before)

    cfg = optimizer_config or OptimizerConfig(starts=8, max_iterations=400, seed=0)
    seeds = [np.array([0.0, 0.0]), np.array([math.pi / 2, 0.0]), np.array([math.pi / 2, math.pi / 2])]
    cfg = cfg.with_candidates(seeds + list(cfg.include_seeded_candidates))
    res = maximize(objective, 2, cfg)
    x = res.best_parameters
    basis = bloch_basis(x[0], x[1])
    zurek = zurek_discord(rho, dims)
    minimized = -float(res.best_value)
    after = conditional_entropy(gamma_for(x)(rho), dims)
    return DiscordReport(
        zurek_value=zurek,
        minimized_value=minimized,
        optimal_measurement_basis=basis,
        optimal_angles=(float(x[0]), float(x[1])),
        conditional_entropy_before=before,
        conditional_entropy_after=after,
    )
