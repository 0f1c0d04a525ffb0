"""Superdense coding capacity, discord as a capacity gap, and the PPT boundary."""

import math
from dataclasses import astuple, dataclass, fields

import numpy as np

from opq.channels import Einselection, apply, commutes_with, depolarizing
from opq.entropy import conditional_entropy, zurek_discord
from opq.numkernel import partial_transpose
from opq.states import BipartiteDims, max_entangled, pure_to_density


def sdc_capacity(rho, dims):
    """Raw dense-coding capacity ``log2 d_A - S(A|B)``.

    The value is not clamped; the operational capacity is
    ``max(F, log2 d_A)`` (see :func:`operational_capacity`).
    """
    dims = BipartiteDims.coerce(dims)
    return math.log2(dims.d_A) - conditional_entropy(rho, dims)


def operational_capacity(rho, dims):
    dims = BipartiteDims.coerce(dims)
    return max(sdc_capacity(rho, dims), math.log2(dims.d_A))


@dataclass(frozen=True)
class CapacityGap:
    q_z: float
    f_quantum: float
    f_classical: float

    @property
    def capacity_difference(self):
        return self.f_quantum - self.f_classical

    @property
    def residual(self):
        return abs(self.q_z - self.capacity_difference)


def discord_capacity_gap(ch, d, gamma_b=None):
    """Both sides of the discord/capacity identity for ``Omega(|Phi_d><Phi_d|)``.

    Args:
        ch: channel on ``d x d`` commuting with the one-sided dephasing.
        d: local dimension.
        gamma_b: one-sided einselection on B; computational basis by default.

    Raises:
        ValueError: if ``ch`` does not commute with ``gamma_b``.
    """
    dims = BipartiteDims(d, d)
    gamma_b = gamma_b or Einselection.on(dims.dims, 1)
    if ch.dim != d * d:
        raise ValueError(f"channel dimension {ch.dim} does not match {d}x{d}")
    if not commutes_with(ch, gamma_b):
        raise ValueError("channel does not commute with the einselection; the identity does not apply")
    phi = pure_to_density(max_entangled(d))
    rho_q = apply(ch, phi)
    rho_c = apply(ch, gamma_b(phi))
    return CapacityGap(
        q_z=zurek_discord(rho_q, dims, gamma_b),
        f_quantum=sdc_capacity(rho_q, dims),
        f_classical=sdc_capacity(rho_c, dims),
    )


def ppt_min_eigenvalue(rho, dims):
    """Smallest eigenvalue of the partial transpose on B (two qubits only)."""
    dims = BipartiteDims.coerce(dims)
    if (dims.d_A, dims.d_B) != (2, 2):
        raise ValueError("the PPT test is conclusive for two qubits only")
    pt = partial_transpose(rho, dims.dims, 1)
    return float(np.linalg.eigvalsh(0.5 * (pt + pt.conj().T))[0])


def isotropic_state(mu, d=2):
    """``Lambda_mu(|Phi_d><Phi_d|)``."""
    return apply(depolarizing(d * d, mu, dims=[d, d]), pure_to_density(max_entangled(d)))


def bisect_root(f, lo, hi, tol=1e-9, max_iter=200):
    """Root of a continuous ``f`` with a sign change on ``[lo, hi]``."""
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0:
        return lo
    if f_hi == 0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise ValueError("no sign change on the bracket")
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def entanglement_threshold(d=2, tol=1e-10):
    """``mu`` at which the depolarised Bell state stops being entangled."""
    return bisect_root(lambda mu: ppt_min_eigenvalue(isotropic_state(mu, d), [d, d]), 0.0, 1.0, tol)


@dataclass(frozen=True)
class SweepRow:
    mu: float
    F_q: float
    F_c: float
    discord_gap: float
    q_z: float
    ppt_min_eigenvalue: float
    F_q_operational: float
    F_c_operational: float

    @classmethod
    def header(cls):
        return [f.name for f in fields(cls)]

    def values(self):
        return astuple(self)


def dense_coding_row(mu, d=2):
    dims = BipartiteDims(d, d)
    lam = depolarizing(d * d, mu, dims=dims.dims)
    gamma_b = Einselection.on(dims.dims, 1)
    phi = pure_to_density(max_entangled(d))
    rho_q = apply(lam, phi)
    rho_c = apply(lam, gamma_b(phi))
    f_q = sdc_capacity(rho_q, dims)
    f_c = sdc_capacity(rho_c, dims)
    ppt = ppt_min_eigenvalue(rho_q, dims) if d == 2 else float("nan")
    return SweepRow(
        mu=float(mu),
        F_q=f_q,
        F_c=f_c,
        discord_gap=f_q - f_c,
        q_z=zurek_discord(rho_q, dims, gamma_b),
        ppt_min_eigenvalue=ppt,
        F_q_operational=max(f_q, math.log2(d)),
        F_c_operational=max(f_c, math.log2(d)),
    )


def dense_coding_sweep(grid, d=2):
    """One :class:`SweepRow` per ``mu``, in ascending order of ``mu``."""
    grid = sorted(float(m) for m in grid)
    if grid and (grid[0] < 0 or grid[-1] > 1):
        raise ValueError("mu grid must lie in [0, 1]")
    return [dense_coding_row(mu, d) for mu in grid]


def grid(start, stop, step):
    """Inclusive arithmetic grid, robust to floating-point accumulation."""
    if step <= 0:
        raise ValueError("grid step must be positive")
    n = int(math.floor((stop - start) / step + 1e-9))
    return [round(start + k * step, 12) for k in range(n + 1)]
