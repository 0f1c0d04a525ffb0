"""Quantumness of an operation and its generating/distinguishing split.

For a channel ``Omega`` and dephasing ``Gamma`` the integrand at ``rho`` is

    S( Omega(Gamma(rho)) || Gamma(Omega(rho)) )

and it splits exactly into

    distinguishing = S( Gamma(Omega(Gamma(rho))) || Gamma(Omega(rho)) )
    generating     = S( Omega(Gamma(rho))        || Gamma(Omega(Gamma(rho))) )

The quantumness ``W`` is the supremum of the integrand over states; pure
states suffice, so the search runs over normalised complex vectors.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from opq import config
from opq.channels import (
    CLASSICAL,
    Einselection,
    apply,
    classify_unitary,
    compose,
    depolarizing,
    unitary_channel,
)
from opq.entropy import ExtendedNonNegative, relative_entropy
from opq.numkernel import dagger, is_unitary
from opq.optimizer import (
    OptimizerConfig,
    default_state_candidates,
    maximize,
    params_to_pure_state,
)


def _check(ch, gamma, rho=None):
    if ch.dim != gamma.dim:
        raise ValueError(f"channel dimension {ch.dim} does not match einselection dims {list(gamma.dims)}")
    if rho is not None and np.shape(rho) != (ch.dim, ch.dim):
        raise ValueError(f"state of shape {np.shape(rho)} does not fit dimension {ch.dim}")


def _as_density(state):
    state = np.asarray(state, dtype=complex)
    return np.outer(state, state.conj()) if state.ndim == 1 else state


def integrand(ch, gamma, rho):
    """``S(Omega o Gamma (rho) || Gamma o Omega (rho))``.

    ``rho`` may be a density matrix or a state vector.
    """
    rho = _as_density(rho)
    _check(ch, gamma, rho)
    return relative_entropy(apply(ch, gamma(rho)), gamma(apply(ch, rho)))


def decomposition_terms(ch, gamma, rho):
    """Return ``(distinguishing, generating)`` at ``rho``; they sum to the integrand."""
    rho = _as_density(rho)
    _check(ch, gamma, rho)
    out_classical_in = apply(ch, gamma(rho))
    both = gamma(out_classical_in)
    dephased_out = gamma(apply(ch, rho))
    return (
        relative_entropy(both, dephased_out),
        relative_entropy(out_classical_in, both),
    )


def distinguishing_term(ch, gamma, rho):
    rho = _as_density(rho)
    _check(ch, gamma, rho)
    return relative_entropy(gamma(apply(ch, gamma(rho))), gamma(apply(ch, rho)))


def generating_term(ch, gamma, rho):
    rho = _as_density(rho)
    _check(ch, gamma, rho)
    out = apply(ch, gamma(rho))
    return relative_entropy(out, gamma(out))


@dataclass
class Maximum:
    """Best value found for one objective, with the pure state achieving it."""

    value: ExtendedNonNegative
    witness: np.ndarray
    result: object = None

    @property
    def converged(self):
        return self.result is None or self.result.converged


@dataclass
class QuantumnessReport:
    w_value: ExtendedNonNegative
    witness_state: np.ndarray
    generating_power_max: Maximum
    distinguishing_power_max: Maximum
    integrand_search: object = None
    shortcut: str = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def converged(self):
        parts = [self.generating_power_max, self.distinguishing_power_max]
        ok = all(p.converged for p in parts)
        if self.integrand_search is not None:
            ok = ok and self.integrand_search.converged
        return ok

    @property
    def dominant(self):
        g, d = float(self.generating_power_max.value), float(self.distinguishing_power_max.value)
        return "generating" if g >= d else "distinguishing"


def _maximize_over_states(objective, d, cfg):
    def f(x):
        try:
            psi = params_to_pure_state(x, d)
        except ValueError:
            return -math.inf
        return float(objective(np.outer(psi, psi.conj())))

    res = maximize(f, 2 * d, cfg)
    psi = params_to_pure_state(res.best_parameters, d)
    value = objective(np.outer(psi, psi.conj()))
    return Maximum(value, psi, res)


def _state_config(cfg, d):
    cfg = cfg or OptimizerConfig()
    return cfg.with_candidates(default_state_candidates(d) + list(cfg.include_seeded_candidates))


def maximize_generating(ch, gamma, config=None):
    """Maximum generating power, i.e. ``W(Omega o Gamma)``."""
    _check(ch, gamma)
    return _maximize_over_states(lambda r: generating_term(ch, gamma, r), ch.dim, _state_config(config, ch.dim))


def maximize_distinguishing(ch, gamma, config=None):
    """Maximum distinguishing power, i.e. ``W(Gamma o Omega)``."""
    _check(ch, gamma)
    return _maximize_over_states(lambda r: distinguishing_term(ch, gamma, r), ch.dim, _state_config(config, ch.dim))


def quantumness(ch, gamma, config=None):
    """Numerical lower bound on ``W`` together with both maximal powers.

    Unitary channels under full einselection short-circuit to 0 or infinity.
    Otherwise three searches run: the integrand itself, and each term of the
    split separately. The reported ``W`` is the best integrand value seen,
    including the integrand evaluated at the two term witnesses.
    """
    _check(ch, gamma)
    full = len(gamma.dephased) == len(gamma.dims)
    if full and ch.is_unitary():
        return _unitary_report(ch, gamma)

    cfg = _state_config(config, ch.dim)
    d = ch.dim
    gen = _maximize_over_states(lambda r: generating_term(ch, gamma, r), d, cfg)
    dist = _maximize_over_states(lambda r: distinguishing_term(ch, gamma, r), d, cfg)
    if dist.value.is_infinite:
        w = Maximum(integrand(ch, gamma, dist.witness), dist.witness)
        return QuantumnessReport(w.value, w.witness, gen, dist, None, "infinite-distinguishing")
    whole = _maximize_over_states(lambda r: integrand(ch, gamma, r), d, cfg)
    best_value, best_state = whole.value, whole.witness
    for cand in (gen.witness, dist.witness):
        v = integrand(ch, gamma, cand)
        if v > best_value:
            best_value, best_state = v, cand
    return QuantumnessReport(
        w_value=best_value,
        witness_state=best_state,
        generating_power_max=gen,
        distinguishing_power_max=dist,
        integrand_search=whole.result,
        diagnostics={
            "integrand_search_best": float(whole.value),
            "starts": cfg.starts,
            "seeded_candidates": len(cfg.include_seeded_candidates),
        },
    )


def _nonclassical_witness(u, gamma):
    """A non-classical state mapped by ``u`` onto an einselected basis state."""
    w = gamma._rotation
    ue = u if w is None else dagger(w) @ u @ w
    tol = config.TOL.unitary_entry
    for j in range(ue.shape[0]):
        row = ue[j]
        if np.count_nonzero(np.abs(row) > tol) > 1:
            phi = row.conj()
            return phi if w is None else w @ phi
    raise ValueError("unitary is a phase-decorated permutation; no witness exists")


def unitary_quantumness(u, gamma):
    """0 for phase-decorated permutations of the einselected basis, else infinite.

    For the infinite case the witness is the preimage ``U^dagger |j>`` of an
    einselected basis state that is itself not classical; the integrand is
    infinite there.
    """
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u):
        raise ValueError("unitary_quantumness requires a unitary matrix")
    if classify_unitary(u, gamma) == CLASSICAL:
        return ExtendedNonNegative(0.0), None
    psi = _nonclassical_witness(u, gamma)
    value = integrand(unitary_channel(u, dims=gamma.dims), gamma, psi)
    if not value.is_infinite:
        raise RuntimeError("witness state did not produce an infinite integrand")
    return ExtendedNonNegative.infinite(value.witness), psi


def _unitary_report(ch, gamma):
    u = ch.kraus[0]
    value, psi = unitary_quantumness(u, gamma)
    if psi is None:
        psi = np.eye(ch.dim, dtype=complex)[0]
    dist, gen = decomposition_terms(ch, gamma, psi)
    return QuantumnessReport(
        w_value=value,
        witness_state=psi,
        generating_power_max=Maximum(gen, psi),
        distinguishing_power_max=Maximum(dist if value.is_infinite else ExtendedNonNegative(0.0), psi),
        shortcut="unitary",
    )


@dataclass
class RatioReport:
    schedule: list
    w_first: list
    w_second: list
    ratios: list
    extrapolated: float
    monotone: bool
    converged: bool


def regularized_ratio(u1, u2, gamma, mu_schedule=(0.9, 0.99, 0.999), config=None, rtol=0.05):
    """Compare two infinite-quantumness unitaries through depolarising noise.

    Computes ``W(Lambda_mu o U_i)`` along ``mu_schedule`` and the ratio
    sequence. The limit ``mu -> 1`` is estimated by linear (Richardson)
    extrapolation in ``1 - mu`` over the last two points. ``converged`` is
    set when the last two ratios agree to ``rtol``.
    """
    schedule = [float(m) for m in mu_schedule]
    if any(m >= 1.0 or m < 0.0 for m in schedule):
        raise ValueError("mu schedule must lie in [0, 1)")
    u1 = np.asarray(u1, dtype=complex)
    u2 = np.asarray(u2, dtype=complex)
    for u in (u1, u2):
        if classify_unitary(u, gamma) == CLASSICAL:
            raise ValueError("both unitaries must be nonclassical; the ratio is degenerate otherwise")
    d = gamma.dim
    w1, w2, ratios = [], [], []
    for mu in schedule:
        lam = depolarizing(d, mu, dims=list(gamma.dims))
        a = quantumness(compose(lam, unitary_channel(u1, dims=gamma.dims)), gamma, config)
        b = quantumness(compose(lam, unitary_channel(u2, dims=gamma.dims)), gamma, config)
        w1.append(float(a.w_value))
        w2.append(float(b.w_value))
        ratios.append(float(a.w_value) / float(b.w_value))
    if len(ratios) >= 2:
        h1, h2 = 1 - schedule[-2], 1 - schedule[-1]
        r1, r2 = ratios[-2], ratios[-1]
        extrapolated = (h1 * r2 - h2 * r1) / (h1 - h2)
        converged = abs(r2 - r1) <= rtol * abs(r2)
    else:
        extrapolated, converged = ratios[-1], False
    diffs = np.diff(ratios)
    monotone = bool(np.all(diffs >= -1e-12) or np.all(diffs <= 1e-12))
    return RatioReport(schedule, w1, w2, ratios, extrapolated, monotone, converged)


@dataclass
class PowerRow:
    parameter: float
    w: float
    generating_max: float
    distinguishing_max: float
    dominant: str
    witness: np.ndarray
    generating_witness: np.ndarray
    distinguishing_witness: np.ndarray


def power_sweep(factory, grid, gamma, config=None):
    """Evaluate :func:`quantumness` for ``factory(p)`` at each grid point."""
    rows = []
    for p in grid:
        rep = quantumness(factory(float(p)), gamma, config)
        rows.append(
            PowerRow(
                float(p),
                float(rep.w_value),
                float(rep.generating_power_max.value),
                float(rep.distinguishing_power_max.value),
                rep.dominant,
                rep.witness_state,
                rep.generating_power_max.witness,
                rep.distinguishing_power_max.witness,
            )
        )
    return rows


def locate_crossover(factory, lo, hi, gamma, config=None, tol=1e-4):
    """Bisect for the parameter where maximal generating and distinguishing powers meet.

    Requires the sign of ``generating_max - distinguishing_max`` to differ at
    ``lo`` and ``hi``. Returns ``(parameter, generating_max, distinguishing_max)``
    at the final midpoint.
    """

    def gap(p):
        ch = factory(p)
        g = maximize_generating(ch, gamma, config).value
        d = maximize_distinguishing(ch, gamma, config).value
        return float(g) - float(d), float(g), float(d)

    f_lo = gap(lo)[0]
    f_hi = gap(hi)[0]
    if f_lo * f_hi > 0:
        raise ValueError("generating and distinguishing maxima do not cross on the bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = gap(mid)[0]
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    mid = 0.5 * (lo + hi)
    _, g, d = gap(mid)
    return mid, g, d


def depolarized_rotated_cnot(mu):
    """``Lambda_mu o (H x 1) CNOT (H x 1)`` on two qubits."""
    from opq.channels import rotated_cnot

    return compose(depolarizing(4, mu, dims=[2, 2]), rotated_cnot())


def hadamard_sandwich(gamma_damping):
    """``H o Xi_gamma o H`` with amplitude damping in the middle."""
    from opq.channels import amplitude_damping, compose_all, hadamard

    return compose_all(hadamard(), amplitude_damping(gamma_damping), hadamard())

