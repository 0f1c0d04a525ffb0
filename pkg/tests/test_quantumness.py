import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from opq.channels import (
    CNOT_GATE,
    H_GATE,
    X_GATE,
    Z_GATE,
    Einselection,
    amplitude_damping,
    apply,
    classical_channel,
    compose,
    discord_map,
    hadamard,
    mix_channels,
    random_channel,
    random_stochastic,
    rotated_cnot,
    tensor_channels,
    unitary_channel,
    ROTATED_CNOT_GATE,
)
from opq.entropy import q_g
from opq.optimizer import OptimizerConfig
from opq.quantumness import (
    decomposition_terms,
    distinguishing_term,
    generating_term,
    hadamard_sandwich,
    integrand,
    maximize_generating,
    power_sweep,
    quantumness,
    regularized_ratio,
    unitary_quantumness,
)
from opq.states import classical_state, random_density, random_pure

from oracles import sandwich_oracle

seeds = st.integers(min_value=0, max_value=2**32 - 1)
FAST = OptimizerConfig(starts=3, max_iterations=400, seed=0)
G2 = Einselection.full(2)
G22 = Einselection.full([2, 2])


def random_case(seed, d):
    dims = [2, 2] if d == 4 else [d]
    ch = random_channel(d, 1 + seed % 3, seed, dims=dims)
    rho = random_density(d, 1 + seed % d, seed + 1)
    return ch, Einselection.full(dims), rho


def test_integrand_examples():
    psi = np.kron(random_pure(2, 3), [0, 1])
    assert float(integrand(discord_map(), G22, psi)) == pytest.approx(1, abs=1e-9)
    theta = classical_channel(random_stochastic(2, 1))
    assert float(integrand(theta, G2, random_density(2, 2, 5))) == pytest.approx(0, abs=1e-12)
    assert integrand(hadamard(), G2, np.array([1, 1]) / np.sqrt(2)).is_infinite


def test_integrand_dimension_mismatch():
    with pytest.raises(ValueError):
        integrand(hadamard(), G22, np.eye(2) / 2)


def test_decomposition_examples():
    rho_c = classical_state([0.3, 0.7], [2])
    dist, _ = decomposition_terms(amplitude_damping(0.4), G2, rho_c)
    assert float(dist) == 0
    dist, gen = decomposition_terms(discord_map(), G22, np.kron([0, 1], [0, 1]))
    assert float(dist) == pytest.approx(0, abs=1e-12)
    assert float(gen) == pytest.approx(1, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(seeds, st.sampled_from([2, 3, 4]))
def test_pointwise_decomposition_identity(seed, d):
    ch, gamma, rho = random_case(seed, d)
    total = integrand(ch, gamma, rho)
    dist, gen = decomposition_terms(ch, gamma, rho)
    assert abs(float(total) - (float(dist) + float(gen))) < 1e-9
    assert float(dist) == pytest.approx(float(distinguishing_term(ch, gamma, rho)), abs=1e-12)
    assert float(gen) == pytest.approx(float(generating_term(ch, gamma, rho)), abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(seeds, st.sampled_from([2, 3, 4]))
def test_p1_extremality_pointwise(seed, d):
    ch, gamma, rho = random_case(seed, d)
    lam, vecs = np.linalg.eigh(rho)
    best = max(float(integrand(ch, gamma, vecs[:, j])) for j in range(d) if lam[j] > 1e-12)
    assert float(integrand(ch, gamma, rho)) <= best + 1e-9


@settings(max_examples=200, deadline=None)
@given(seeds, st.sampled_from([2, 3]))
def test_p2_monotonicity_pointwise(seed, d):
    ch, gamma, rho = random_case(seed, d)
    theta = classical_channel(random_stochastic(d, seed + 3))
    assert float(integrand(compose(theta, ch), gamma, rho)) <= float(integrand(ch, gamma, rho)) + 1e-9
    # Omega o Theta at rho is Omega at Theta(rho), a point of Omega's own landscape
    pre = float(integrand(compose(ch, theta), gamma, rho))
    assert abs(pre - float(integrand(ch, gamma, apply(theta, rho)))) < 1e-9


@settings(max_examples=200, deadline=None)
@given(seeds, st.integers(1, 3))
def test_p3_mixtures_of_local_classical_maps(seed, n):
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(n))
    parts = [
        tensor_channels(
            classical_channel(random_stochastic(2, seed + 2 * i)),
            classical_channel(random_stochastic(2, seed + 2 * i + 1)),
        )
        for i in range(n)
    ]
    ch = mix_channels(weights, parts)
    rho = random_density(4, 1 + seed % 4, seed)
    assert float(integrand(ch, G22, rho)) <= 1e-9


@settings(max_examples=200, deadline=None)
@given(seeds, st.sampled_from([2, 3, 4]))
def test_generating_power_bound(seed, d):
    ch, gamma, rho = random_case(seed, d)
    assert float(generating_term(ch, gamma, rho)) <= math.log2(d) + 1e-9


@settings(max_examples=100, deadline=None)
@given(seeds, st.sampled_from([2, 3, 4]))
def test_classical_input_lower_bound_link(seed, d):
    ch, gamma, _ = random_case(seed, d)
    rng = np.random.default_rng(seed)
    rho_c = classical_state(rng.dirichlet(np.ones(d)), gamma.dims)
    assert abs(float(integrand(ch, gamma, rho_c)) - float(q_g(apply(ch, rho_c), gamma))) < 1e-10


def test_amplitude_damping_vanishes():
    rep = quantumness(amplitude_damping(0.3), G2, FAST)
    assert float(rep.w_value) <= 1e-8


def test_discord_map_quantumness():
    rep = quantumness(discord_map(), G22, FAST)
    assert float(rep.w_value) == pytest.approx(1, abs=1e-6)
    assert rep.dominant == "generating"
    assert float(rep.distinguishing_power_max.value) <= 1e-8
    assert float(rep.w_value) >= float(generating_term(discord_map(), G22, rep.generating_power_max.witness)) - 1e-8


def test_sandwich_reference_point():
    rep = quantumness(hadamard_sandwich(0.75), G2, FAST)
    rho = np.array([[0.75, 0.375], [0.375, 0.25]])
    assert float(rep.w_value) == pytest.approx(sandwich_oracle(0.75), abs=1e-6)
    assert float(rep.w_value) == pytest.approx(0.528, abs=1e-3)
    assert float(q_g(rho, G2)) == pytest.approx(sandwich_oracle(0.75), abs=1e-12)


def test_report_lower_bounds_q_g_at_classical_inputs():
    ch = hadamard_sandwich(0.4)
    rep = quantumness(ch, G2, FAST)
    for k in range(2):
        rho_c = np.diag(np.eye(2)[k])
        assert float(rep.w_value) >= float(q_g(apply(ch, rho_c), G2)) - 1e-8


def test_unitary_quantumness_examples():
    value, psi = unitary_quantumness(H_GATE, G2)
    assert value.is_infinite
    assert np.allclose(np.abs(psi), 1 / np.sqrt(2))
    for u, gamma in ((X_GATE, G2), (Z_GATE, G2), (CNOT_GATE, G22), (np.diag([1, 1j]), G2)):
        value, psi = unitary_quantumness(u, gamma)
        assert float(value) == 0 and psi is None
    with pytest.raises(ValueError):
        unitary_quantumness(np.diag([1, 2]), G2)


def test_unitary_shortcut_in_report():
    rep = quantumness(rotated_cnot(), G22)
    assert rep.shortcut == "unitary" and rep.w_value.is_infinite
    assert integrand(rotated_cnot(), G22, rep.witness_state).is_infinite
    plus_basis = Einselection.full(2, {0: H_GATE})
    assert float(quantumness(unitary_channel(Z_GATE), plus_basis).w_value) == 0
    assert quantumness(hadamard(), plus_basis).w_value.is_infinite


def test_rotated_basis_makes_rotated_cnot_classical():
    gamma = Einselection.full([2, 2], {0: H_GATE})
    value, _ = unitary_quantumness(ROTATED_CNOT_GATE, gamma)
    assert float(value) == 0


def test_regularized_self_ratio():
    rep = regularized_ratio(H_GATE, H_GATE, G2, config=FAST)
    assert rep.ratios == [1.0, 1.0, 1.0]
    assert rep.converged and rep.extrapolated == pytest.approx(1)


def test_regularized_ratio_rejects_bad_input():
    with pytest.raises(ValueError):
        regularized_ratio(H_GATE, H_GATE, G2, mu_schedule=(0.9, 1.0))
    with pytest.raises(ValueError):
        regularized_ratio(H_GATE, X_GATE, G2)


def test_power_sweep_rows():
    rows = power_sweep(hadamard_sandwich, [0.25, 0.5], G2, FAST)
    assert [r.parameter for r in rows] == [0.25, 0.5]
    for r in rows:
        assert r.w == pytest.approx(sandwich_oracle(r.parameter), abs=1e-6)
        assert r.dominant == "generating"


def test_maximize_generating_on_sandwich_is_w():
    # the sandwich's distinguishing power vanishes, so W is its generating power
    gen = maximize_generating(hadamard_sandwich(0.5), G2, FAST)
    assert float(gen.value) == pytest.approx(sandwich_oracle(0.5), abs=1e-6)


@pytest.mark.parametrize("gamma", [0.1, 0.3, 0.5, 0.75, 0.9])
def test_sandwich_closed_form_sign(gamma):
    from oracles import corrected_sandwich_formula, printed_sandwich_formula

    assert corrected_sandwich_formula(gamma) == pytest.approx(sandwich_oracle(gamma), abs=1e-12)
    assert abs(printed_sandwich_formula(gamma) - sandwich_oracle(gamma)) > 1e-3


def test_sandwich_oracle_frozen_values():
    # frozen from the hand-built 2x2 state
    assert sandwich_oracle(0.75) == pytest.approx(0.5278361889296741, abs=1e-12)
    assert sandwich_oracle(0.1) == pytest.approx(0.013994926223610094, abs=1e-12)


def test_cnot_formulas_cross_at_two_thirds():
    from oracles import cnot_distinguishing, cnot_generating

    assert cnot_generating(2 / 3) == pytest.approx(math.log2(3) / 2, abs=1e-14)
    assert cnot_distinguishing(2 / 3) == pytest.approx(math.log2(3) / 2, abs=1e-14)


@pytest.mark.parametrize("mu", [0.2, 0.5, 0.8])
def test_cnot_formulas_at_known_witnesses(mu):
    from oracles import cnot_distinguishing, cnot_generating
    from opq.quantumness import depolarized_rotated_cnot

    ch = depolarized_rotated_cnot(mu)
    ket00 = np.array([1, 0, 0, 0])
    psi = (np.kron([1, 0], [1, -1]) + np.kron([0, 1], [1, 1])) / 2
    assert float(generating_term(ch, G22, ket00)) == pytest.approx(cnot_generating(mu), abs=1e-12)
    assert float(distinguishing_term(ch, G22, psi)) == pytest.approx(cnot_distinguishing(mu), abs=1e-12)
