import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from opq.channels import (
    CLASSICAL,
    CNOT_GATE,
    H_GATE,
    NONCLASSICAL,
    ROTATED_CNOT_GATE,
    X_GATE,
    Y_GATE,
    Z_GATE,
    Einselection,
    QuantumChannel,
    amplitude_damping,
    apply,
    bit_flip,
    classical_channel,
    classify_unitary,
    commutes_with,
    compose,
    compose_all,
    depolarizing,
    discord_map,
    discord_map_b,
    hadamard,
    identity_channel,
    mix_channels,
    pauli_channel,
    phase_damping,
    phase_flip,
    random_channel,
    random_stochastic,
    random_unitary,
    rotated_cnot,
    same_action,
    tensor_channels,
    unitary_channel,
)
from opq.numkernel import hermitian_eigen
from opq.quantumness import integrand
from opq.states import classical_state, is_density, random_density, random_mixed, random_pure

from oracles import dephase, dephase_b, kraus_apply

seeds = st.integers(min_value=0, max_value=2**32 - 1)
PLUS = np.array([1, 1]) / np.sqrt(2)
MINUS = np.array([1, -1]) / np.sqrt(2)


def named_channels():
    return [
        identity_channel(2),
        hadamard(),
        amplitude_damping(0.3),
        bit_flip(0.2),
        phase_flip(0.7),
        phase_damping(0.4),
        pauli_channel([0.1, 0.2, 0.3, 0.4]),
        depolarizing(2, 0.35),
        depolarizing(3, 0.6),
        depolarizing(4, 0.2, dims=[2, 2]),
        discord_map_b(),
        discord_map(),
        rotated_cnot(),
        unitary_channel(CNOT_GATE, dims=[2, 2]),
        classical_channel(random_stochastic(3, 5)),
        random_channel(4, 3, 9),
        Einselection.full([2, 2]).as_channel(),
        Einselection.on([2, 3], 1).as_channel(),
    ]


@pytest.mark.parametrize("ch", named_channels(), ids=repr)
def test_completeness_and_choi_positivity(ch):
    gram = sum(k.conj().T @ k for k in ch.kraus)
    assert np.max(np.abs(gram - np.eye(ch.dim))) < 1e-10
    assert np.linalg.eigvalsh(ch.choi())[0] >= -1e-10
    assert abs(np.trace(ch.choi()) - 1) < 1e-12


@pytest.mark.parametrize("ch", named_channels(), ids=repr)
def test_outputs_are_states(ch):
    for seed in range(5):
        assert is_density(apply(ch, random_density(ch.dim, 1 + seed % ch.dim, seed)))


def test_incomplete_kraus_rejected():
    with pytest.raises(ValueError, match="complete"):
        QuantumChannel([np.diag([1, 0])])


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        apply(hadamard(), np.eye(4) / 4)
    with pytest.raises(ValueError):
        compose(hadamard(), rotated_cnot())


def test_dephasing_plus():
    assert np.allclose(Einselection.full(2)(np.outer(PLUS, PLUS)), np.eye(2) / 2)


def test_discord_map_b_on_one():
    assert np.allclose(apply(discord_map_b(), np.diag([0, 1])), np.outer(PLUS, PLUS), atol=1e-15)


def test_depolarizing_identity_at_one():
    rho = random_mixed(3, 4)
    assert np.allclose(apply(depolarizing(3, 1.0), rho), rho, atol=1e-15)


@settings(max_examples=40, deadline=None)
@given(seeds, st.floats(0, 1), st.sampled_from([2, 3, 4]))
def test_depolarizing_matches_affine_form(seed, mu, d):
    rho = random_mixed(d, seed)
    expected = mu * rho + (1 - mu) * np.eye(d) / d
    assert np.max(np.abs(apply(depolarizing(d, mu), rho) - expected)) < 1e-12


def test_compose_hadamard_twice():
    assert same_action(compose(hadamard(), hadamard()), identity_channel(2))


def test_compose_dephasing_idempotent():
    gamma = Einselection.full([2, 2]).as_channel()
    assert same_action(compose(gamma, gamma), gamma)


def test_compose_matches_sequential_application():
    lam = depolarizing(4, 0.7, dims=[2, 2])
    both = compose(lam, rotated_cnot())
    for seed in range(10):
        rho = random_mixed(4, seed)
        assert np.allclose(apply(both, rho), apply(lam, apply(rotated_cnot(), rho)), atol=1e-12)


def test_compose_all_order():
    chain = compose_all(hadamard(), amplitude_damping(0.5), hadamard())
    rho = random_mixed(2, 1)
    step = apply(hadamard(), apply(amplitude_damping(0.5), apply(hadamard(), rho)))
    assert np.allclose(apply(chain, rho), step, atol=1e-14)


def test_tensor_identity_and_discord_map_on_sigma_c():
    assert same_action(tensor_channels(identity_channel(2), identity_channel(2)), identity_channel([2, 2]))
    sigma_c = classical_state({0: 0.5, 3: 0.5}, [2, 2])
    expected = 0.5 * (np.kron(np.diag([1, 0]), np.diag([1, 0])) + np.kron(np.diag([0, 1]), np.outer(PLUS, PLUS)))
    assert np.allclose(apply(discord_map(), sigma_c), expected, atol=1e-15)


def test_local_dephasings_tensor_to_full():
    g = Einselection.full(2).as_channel()
    assert same_action(tensor_channels(g, g), Einselection.full([2, 2]).as_channel())


def test_amplitude_damping_kraus_as_printed():
    gamma = 0.3
    f1 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]])
    f2 = np.array([[0, np.sqrt(gamma)], [0, 0]])
    assert np.array_equal(amplitude_damping(gamma).kraus, np.array([f1, f2], dtype=complex))


def test_rotated_cnot_on_zero_zero():
    out = ROTATED_CNOT_GATE @ np.array([1, 0, 0, 0])
    assert np.allclose(out, np.array([1, 1, 1, -1]) / 2, atol=1e-15)


def test_rotated_cnot_maps_witness_to_classical_state():
    psi = (np.kron([1, 0], MINUS) + np.kron([0, 1], PLUS)) / np.sqrt(2)
    assert np.allclose(ROTATED_CNOT_GATE @ psi, [0, 0, 1, 0], atol=1e-15)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_classical_channel_commutes_with_dephasing(seed):
    theta = classical_channel(random_stochastic(3, seed))
    rho = random_mixed(3, seed)
    assert np.max(np.abs(dephase(apply(theta, rho)) - apply(theta, dephase(rho)))) < 1e-12
    assert commutes_with(theta, Einselection.full(3))


def test_classical_channel_rejects_non_stochastic():
    with pytest.raises(ValueError):
        classical_channel(np.array([[0.5, 0.5], [0.6, 0.5]]))


@pytest.mark.parametrize("factory", [depolarizing, lambda d, p: amplitude_damping(p)])
def test_out_of_range_parameters(factory):
    with pytest.raises(ValueError):
        factory(2, 1.5)


@pytest.mark.parametrize(
    "u, expected",
    [
        (X_GATE, CLASSICAL),
        (Y_GATE, CLASSICAL),
        (Z_GATE, CLASSICAL),
        (np.diag([1, np.exp(0.7j)]), CLASSICAL),
        (CNOT_GATE, CLASSICAL),
        (H_GATE, NONCLASSICAL),
        (ROTATED_CNOT_GATE, NONCLASSICAL),
    ],
)
def test_classify_unitary(u, expected):
    assert classify_unitary(u) == expected


def test_classify_in_rotated_basis():
    assert classify_unitary(Z_GATE, Einselection.full(2, {0: H_GATE})) == CLASSICAL
    assert classify_unitary(H_GATE, Einselection.full(2, {0: H_GATE})) == NONCLASSICAL
    assert classify_unitary(ROTATED_CNOT_GATE, Einselection.full([2, 2], {0: H_GATE})) == CLASSICAL


def test_classify_rejects_non_unitary_and_partial():
    with pytest.raises(ValueError):
        classify_unitary(np.diag([1, 0.5]))
    with pytest.raises(ValueError):
        classify_unitary(CNOT_GATE, Einselection.on([2, 2], 1))


@pytest.mark.parametrize("u", [X_GATE, Z_GATE, CNOT_GATE, np.kron(X_GATE, np.diag([1, 1j]))])
def test_classical_unitaries_have_vanishing_integrand(u):
    ch = unitary_channel(u, dims=[2] * int(np.log2(len(u))))
    gamma = Einselection.full(list(ch.dims))
    for seed in range(50):
        assert float(integrand(ch, gamma, random_pure(ch.dim, seed))) <= 1e-10


@settings(max_examples=30, deadline=None)
@given(seeds, st.sampled_from([[2], [2, 2], [3, 2]]), st.data())
def test_dephasing_idempotent_and_block_diagonal(seed, dims, data):
    factors = data.draw(st.lists(st.integers(0, len(dims) - 1), min_size=1, unique=True))
    bases = {k: random_unitary(dims[k], seed + k) for k in factors if data.draw(st.booleans())}
    gamma = Einselection.on(dims, factors, bases)
    rho = random_mixed(gamma.dim, seed)
    once = gamma(rho)
    assert np.max(np.abs(gamma(once) - once)) < 1e-10
    for proj in gamma.projectors():
        assert np.max(np.abs(proj @ once - once @ proj)) < 1e-12
    # the mask route and the projector route agree
    assert np.max(np.abs(once - apply(gamma.as_channel(), rho))) < 1e-12


def test_one_sided_dephasing_matches_loop_oracle():
    rho = random_mixed(6, 2)
    assert np.allclose(Einselection.on([2, 3], 1)(rho), dephase_b(rho, 2, 3), atol=1e-15)


def test_einselection_validation():
    with pytest.raises(ValueError):
        Einselection.on([2, 2], 2)
    with pytest.raises(ValueError):
        Einselection.on([2, 2], 1, {0: H_GATE})
    with pytest.raises(ValueError):
        Einselection.on([2, 2], 1, {1: np.diag([1, 2])})


def test_mix_channels_and_pauli_equivalence():
    mixed = mix_channels([0.8, 0.2], [identity_channel(2), unitary_channel(X_GATE)])
    assert same_action(mixed, bit_flip(0.2))


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 4))
def test_random_channel_matches_kraus_oracle(seed, n):
    ch = random_channel(3, n, seed)
    rho = random_mixed(3, seed)
    assert np.allclose(apply(ch, rho), kraus_apply(list(ch.kraus), rho), atol=1e-14)


def test_hermitian_output_has_real_spectrum():
    rho = apply(discord_map(), random_mixed(4, 0))
    dec = hermitian_eigen(rho)
    assert np.all(dec.eigenvalues > -1e-12)
