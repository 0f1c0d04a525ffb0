import json

import numpy as np
import pytest

from opq.channels import Einselection, QuantumChannel, amplitude_damping, compose_all, hadamard, same_action
from opq.specio import (
    NAMED,
    SpecError,
    channel_from_spec,
    decode_matrix,
    encode_matrix,
    export_channel,
    load_json,
    named_channel,
    parse_chain,
    parse_state,
    spec_digest,
    state_from_doc,
)
from opq.states import max_entangled, pure_to_density

SAMPLE_PARAMS = {
    "gamma": 0.37,
    "p": 0.21,
    "lambda": 0.6,
    "mu": 0.45,
    "phi": 0.9,
    "pI": 0.4,
    "pX": 0.3,
    "pY": 0.2,
    "pZ": 0.1,
}


@pytest.mark.parametrize("name", sorted(NAMED))
def test_export_round_trip_every_named_channel(name):
    pnames = NAMED[name][1]
    ch = named_channel(name, {k: SAMPLE_PARAMS[k] for k in pnames})
    reloaded = channel_from_spec(json.loads(json.dumps(export_channel(ch))))
    assert reloaded.dims == ch.dims
    assert same_action(ch, reloaded, atol=1e-12)


def test_matrix_encoding_round_trip():
    m = np.array([[1 + 2j, -0.5], [0.25j, 3]])
    assert np.array_equal(decode_matrix(encode_matrix(m)), m)
    with pytest.raises(SpecError):
        decode_matrix([[1, 2]])


def test_chain_string_matches_composition():
    doc = parse_chain("H,amplitude_damping(0.75),H")
    assert doc == {
        "chain": [
            {"name": "H", "params": []},
            {"name": "amplitude_damping", "params": [0.75]},
            {"name": "H", "params": []},
        ]
    }
    expected = compose_all(hadamard(), amplitude_damping(0.75), hadamard())
    assert same_action(channel_from_spec(doc), expected)


def test_chain_with_flexible_elements_inherits_dims():
    ch = channel_from_spec(parse_chain("depolarizing(0.5),rotated_cnot"))
    assert ch.dims == (2, 2)


def test_tensor_in_chain():
    ch = channel_from_spec(parse_chain("H*1"))
    assert ch.dims == (2, 2)
    assert np.allclose(ch.kraus[0], np.kron(hadamard().kraus[0], np.eye(2)))


def test_named_with_dims_and_aliases():
    ch = named_channel("depolarising", {"mu": 0.3}, dims=[2, 2])
    assert ch.dim == 4 and ch.dims == (2, 2)
    assert same_action(named_channel("dephasing", dims=[2, 2]), Einselection.full([2, 2]).as_channel())


@pytest.mark.parametrize(
    "doc, match",
    [
        ({"name": "nonesuch"}, "unknown channel"),
        ({"name": "amplitude_damping"}, "needs parameter"),
        ({"name": "amplitude_damping", "params": {"gamma": 2}}, "gamma"),
        ({"name": "hadamard", "params": {"gamma": 0.1}}, "does not take"),
        ({"name": "hadamard", "dims": [3]}, "acts on dims"),
        ({"kraus": [[[[1, 0]]]]}, "dims"),
        ({"dims": [2], "kraus": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]]]}, "complete"),
        ({"chain": []}, "empty"),
        ({"chain": [{"name": "H"}, {"name": "cnot"}]}, "dims"),
        ({"bogus": 1}, "needs one of"),
        ([1, 2], "JSON object"),
    ],
)
def test_spec_errors(doc, match):
    with pytest.raises(SpecError, match=match):
        channel_from_spec(doc)


@pytest.mark.parametrize("text", ["", "H,,H", "amplitude_damping(x)", "warp"])
def test_chain_parse_errors(text):
    with pytest.raises(SpecError):
        parse_chain(text)


def test_explicit_kraus_spec():
    doc = {"dims": [2], "kraus": [encode_matrix(k) for k in amplitude_damping(0.2).kraus]}
    ch = channel_from_spec(doc)
    assert isinstance(ch, QuantumChannel)
    assert same_action(ch, amplitude_damping(0.2))


def test_spec_digest_is_canonical():
    assert spec_digest({"a": 1, "b": [1, 2]}) == spec_digest({"b": [1, 2], "a": 1})
    assert spec_digest({"a": 1}) != spec_digest({"a": 2})


def test_parse_state_forms():
    assert np.allclose(parse_state("01"), np.diag([0, 1, 0, 0]))
    assert np.allclose(parse_state("+"), np.full((2, 2), 0.5))
    assert np.allclose(parse_state("phi+"), pure_to_density(max_entangled(2)))
    assert np.allclose(parse_state("mixed", 3), np.eye(3) / 3)
    assert np.allclose(parse_state("classical:0.25,0.75"), np.diag([0.25, 0.75]))
    assert np.allclose(parse_state("k:2", 4), np.diag([0, 0, 1, 0]))
    r = parse_state("r")
    assert np.allclose(r, np.array([[1, -1j], [1j, 1]]) / 2)
    for bad in ("2", "mixed", "k:9", "classical:0.5,0.6"):
        with pytest.raises(SpecError):
            parse_state(bad, 4 if bad == "k:9" else None)


def test_state_from_doc():
    rho = state_from_doc({"amplitudes": [[1, 0], [1, 0]]})
    assert np.allclose(rho, np.full((2, 2), 0.5))
    rho = state_from_doc({"density": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]})
    assert np.allclose(rho, np.eye(2) / 2)
    with pytest.raises(SpecError):
        state_from_doc({"density": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]})
    with pytest.raises(SpecError):
        state_from_doc({"amplitudes": [[0, 0]]})


def test_load_json_reports_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "name": "H",\n  oops\n}\n')
    with pytest.raises(SpecError, match="line 3"):
        load_json(path)
    with pytest.raises(SpecError, match="cannot read"):
        load_json(tmp_path / "missing.json")
