"""Channel and state specifications: JSON documents and compact strings.

A channel spec is a JSON object in one of these forms::

    {"name": "amplitude_damping", "params": {"gamma": 0.5}}
    {"dims": [2, 2], "kraus": [[[[re, im], ...], ...], ...]}
    {"chain": [spec, spec, ...]}        # composition, last entry applied first
    {"tensor": [spec, spec, ...]}       # tensor product, factor 0 first

Complex numbers are always two-element ``[re, im]`` arrays and matrices are
lists of rows. The compact chain string ``"H,amplitude_damping(0.75),H"``
reads the same way as a composition; ``*`` inside an element forms a tensor
product, e.g. ``"H*1"``.
"""

import hashlib
import json
import re

import numpy as np

from opq import channels as chn
from opq.states import basis_state, classical_state, max_entangled, pure_to_density, validate_density


class SpecError(ValueError):
    """A channel or state specification could not be parsed or validated."""


def encode_complex(z):
    return [float(np.real(z)), float(np.imag(z))]


def encode_matrix(m):
    return [[encode_complex(z) for z in row] for row in np.asarray(m)]


def decode_matrix(rows, where="matrix"):
    try:
        arr = np.array(
            [[complex(float(z[0]), float(z[1])) for z in row] for row in rows], dtype=complex
        )
    except (TypeError, IndexError, ValueError) as exc:
        raise SpecError(f"{where}: entries must be [re, im] pairs in a list of rows ({exc})") from None
    if arr.ndim != 2:
        raise SpecError(f"{where}: expected a list of equal-length rows")
    return arr


def decode_vector(entries, where="vector"):
    try:
        return np.array([complex(float(z[0]), float(z[1])) for z in entries], dtype=complex)
    except (TypeError, IndexError, ValueError) as exc:
        raise SpecError(f"{where}: entries must be [re, im] pairs ({exc})") from None


PHASE_S = np.diag([1, 1j])
PHASE_T = np.diag([1, np.exp(1j * np.pi / 4)])

def _fixed(gate, dims, name):
    return lambda p, d: chn.unitary_channel(gate, dims=dims, name=name)


def _flex_dims(dims):
    return dims if dims is not None else [2]


# name -> (builder(params, dims), parameter names, fixed dims or None if flexible)
NAMED = {
    "identity": (lambda p, d: chn.identity_channel(_flex_dims(d)), [], None),
    "hadamard": (_fixed(chn.H_GATE, [2], "H"), [], [2]),
    "x": (_fixed(chn.X_GATE, [2], "X"), [], [2]),
    "y": (_fixed(chn.Y_GATE, [2], "Y"), [], [2]),
    "z": (_fixed(chn.Z_GATE, [2], "Z"), [], [2]),
    "s": (_fixed(PHASE_S, [2], "S"), [], [2]),
    "t": (_fixed(PHASE_T, [2], "T"), [], [2]),
    "phase": (
        lambda p, d: chn.unitary_channel(np.diag([1, np.exp(1j * p["phi"])]), name="phase"),
        ["phi"],
        [2],
    ),
    "cnot": (lambda p, d: chn.cnot(), [], [2, 2]),
    "rotated_cnot": (lambda p, d: chn.rotated_cnot(), [], [2, 2]),
    "discord_map": (lambda p, d: chn.discord_map(), [], [2, 2]),
    "discord_map_b": (lambda p, d: chn.discord_map_b(), [], [2]),
    "amplitude_damping": (lambda p, d: chn.amplitude_damping(p["gamma"]), ["gamma"], [2]),
    "bit_flip": (lambda p, d: chn.bit_flip(p["p"]), ["p"], [2]),
    "phase_flip": (lambda p, d: chn.phase_flip(p["p"]), ["p"], [2]),
    "phase_damping": (lambda p, d: chn.phase_damping(p["lambda"]), ["lambda"], [2]),
    "pauli": (lambda p, d: chn.pauli_channel([p["pI"], p["pX"], p["pY"], p["pZ"]]), ["pI", "pX", "pY", "pZ"], [2]),
    "depolarizing": (
        lambda p, d: chn.depolarizing(int(np.prod(_flex_dims(d))), p["mu"], dims=_flex_dims(d)),
        ["mu"],
        None,
    ),
    "dephasing": (lambda p, d: chn.Einselection.full(_flex_dims(d)).as_channel(), [], None),
}

ALIASES = {"h": "hadamard", "1": "identity", "i": "identity", "id": "identity", "cnot±": "rotated_cnot",
           "rcnot": "rotated_cnot", "depolarising": "depolarizing", "Λ": "depolarizing"}


def canonical_name(name):
    key = name.strip()
    low = key.lower()
    low = ALIASES.get(low, low)
    if low not in NAMED:
        raise SpecError(f"unknown channel name {name!r}; known: {', '.join(sorted(NAMED))}")
    return low


def named_channel(name, params=None, dims=None):
    """Build a named channel; ``params`` is a dict or a positional list."""
    key = canonical_name(name)
    builder, pnames, fixed = NAMED[key]
    params = params or {}
    if isinstance(params, (list, tuple)):
        if len(params) > len(pnames) + (1 if key == "depolarizing" else 0):
            raise SpecError(f"{key} takes parameters {pnames}, got {list(params)}")
        values = dict(zip(pnames, params))
        if key == "depolarizing" and len(params) == 2 and dims is None:
            dims = [int(params[1])]
        params = values
    missing = [p for p in pnames if p not in params]
    if missing:
        raise SpecError(f"{key} needs parameter(s) {missing}")
    extra = set(params) - set(pnames)
    if extra:
        raise SpecError(f"{key} does not take parameter(s) {sorted(extra)}")
    if fixed is not None and dims is not None and list(dims) != list(fixed):
        raise SpecError(f"{key} acts on dims {fixed}, not {list(dims)}")
    try:
        ch = builder({k: float(v) for k, v in params.items()}, None if dims is None else list(dims))
    except ValueError as exc:
        raise SpecError(f"{key}: {exc}") from None
    if ch.name is None or key in ("identity", "depolarizing", "dephasing"):
        ch.name = key if not params else f"{key}({','.join(f'{params[p]:g}' for p in pnames)})"
    return ch


def is_flexible(name):
    return NAMED[canonical_name(name)][2] is None


def channel_from_spec(doc, dims=None):
    """Resolve a JSON channel spec (already parsed) to a :class:`QuantumChannel`."""
    if not isinstance(doc, dict):
        raise SpecError("channel spec must be a JSON object")
    if "kraus" in doc:
        if "dims" not in doc:
            raise SpecError("explicit Kraus spec needs 'dims'")
        ops = [decode_matrix(k, f"kraus[{i}]") for i, k in enumerate(doc["kraus"])]
        try:
            return chn.QuantumChannel(ops, dims=doc["dims"], name=doc.get("label", "kraus"))
        except ValueError as exc:
            raise SpecError(f"kraus: {exc}") from None
    if "name" in doc:
        params = doc.get("params", {})
        return named_channel(doc["name"], params, doc.get("dims", dims))
    if "chain" in doc:
        parts = doc["chain"]
        if not parts:
            raise SpecError("chain must not be empty")
        fixed_dims = dims
        for part in parts:
            if isinstance(part, dict) and "name" in part and not is_flexible(part["name"]):
                fixed_dims = NAMED[canonical_name(part["name"])][2]
                break
        resolved = [channel_from_spec(p, fixed_dims) for p in parts]
        try:
            return chn.compose_all(*resolved)
        except ValueError as exc:
            raise SpecError(f"chain: {exc}") from None
    if "tensor" in doc:
        parts = [channel_from_spec(p) for p in doc["tensor"]]
        out = parts[0]
        for p in parts[1:]:
            out = chn.tensor_channels(out, p)
        return out
    raise SpecError("channel spec needs one of 'kraus', 'name', 'chain', 'tensor'")


_ELEMENT = re.compile(r"^\s*([^\s(]+)\s*(?:\(([^)]*)\))?\s*$")


def _split_top(text, sep):
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    out.append("".join(cur))
    return out


def parse_chain(text):
    """Parse a compact chain string into a JSON channel spec."""
    elements = [e for e in _split_top(text, ",")]
    if not elements or any(not e.strip() for e in elements):
        raise SpecError(f"cannot parse chain {text!r}")
    parts = []
    for elem in elements:
        factors = _split_top(elem, "*")
        specs = []
        for f in factors:
            m = _ELEMENT.match(f)
            if not m:
                raise SpecError(f"cannot parse chain element {f!r}")
            name, args = m.group(1), m.group(2)
            params = []
            if args:
                try:
                    params = [float(a) for a in args.split(",")]
                except ValueError:
                    raise SpecError(f"non-numeric parameter in {f!r}") from None
            canonical_name(name)
            specs.append({"name": name, "params": params})
        parts.append(specs[0] if len(specs) == 1 else {"tensor": specs})
    return parts[0] if len(parts) == 1 else {"chain": parts}


def export_channel(ch):
    """Explicit-Kraus JSON spec for any channel."""
    return {"dims": list(ch.dims), "kraus": [encode_matrix(k) for k in ch.kraus]}


def spec_digest(doc):
    canon = json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
    return hashlib.sha256(canon.encode()).hexdigest()


_KET = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([1, 1], dtype=complex) / np.sqrt(2),
    "-": np.array([1, -1], dtype=complex) / np.sqrt(2),
    "r": np.array([1, 1j], dtype=complex) / np.sqrt(2),
    "l": np.array([1, -1j], dtype=complex) / np.sqrt(2),
}


def parse_state(text, dim=None):
    """Parse a compact state label into a density matrix.

    Accepted forms: qubit strings over ``0 1 + - r l`` (one character per
    qubit, e.g. ``"01"`` or ``"+1"``); ``"phi+"``/``"bell"`` for the Bell
    state; ``"mixed"`` for the maximally mixed state; ``"classical:p0,p1,..."``
    for a diagonal state; ``"k:5"`` for basis state 5.
    """
    t = text.strip()
    low = t.lower()
    if low in ("phi+", "bell"):
        return pure_to_density(max_entangled(2))
    if low == "mixed":
        if dim is None:
            raise SpecError("'mixed' needs a known dimension")
        return np.eye(dim, dtype=complex) / dim
    if low.startswith("classical:"):
        try:
            p = [float(x) for x in low.split(":", 1)[1].split(",")]
            return classical_state(p, [len(p)])
        except ValueError as exc:
            raise SpecError(f"state {text!r}: {exc}") from None
    if low.startswith("k:"):
        if dim is None:
            raise SpecError("'k:<index>' needs a known dimension")
        try:
            return pure_to_density(basis_state(int(low[2:]), dim))
        except ValueError as exc:
            raise SpecError(f"state {text!r}: {exc}") from None
    if t and all(c in _KET for c in low):
        psi = _KET[low[0]]
        for c in low[1:]:
            psi = np.kron(psi, _KET[c])
        return pure_to_density(psi)
    raise SpecError(f"cannot parse state {text!r}")


def state_from_doc(doc):
    """State from JSON: ``{"amplitudes": [...]}`` or ``{"density": [[...]]}``."""
    if not isinstance(doc, dict):
        raise SpecError("state spec must be a JSON object")
    if "amplitudes" in doc:
        psi = decode_vector(doc["amplitudes"], "amplitudes")
        n = np.linalg.norm(psi)
        if n == 0:
            raise SpecError("amplitudes: zero vector")
        return pure_to_density(psi / n)
    if "density" in doc:
        rho = decode_matrix(doc["density"], "density")
        try:
            return validate_density(rho)
        except ValueError as exc:
            raise SpecError(f"density: {exc}") from None
    raise SpecError("state spec needs 'amplitudes' or 'density'")


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
