"""Quantum operations as Kraus lists, dephasing, and the named channels."""

import itertools
from dataclasses import dataclass, field

import numpy as np

from opq import config
from opq.numkernel import dagger, is_unitary, tensor
from opq.states import check_dims, max_entangled

H_GATE = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
X_GATE = np.array([[0, 1], [1, 0]], dtype=complex)
Y_GATE = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z_GATE = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)
CNOT_GATE = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


class QuantumChannel:
    """A trace-preserving completely positive map ``rho -> sum_k K rho K^dagger``.

    Args:
        kraus: non-empty sequence of square matrices of equal shape.
        dims: factor dimensions of the (equal) input and output spaces;
            defaults to a single factor.
        name: label used in reports.
        check: verify completeness ``sum K^dagger K = I``.
    """

    def __init__(self, kraus, dims=None, name=None, check=True):
        ops = np.array([np.asarray(k, dtype=complex) for k in kraus])
        if ops.ndim != 3 or ops.shape[0] == 0:
            raise ValueError("kraus must be a non-empty list of matrices")
        d = ops.shape[1]
        if ops.shape[2] != d:
            raise ValueError(f"Kraus operators must be square, got {ops.shape[1:]}")
        if not np.all(np.isfinite(ops)):
            raise ValueError("Kraus operators have non-finite entries")
        self.kraus = ops
        self.kraus.setflags(write=False)
        self.dims = tuple(check_dims(dims if dims is not None else [d], d))
        self.name = name
        if check:
            gram = np.einsum("kji,kjl->il", ops.conj(), ops)
            err = np.max(np.abs(gram - np.eye(d)))
            if err > config.TOL.validation:
                raise ValueError(f"Kraus operators are not complete (max deviation {err:.3e})")

    @property
    def dim(self):
        return self.kraus.shape[1]

    def __call__(self, rho):
        return apply(self, rho)

    def __repr__(self):
        label = self.name or "QuantumChannel"
        return f"<{label} dims={list(self.dims)} kraus={self.kraus.shape[0]}>"

    def is_unitary(self):
        return self.kraus.shape[0] == 1 and is_unitary(self.kraus[0])

    def choi(self):
        """Choi state ``(Omega x 1)(|Phi_d><Phi_d|)``."""
        d = self.dim
        phi = max_entangled(d)
        vecs = np.array([np.kron(k, np.eye(d)) @ phi for k in self.kraus])
        return np.einsum("ki,kj->ij", vecs, vecs.conj())


def apply(ch, rho):
    """Apply a channel to a density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (ch.dim, ch.dim):
        raise ValueError(f"state of shape {rho.shape} does not fit channel dimension {ch.dim}")
    k = ch.kraus
    return (k @ rho @ k.conj().transpose(0, 2, 1)).sum(axis=0)


def compose(a, b):
    """``a o b``: apply ``b`` first."""
    if a.dim != b.dim:
        raise ValueError(f"cannot compose channels of dimension {a.dim} and {b.dim}")
    kraus = np.einsum("aij,bjk->abik", a.kraus, b.kraus).reshape(-1, a.dim, a.dim)
    name = f"{a.name or '?'}∘{b.name or '?'}"
    return QuantumChannel(_drop_zero(kraus), dims=a.dims, name=name)


def compose_all(*channels):
    out = channels[-1]
    for ch in reversed(channels[:-1]):
        out = compose(ch, out)
    return out


def tensor_channels(a, b):
    """Kraus list ``{A_i x B_j}`` on the joint system."""
    kraus = [np.kron(ka, kb) for ka in a.kraus for kb in b.kraus]
    name = f"{a.name or '?'}⊗{b.name or '?'}"
    return QuantumChannel(kraus, dims=list(a.dims) + list(b.dims), name=name)


def mix_channels(weights, channels):
    """Convex combination ``sum_i p_i Omega_i``."""
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < 0) or abs(weights.sum() - 1) > 1e-12:
        raise ValueError("mixing weights must be a probability vector")
    dims = channels[0].dims
    if any(ch.dims != dims for ch in channels):
        raise ValueError("mixed channels must share dims")
    kraus = [np.sqrt(p) * k for p, ch in zip(weights, channels) if p > 0 for k in ch.kraus]
    return QuantumChannel(kraus, dims=dims, name="mixture")


def _drop_zero(kraus):
    keep = [k for k in kraus if np.max(np.abs(k)) > 0]
    return keep or [kraus[0]]


@dataclass(frozen=True, eq=False)
class Einselection:
    """Complete dephasing of selected tensor factors in a chosen basis.

    ``bases`` maps a dephased factor index to a unitary whose columns are the
    einselected basis vectors; factors without an entry use the
    computational basis.
    """

    dims: tuple
    dephased: tuple
    bases: dict = field(default_factory=dict)
    _rotation: np.ndarray = field(init=False, repr=False, compare=False)
    _mask: np.ndarray = field(init=False, repr=False, compare=False)
    _dim: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        dephased = tuple(sorted(set(int(k) for k in self.dephased)))
        if any(k < 0 or k >= len(dims) for k in dephased):
            raise ValueError(f"dephased factors {dephased} out of range for dims {dims}")
        bases = {}
        for k, u in dict(self.bases).items():
            k = int(k)
            if k not in dephased:
                raise ValueError(f"basis given for factor {k}, which is not dephased")
            u = np.asarray(u, dtype=complex)
            if u.shape != (dims[k], dims[k]) or not is_unitary(u):
                raise ValueError(f"basis rotation for factor {k} is not a {dims[k]}x{dims[k]} unitary")
            bases[k] = u
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "dephased", dephased)
        object.__setattr__(self, "bases", bases)

        rotation = tensor(*[bases.get(k, np.eye(d)) for k, d in enumerate(dims)])
        object.__setattr__(self, "_rotation", rotation if bases else None)
        # mask[i, j] = 1 when i and j agree on every dephased factor
        digits = np.array(list(itertools.product(*[range(d) for d in dims])))
        agree = np.ones((len(digits), len(digits)), dtype=bool)
        for k in dephased:
            agree &= digits[:, k][:, None] == digits[:, k][None, :]
        object.__setattr__(self, "_mask", agree.astype(float))
        object.__setattr__(self, "_dim", len(digits))

    @classmethod
    def full(cls, dims, bases=None):
        """Dephase every factor."""
        dims = [dims] if isinstance(dims, (int, np.integer)) else list(dims)
        return cls(tuple(dims), tuple(range(len(dims))), bases or {})

    @classmethod
    def on(cls, dims, factors, bases=None):
        if isinstance(factors, (int, np.integer)):
            factors = (factors,)
        return cls(tuple(dims), tuple(factors), bases or {})

    @property
    def dim(self):
        return self._dim

    def __call__(self, rho):
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (self._dim, self._dim):
            raise ValueError(f"state of shape {rho.shape} does not fit dims {list(self.dims)}")
        if self._rotation is None:
            return rho * self._mask
        w = self._rotation
        wd = w.conj().T
        return w @ ((wd @ rho @ w) * self._mask) @ wd

    def projectors(self):
        """Orthogonal projectors ``Pi_alpha``, one per dephased-basis label."""
        per_factor = []
        for k, d in enumerate(self.dims):
            if k in self.dephased:
                u = self.bases.get(k, np.eye(d, dtype=complex))
                per_factor.append([np.outer(u[:, a], u[:, a].conj()) for a in range(d)])
            else:
                per_factor.append([np.eye(d, dtype=complex)])
        return [tensor(*ops) for ops in itertools.product(*per_factor)]

    def as_channel(self):
        return QuantumChannel(self.projectors(), dims=self.dims, name="Γ")


def dephasing(einselection):
    return einselection.as_channel()


def identity_channel(dims):
    dims = [dims] if isinstance(dims, (int, np.integer)) else list(dims)
    return QuantumChannel([np.eye(int(np.prod(dims)))], dims=dims, name="1")


def unitary_channel(u, dims=None, name=None):
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u):
        raise ValueError("unitary_channel requires a unitary matrix")
    return QuantumChannel([u], dims=dims, name=name or "U")


def weyl_operators(d):
    """The ``d^2`` clock-and-shift operators ``X^a Z^b``; ``(0, 0)`` first."""
    omega = np.exp(2j * np.pi / d)
    shift = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    clock = np.diag(omega ** np.arange(d))
    return [
        np.linalg.matrix_power(shift, a) @ np.linalg.matrix_power(clock, b)
        for a in range(d)
        for b in range(d)
    ]


def depolarizing(d, mu, dims=None):
    """``rho -> mu rho + (1 - mu) I / d``.

    Realised with the Weyl basis: the identity carries weight
    ``mu + (1 - mu) / d^2`` and each of the other ``d^2 - 1`` operators
    ``(1 - mu) / d^2``.
    """
    _check_unit("mu", mu)
    ops = weyl_operators(d)
    w0 = mu + (1 - mu) / d**2
    w = (1 - mu) / d**2
    kraus = [np.sqrt(w0) * ops[0]]
    if w > 0:
        kraus += [np.sqrt(w) * op for op in ops[1:]]
    return QuantumChannel(kraus, dims=dims or [d], name=f"Λ({mu:g})")


def amplitude_damping(gamma):
    _check_unit("gamma", gamma)
    f1 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=complex)
    f2 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=complex)
    return QuantumChannel([f1, f2], name=f"Ξ({gamma:g})")


def pauli_channel(probabilities):
    """Single-qubit Pauli channel with weights ``(p_I, p_X, p_Y, p_Z)``."""
    p = np.asarray(probabilities, dtype=float)
    if p.shape != (4,) or np.any(p < 0) or abs(p.sum() - 1) > 1e-12:
        raise ValueError("pauli_channel needs four non-negative weights summing to 1")
    kraus = [np.sqrt(pk) * op for pk, op in zip(p, (I2, X_GATE, Y_GATE, Z_GATE)) if pk > 0]
    return QuantumChannel(kraus, name="pauli")


def bit_flip(p):
    _check_unit("p", p)
    return pauli_channel([1 - p, p, 0, 0])


def phase_flip(p):
    _check_unit("p", p)
    return pauli_channel([1 - p, 0, 0, p])


def phase_damping(lam):
    _check_unit("lambda", lam)
    k1 = np.array([[1, 0], [0, np.sqrt(1 - lam)]], dtype=complex)
    k2 = np.array([[0, 0], [0, np.sqrt(lam)]], dtype=complex)
    return QuantumChannel([k1, k2], name=f"phase_damping({lam:g})")


def hadamard():
    return unitary_channel(H_GATE, name="H")


def cnot():
    """CNOT with factor 0 as control."""
    return unitary_channel(CNOT_GATE, dims=[2, 2], name="CNOT")


ROTATED_CNOT_GATE = np.kron(H_GATE, I2) @ CNOT_GATE @ np.kron(H_GATE, I2)


def rotated_cnot():
    """``(H x 1) CNOT (H x 1)``: CNOT controlled in the ``|+->`` basis."""
    return unitary_channel(ROTATED_CNOT_GATE, dims=[2, 2], name="CNOT±")


def discord_map_b():
    """Single-qubit map with Kraus ``|0><0|`` and ``|+><1|``."""
    e1 = np.array([[1, 0], [0, 0]], dtype=complex)
    e2 = np.array([[0, 1], [0, 1]], dtype=complex) / np.sqrt(2)
    return QuantumChannel([e1, e2], name="Ω_B")


def discord_map():
    """``1 x Omega_B`` on two qubits."""
    ch = tensor_channels(identity_channel(2), discord_map_b())
    ch.name = "1⊗Ω_B"
    return ch


def classical_channel(T, dims=None):
    """Classical stochastic map with Kraus ``sqrt(T_ij) |i><j|``.

    ``T`` must be column-stochastic: ``T[i, j]`` is the probability of
    ``j -> i``.
    """
    T = np.asarray(T, dtype=float)
    d = T.shape[0]
    if T.shape != (d, d) or np.any(T < 0) or not np.allclose(T.sum(axis=0), 1, atol=1e-12):
        raise ValueError("classical_channel needs a square column-stochastic matrix")
    kraus = []
    for i in range(d):
        for j in range(d):
            if T[i, j] > 0:
                k = np.zeros((d, d), dtype=complex)
                k[i, j] = np.sqrt(T[i, j])
                kraus.append(k)
    return QuantumChannel(kraus, dims=dims, name="Θ")


def random_stochastic(d, seed):
    rng = np.random.default_rng(seed)
    T = rng.random((d, d)) ** 2
    return T / T.sum(axis=0)


def random_channel(d, n_kraus, seed, dims=None):
    """Random channel from a Haar-like isometry ``C^d -> C^(n d)``."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n_kraus * d, d)) + 1j * rng.standard_normal((n_kraus * d, d))
    q, r = np.linalg.qr(g)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return QuantumChannel(q.reshape(n_kraus, d, d), dims=dims, name="random")


def random_unitary(d, seed):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _check_unit(name, value):
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")


CLASSICAL = "classical"
NONCLASSICAL = "nonclassical"


def classify_unitary(u, einselection=None):
    """``CLASSICAL`` if ``u`` permutes the einselected basis up to phases.

    With no einselection the full computational basis is used. Only full
    einselection (every factor dephased) is meaningful here.
    """
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u):
        raise ValueError("classify_unitary requires a unitary matrix")
    if einselection is not None:
        if len(einselection.dephased) != len(einselection.dims):
            raise ValueError("unitary classification needs every factor dephased")
        w = einselection._rotation
        if w is not None:
            u = dagger(w) @ u @ w
    tol = config.TOL.unitary_entry
    mod = np.abs(u)
    near_one = np.abs(mod - 1) <= tol
    near_zero = mod <= tol
    if np.all(near_one | near_zero) and np.all(near_one.sum(axis=0) == 1):
        return CLASSICAL
    return NONCLASSICAL


def commutes_with(ch, gamma, atol=None):
    """Check ``Gamma o Omega = Omega o Gamma`` on the matrix-unit basis."""
    atol = config.TOL.commutation if atol is None else atol
    d = ch.dim
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1
            if np.max(np.abs(gamma(apply(ch, e)) - apply(ch, gamma(e)))) > atol:
                return False
    return True


def same_action(a, b, atol=1e-12):
    """Compare two channels on the matrix-unit basis."""
    if a.dim != b.dim:
        return False
    d = a.dim
    for i in range(d):
        for j in range(d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1
            if np.max(np.abs(apply(a, e) - apply(b, e))) > atol:
                return False
    return True
