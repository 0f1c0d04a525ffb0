"""Deterministic multistart Nelder-Mead maximisation.

Each start ``i`` draws its initial point from ``default_rng([seed, i])`` so a
larger ``starts`` only ever adds runs. Seeded candidates are run first. An
infinite objective value stops the whole search and is reported with the
parameter vector that produced it.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize


@dataclass(frozen=True)
class OptimizerConfig:
    starts: int = 64
    max_iterations: int = 2000
    tolerance: float = 1e-10
    seed: int = 0
    include_seeded_candidates: tuple = ()
    initial_step: float = 0.3

    def __post_init__(self):
        if self.starts < 0:
            raise ValueError("starts must be non-negative")
        if self.starts == 0 and not self.include_seeded_candidates:
            raise ValueError("need at least one start or seeded candidate")
        if not self.tolerance > 0 or not self.initial_step > 0:
            raise ValueError("tolerances must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")

    def with_candidates(self, candidates):
        return replace(self, include_seeded_candidates=tuple(np.asarray(c, dtype=float) for c in candidates))


@dataclass
class StartRecord:
    index: int
    origin: str
    value: float
    parameters: np.ndarray
    converged: bool
    evaluations: int


@dataclass
class OptimResult:
    best_value: float
    best_parameters: np.ndarray
    per_start: list = field(default_factory=list)
    converged: bool = True
    infinite: bool = False
    witness: object = None

    @property
    def per_start_values(self):
        return [r.value for r in self.per_start]


class _FoundInfinite(Exception):
    def __init__(self, x, value):
        super().__init__()
        self.x = x
        self.value = value


def _run_start(f, x0, cfg):
    evals = 0
    best = [-math.inf, x0.copy()]

    def neg(x):
        nonlocal evals
        evals += 1
        v = f(x)
        if math.isinf(v) and v > 0:
            raise _FoundInfinite(np.array(x, dtype=float), v)
        if v > best[0]:
            best[0] = float(v)
            best[1] = np.array(x, dtype=float)
        return -float(v)

    dim = x0.size
    simplex = np.vstack([x0] + [x0 + cfg.initial_step * np.eye(dim)[k] for k in range(dim)])
    res = minimize(
        neg,
        x0,
        method="Nelder-Mead",
        options={
            "initial_simplex": simplex,
            "maxiter": cfg.max_iterations,
            "maxfev": 4 * cfg.max_iterations,
            "xatol": cfg.tolerance,
            "fatol": cfg.tolerance,
            "adaptive": False,
        },
    )
    return best[0], best[1], bool(res.success), evals


def maximize(f, dim, config=None):
    """Maximise ``f`` over ``R^dim``.

    Args:
        f: callable returning a float; ``+inf`` is allowed and short-circuits.
        dim: parameter dimension.
        config: :class:`OptimizerConfig`.

    Returns:
        OptimResult: best value over all starts, per-start records, and an
        ``infinite`` flag with the witnessing parameters when applicable.
    """
    cfg = config or OptimizerConfig()
    origins = [("candidate", np.asarray(c, dtype=float)) for c in cfg.include_seeded_candidates]
    for i in range(cfg.starts):
        rng = np.random.default_rng([cfg.seed, i])
        origins.append(("random", rng.standard_normal(dim)))

    records = []
    for idx, (origin, x0) in enumerate(origins):
        if x0.shape != (dim,):
            raise ValueError(f"seeded candidate has shape {x0.shape}, expected ({dim},)")
        try:
            value, x, ok, evals = _run_start(f, x0, cfg)
        except _FoundInfinite as hit:
            records.append(StartRecord(idx, origin, math.inf, hit.x, True, -1))
            return OptimResult(hit.value, hit.x, records, True, True, hit.x)
        records.append(StartRecord(idx, origin, value, x, ok, evals))

    # max value; ties resolved by lowest start index
    best = max(records, key=lambda r: (r.value, -r.index))
    return OptimResult(best.value, best.parameters, records, best.converged)


def params_to_pure_state(x, d):
    """Read ``2d`` reals as ``d`` complex amplitudes and normalise.

    Raises:
        ValueError: if the vector is (numerically) zero.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (2 * d,):
        raise ValueError(f"expected {2 * d} parameters, got {x.shape}")
    psi = x[0::2] + 1j * x[1::2]
    norm = np.linalg.norm(psi)
    if norm < 1e-12:
        raise ValueError("parameter vector is zero; cannot form a state")
    return psi / norm


def pure_state_to_params(psi):
    psi = np.asarray(psi, dtype=complex)
    x = np.empty(2 * psi.size)
    x[0::2] = psi.real
    x[1::2] = psi.imag
    return x


def classical_candidates(d):
    """Parameters for every computational-basis state."""
    return [pure_state_to_params(np.eye(d)[k]) for k in range(d)]


def sign_pattern_candidates():
    """Two-qubit states with amplitudes ``±1/2`` (up to global sign)."""
    out = []
    for signs in range(8):
        amps = np.array([1.0] + [(-1.0) ** ((signs >> b) & 1) for b in range(3)]) / 2
        out.append(pure_state_to_params(amps))
    return out


def default_state_candidates(d):
    cands = classical_candidates(d)
    if d == 4:
        cands += sign_pattern_candidates()
    if d == 2:
        cands += [pure_state_to_params(np.array([1, s]) / np.sqrt(2)) for s in (1, -1, 1j, -1j)]
    return cands
