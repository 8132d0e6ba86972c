"""Variational QAOA loop: expectation, classical parameter search, ranked hypotheses."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .boolpoly import poly_table
from .circuit import build_qaoa_circuit, circuit_stats
from .exact import reversed_index
from .gridmodel import DiagnosisModel, FaultHypothesis, decode_hypothesis
from .simulator import bitstring, check_width, energy_diagonal, expectation_diagonal, probabilities, run

OPTIMIZERS = ("nelder_mead", "spsa")
INIT_SCHEMES = ("seeded_uniform", "linear_ramp")


@dataclass(frozen=True)
class QaoaConfig:
    level: int = 10
    max_iterations: int = 100
    optimizer: str = "nelder_mead"
    restarts: int = 5
    seed: int = 0
    init: str = "seeded_uniform"
    tol: float = 1e-6
    window: int = 0       # stagnation window; 0 = 10 for SPSA, 10 simplex sweeps for Nelder-Mead
    gamma_max: float = np.pi
    beta_max: float = np.pi / 2

    def __post_init__(self):
        if self.level < 1 or self.max_iterations < 1 or self.restarts < 1:
            raise ValueError("level, max_iterations and restarts must all be >= 1")
        if self.optimizer not in OPTIMIZERS:
            raise ValueError(f"optimizer must be one of {OPTIMIZERS}")
        if self.init not in INIT_SCHEMES:
            raise ValueError(f"init must be one of {INIT_SCHEMES}")


@dataclass(frozen=True)
class RankedHypothesis:
    bits: str
    hypothesis: FaultHypothesis
    probability: float
    energy: Fraction


@dataclass
class QaoaResult:
    gammas: np.ndarray
    betas: np.ndarray
    value: float
    trace: list[float]
    probabilities: np.ndarray
    ranked: list[RankedHypothesis]
    stats: dict
    converged: bool
    evaluations: int
    restart_values: list[float] = field(default_factory=list)
    history: list[float] = field(default_factory=list)     # F at every evaluated point

    @property
    def top(self) -> RankedHypothesis:
        return self.ranked[0]


def split_params(params: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    params = np.asarray(params, dtype=float)
    if params.size % 2:
        raise ValueError("parameter vector must hold k gammas followed by k betas")
    k = params.size // 2
    return params[:k], params[k:]


class Objective:
    """F(gamma, beta) = <psi|H_C|psi> with a cached energy diagonal."""

    def __init__(self, model: DiagnosisModel):
        check_width(model.num_qubits)
        self.model = model
        self.diagonal = energy_diagonal(model.ising)
        self.evaluations = 0
        self.history: list[float] = []

    def state(self, params):
        g, b = split_params(params)
        return run(build_qaoa_circuit(self.model.ising, g, b))

    def __call__(self, params) -> float:
        self.evaluations += 1
        v = expectation_diagonal(self.state(params), self.model.ising, self.diagonal)
        self.history.append(v)
        return v


def objective(model: DiagnosisModel, params) -> float:
    return Objective(model)(params)


def initial_params(config: QaoaConfig, rng: np.random.Generator) -> np.ndarray:
    k = config.level
    if config.init == "linear_ramp":
        j = np.arange(1, k + 1)
        return np.concatenate([j / k * config.gamma_max, (1 - j / k) * config.beta_max])
    return np.concatenate([rng.uniform(0, config.gamma_max, k), rng.uniform(0, config.beta_max, k)])


def _nelder_mead(f, x0, config: QaoaConfig):
    trace: list[float] = []
    best = [np.inf, np.asarray(x0, float)]

    def tracked(x):
        v = f(x)
        if v < best[0]:
            best[0], best[1] = v, np.array(x, float)
        return v

    # one Nelder-Mead step moves a single vertex, so count the window in sweeps of the simplex
    window = config.window or 10 * x0.size

    def callback(intermediate_result):
        trace.append(best[0])
        if len(trace) > window:
            old = trace[-1 - window]
            if abs(old - trace[-1]) <= config.tol * max(abs(old), 1e-12):
                raise StopIteration

    res = minimize(tracked, x0, method="Nelder-Mead", callback=callback,
                   options={"maxiter": config.max_iterations, "xatol": 1e-8, "fatol": 1e-10,
                            "adaptive": x0.size > 8})
    converged = bool(res.success) or res.message.startswith("`callback`")
    return best[1], best[0], trace, converged


def _spsa(f, x0, config: QaoaConfig, rng: np.random.Generator):
    a, c, A, alpha, gam = 0.2, 0.1, 0.1 * config.max_iterations, 0.602, 0.101
    x = np.asarray(x0, float).copy()
    best_x, best_v = x.copy(), f(x)
    trace = []
    converged = False
    for it in range(config.max_iterations):
        ak = a / (it + 1 + A) ** alpha
        ck = c / (it + 1) ** gam
        delta = rng.choice((-1.0, 1.0), size=x.size)
        grad = (f(x + ck * delta) - f(x - ck * delta)) / (2 * ck) * delta
        x = x - ak * grad
        v = f(x)
        if v < best_v:
            best_v, best_x = v, x.copy()
        trace.append(best_v)
        window = config.window or 10
        if len(trace) > window:
            old = trace[-1 - window]
            if abs(old - best_v) <= config.tol * max(abs(old), 1e-12):
                converged = True
                break
    return best_x, best_v, trace, converged


def rank(probs: np.ndarray, model: DiagnosisModel, top_n: int = 32) -> list[RankedHypothesis]:
    """Most probable hypotheses first; ties by bitstring."""
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    n = model.num_qubits
    probs = np.asarray(probs)
    vals, den = poly_table(model.poly, n)
    order = np.lexsort((reversed_index(n), -probs))[: min(top_n, probs.size)]
    out = []
    for z in order:
        bits = bitstring(int(z), n)
        hyp = decode_hypothesis([int(ch) for ch in bits], model.layout)
        out.append(RankedHypothesis(bits, hyp, float(probs[z]), Fraction(int(vals[z]), den)))
    return out


def optimize(model: DiagnosisModel, config: QaoaConfig = QaoaConfig(),
             initial: Sequence[float] | None = None, top_n: int = 32) -> QaoaResult:
    """Multi-start search over (gamma, beta); the best restart wins, lowest index on ties.

    ``initial`` replaces the first restart's starting point.
    """
    if model.num_qubits < 1:
        raise ValueError("model has no free variables")
    f = Objective(model)
    rng = np.random.default_rng(config.seed)
    best = None
    values = []
    for r in range(config.restarts):
        x0 = initial_params(config, rng)
        if r == 0 and initial is not None:
            x0 = np.asarray(initial, float)
            if x0.size != 2 * config.level:
                raise ValueError(f"initial point needs {2 * config.level} entries")
        if config.optimizer == "spsa":
            x, v, trace, conv = _spsa(f, x0, config, rng)
        else:
            x, v, trace, conv = _nelder_mead(f, x0, config)
        values.append(v)
        if best is None or v < best[1]:
            best = (x, v, trace, conv)
    x, v, trace, conv = best
    state = f.state(x)
    probs = probabilities(state)
    g, b = split_params(x)
    stats = circuit_stats(build_qaoa_circuit(model.ising, g, b))
    return QaoaResult(g, b, float(v), [float(t) for t in trace], probs, rank(probs, model, top_n),
                      stats, conv, f.evaluations, [float(t) for t in values], f.history)


def optimize_levels(model: DiagnosisModel, levels: Sequence[int], config: QaoaConfig = QaoaConfig()):
    """Optimise at increasing levels, seeding each from the previous optimum padded with zeros."""
    results = {}
    prev = None
    for k in levels:
        cfg = QaoaConfig(**{**config.__dict__, "level": k})
        init = None
        if prev is not None:
            pad = k - prev.gammas.size
            init = np.concatenate([prev.gammas, np.zeros(pad), prev.betas, np.zeros(pad)])
        prev = optimize(model, cfg, init)
        results[k] = prev
    return results
