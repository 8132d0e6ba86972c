"""Dense statevector simulation; qubit q is bit q (least significant first) of the basis index."""
from __future__ import annotations

import os

import numpy as np

from .boolpoly import IsingHamiltonian, ising_table
from .circuit import Circuit, Gate

DEFAULT_MAX_QUBITS = 26


class WidthError(ValueError):
    pass


def max_qubits() -> int:
    return int(os.environ.get("FAULTQ_MAX_QUBITS", DEFAULT_MAX_QUBITS))


def check_width(n: int):
    cap = max_qubits()
    if not 1 <= n <= cap:
        raise WidthError(
            f"{n} qubits is outside the supported range 1..{cap}; "
            "use the simplified model or SPEC reduction, or raise FAULTQ_MAX_QUBITS")


class Statevector:
    def __init__(self, amplitudes: np.ndarray):
        amplitudes = np.asarray(amplitudes, dtype=np.complex128)
        n = amplitudes.size.bit_length() - 1
        if amplitudes.ndim != 1 or amplitudes.size != 1 << n:
            raise ValueError("amplitude vector length must be a power of two")
        self.n_qubits = n
        self.amplitudes = amplitudes

    @classmethod
    def zero(cls, n: int) -> "Statevector":
        check_width(n)
        amps = np.zeros(1 << n, dtype=np.complex128)
        amps[0] = 1.0
        return cls(amps)

    @classmethod
    def basis(cls, n: int, index: int) -> "Statevector":
        s = cls.zero(n)
        s.amplitudes[0] = 0.0
        s.amplitudes[index] = 1.0
        return s

    def copy(self) -> "Statevector":
        return Statevector(self.amplitudes.copy())

    def norm(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def _axes(self):
        return self.amplitudes.reshape((2,) * self.n_qubits)

    def _slice(self, fixed: dict[int, int]):
        idx = [slice(None)] * self.n_qubits
        for q, b in fixed.items():
            idx[self.n_qubits - 1 - q] = b
        return tuple(idx)


def init_plus(n: int) -> Statevector:
    check_width(n)
    return Statevector(np.full(1 << n, 2.0 ** (-n / 2), dtype=np.complex128))


_S2 = 1.0 / np.sqrt(2.0)


def _single_qubit_matrix(g: Gate) -> np.ndarray:
    if g.kind == "H":
        return np.array([[_S2, _S2], [_S2, -_S2]], dtype=np.complex128)
    c, s = np.cos(g.theta / 2), np.sin(g.theta / 2)
    if g.kind == "RX":
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
    if g.kind == "RZ":
        return np.array([[c - 1j * s, 0], [0, c + 1j * s]], dtype=np.complex128)
    raise ValueError(f"not a single-qubit gate: {g.kind}")


def apply(state: Statevector, gate: Gate) -> Statevector:
    """Apply ``gate`` in place and return ``state``."""
    t = state._axes()
    if gate.kind == "CNOT":
        c, q = gate.qubits
        i0 = state._slice({c: 1, q: 0})
        i1 = state._slice({c: 1, q: 1})
        tmp = t[i0].copy()
        t[i0] = t[i1]
        t[i1] = tmp
        return state
    (q,) = gate.qubits
    if gate.kind == "RZ":
        t[state._slice({q: 0})] *= np.exp(-0.5j * gate.theta)
        t[state._slice({q: 1})] *= np.exp(0.5j * gate.theta)
        return state
    m = _single_qubit_matrix(gate)
    i0, i1 = state._slice({q: 0}), state._slice({q: 1})
    a0 = t[i0].copy()
    a1 = t[i1]
    t[i0] = m[0, 0] * a0 + m[0, 1] * a1
    t[i1] = m[1, 0] * a0 + m[1, 1] * a1
    return state


def run(circuit: Circuit, state: Statevector | None = None) -> Statevector:
    if state is None:
        state = Statevector.zero(circuit.n_qubits)
    elif state.n_qubits != circuit.n_qubits:
        raise WidthError(f"circuit has {circuit.n_qubits} qubits, state has {state.n_qubits}")
    for g in circuit.gates:
        apply(state, g)
    return state


def probabilities(state: Statevector) -> np.ndarray:
    return np.abs(state.amplitudes) ** 2


def energy_diagonal(ising: IsingHamiltonian) -> np.ndarray:
    """Ising energy (offset included) of every basis state, as floats."""
    vals, den = ising_table(ising)
    return vals / den


def expectation_diagonal(state: Statevector, ising: IsingHamiltonian,
                         diagonal: np.ndarray | None = None) -> float:
    if ising.num_spins != state.n_qubits:
        raise WidthError(f"Hamiltonian has {ising.num_spins} spins, state has {state.n_qubits} qubits")
    if diagonal is None:
        diagonal = energy_diagonal(ising)
    return float(np.dot(probabilities(state), diagonal))


def bitstring(index: int, n: int) -> str:
    """Render a basis index with qubit 0 leftmost."""
    return "".join(str((index >> q) & 1) for q in range(n))


def sample(state: Statevector, shots: int, seed=None) -> dict[str, int]:
    if shots < 1:
        raise ValueError("shots must be at least 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    p = probabilities(state)
    counts = rng.multinomial(shots, p / p.sum())
    return {bitstring(i, state.n_qubits): int(c) for i, c in enumerate(counts) if c}
