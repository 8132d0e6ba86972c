"""Gate lists, the CNOT-ladder decomposition of Z-product rotations, and QAOA circuits."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .boolpoly import IsingHamiltonian


class Gate(NamedTuple):
    kind: str                   # "H", "RX", "RZ", "CNOT"
    qubits: tuple[int, ...]     # CNOT: (control, target)
    theta: float = 0.0

    def __str__(self):
        q = " ".join(str(i) for i in self.qubits)
        if self.kind in ("RX", "RZ"):
            return f"{self.kind} {q} {self.theta!r}"
        return f"{self.kind} {q}"


def H(q: int) -> Gate:
    return Gate("H", (q,))


def RX(q: int, theta: float) -> Gate:
    return Gate("RX", (q,), float(theta))


def RZ(q: int, theta: float) -> Gate:
    return Gate("RZ", (q,), float(theta))


def CNOT(control: int, target: int) -> Gate:
    if control == target:
        raise ValueError("CNOT control and target must differ")
    return Gate("CNOT", (control, target))


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    gates: tuple[Gate, ...]

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            for q in g.qubits:
                if not 0 <= q < self.n_qubits:
                    raise ValueError(f"{g} is outside a {self.n_qubits}-qubit circuit")

    def __len__(self):
        return len(self.gates)

    def to_text(self) -> str:
        return "\n".join(str(g) for g in self.gates) + ("\n" if self.gates else "")

    @classmethod
    def from_text(cls, n_qubits: int, text: str) -> "Circuit":
        gates = []
        for line in text.splitlines():
            parts = line.split()
            if not parts:
                continue
            kind = parts[0]
            if kind in ("RX", "RZ"):
                gates.append(Gate(kind, (int(parts[1]),), float(parts[2])))
            elif kind == "CNOT":
                gates.append(CNOT(int(parts[1]), int(parts[2])))
            elif kind == "H":
                gates.append(H(int(parts[1])))
            else:
                raise ValueError(f"unknown gate {kind!r}")
        return cls(n_qubits, tuple(gates))


def sed_multi_z(qubits: Sequence[int], theta: float) -> list[Gate]:
    """exp(-i theta/2 Z...Z) as an ascending CNOT ladder, one RZ, and the mirrored ladder."""
    qubits = list(qubits)
    if not qubits:
        raise ValueError("need at least one qubit")
    if any(b <= a for a, b in zip(qubits, qubits[1:])):
        raise ValueError(f"qubits must be strictly increasing, got {qubits}")
    ladder = [CNOT(a, b) for a, b in zip(qubits, qubits[1:])]
    return ladder + [RZ(qubits[-1], theta)] + ladder[::-1]


def cost_layer(ising: IsingHamiltonian, gamma: float) -> list[Gate]:
    gates = []
    for spins, coeff in ising.terms.items():
        gates += sed_multi_z(spins, 2.0 * gamma * float(coeff))
    return gates


def mixer_layer(n: int, beta: float) -> list[Gate]:
    return [RX(q, 2.0 * beta) for q in range(n)]


def build_qaoa_circuit(ising: IsingHamiltonian, gammas: Sequence[float],
                       betas: Sequence[float]) -> Circuit:
    """Hadamard layer, then ``k`` alternating cost/mixer layers.

    The Ising offset only contributes a global phase and is left out.
    """
    if len(gammas) != len(betas):
        raise ValueError(f"{len(gammas)} gammas but {len(betas)} betas")
    n = ising.num_spins
    if n < 1:
        raise ValueError("the Hamiltonian has no spins")
    gates = [H(q) for q in range(n)]
    for g, b in zip(gammas, betas):
        gates += cost_layer(ising, g)
        gates += mixer_layer(n, b)
    return Circuit(n, tuple(gates))


def depth(circuit: Circuit) -> int:
    """As-soon-as-possible layer count over whole gates."""
    free_at = [0] * circuit.n_qubits
    for g in circuit.gates:
        layer = max(free_at[q] for q in g.qubits) + 1
        for q in g.qubits:
            free_at[q] = layer
    return max(free_at, default=0)


def gate_count(circuit: Circuit) -> int:
    return len(circuit.gates)


def strip_initial_hadamards(circuit: Circuit) -> Circuit:
    gates = list(circuit.gates)
    i = 0
    while i < len(gates) and gates[i].kind == "H":
        i += 1
    return Circuit(circuit.n_qubits, tuple(gates[i:]))


def cancel_adjacent_cnots(circuit: Circuit) -> Circuit:
    """Peephole pass removing CNOT pairs that meet with nothing in between on their qubits."""
    out: list[Gate] = []
    last: dict[int, int] = {}   # qubit -> index in out of the last gate touching it
    for g in circuit.gates:
        if g.kind == "CNOT":
            c, t = g.qubits
            i = last.get(c)
            if i is not None and i == last.get(t) and out[i] == g:
                out[i] = None
                for q in (c, t):
                    last.pop(q)
                # recover the previous live gate per qubit
                for q in (c, t):
                    for j in range(i - 1, -1, -1):
                        if out[j] is not None and q in out[j].qubits:
                            last[q] = j
                            break
                continue
        out.append(g)
        for q in g.qubits:
            last[q] = len(out) - 1
    return Circuit(circuit.n_qubits, tuple(g for g in out if g is not None))


def circuit_stats(circuit: Circuit) -> dict:
    body = strip_initial_hadamards(circuit)
    return {
        "qubits": circuit.n_qubits,
        "depth": depth(circuit),
        "gates": gate_count(circuit),
        "depth_without_h": depth(body),
        "gates_without_h": gate_count(body),
        "cnots": sum(g.kind == "CNOT" for g in circuit.gates),
    }
