"""Estimated hardware time of a QAOA run from circuit depth."""
from __future__ import annotations

from dataclasses import dataclass

T_PREP_MEAS = 1e-6      # state preparation plus measurement, seconds
T_GATE = 1e-8           # one circuit layer, seconds
SHOTS = 10000
ITERATIONS = 100


@dataclass(frozen=True)
class TimeEstimate:
    depth: int
    iterations: int
    shots: int
    t_prep_meas: float
    t_gate: float

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth must be >= 0")
        for name in ("iterations", "shots", "t_prep_meas", "t_gate"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @property
    def single_repetition(self) -> float:
        return self.t_prep_meas + self.depth * self.t_gate

    @property
    def total(self) -> float:
        return self.iterations * self.shots * self.single_repetition

    def to_dict(self) -> dict:
        return {"depth": self.depth, "iterations": self.iterations, "shots": self.shots,
                "t_prep_meas": self.t_prep_meas, "t_gate": self.t_gate,
                "single_repetition_s": self.single_repetition, "total_s": self.total}


def estimate(depth: int, iterations: int = ITERATIONS, shots: int = SHOTS,
             t_prep_meas: float = T_PREP_MEAS, t_gate: float = T_GATE) -> TimeEstimate:
    return TimeEstimate(int(depth), int(iterations), int(shots), float(t_prep_meas), float(t_gate))
