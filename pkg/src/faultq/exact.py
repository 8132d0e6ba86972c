"""Exhaustive classical oracle over every assignment of the free variables."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .boolpoly import MultilinearPoly, evaluate_poly, poly_table
from .gridmodel import DiagnosisModel
from .simulator import bitstring, check_width


@dataclass(frozen=True)
class ExactEntry:
    index: int            # basis index, bit q = free variable q
    bits: str             # variable 0 leftmost
    energy: Fraction


@dataclass(frozen=True)
class ExactResult:
    num_vars: int
    entries: tuple[ExactEntry, ...]     # energy ascending, ties by bitstring
    optimal: tuple[str, ...]            # every bitstring attaining the minimum

    @property
    def best(self) -> ExactEntry:
        return self.entries[0]

    @property
    def min_energy(self) -> Fraction:
        return self.entries[0].energy

    @property
    def unique(self) -> bool:
        return len(self.optimal) == 1


def reversed_index(n: int) -> np.ndarray:
    """Integer value of each basis index read with variable 0 as the most significant bit."""
    idx = np.arange(1 << n, dtype=np.int64)
    rev = np.zeros_like(idx)
    for q in range(n):
        rev |= ((idx >> q) & 1) << (n - 1 - q)
    return rev


def energies(poly: MultilinearPoly, n: int) -> tuple[np.ndarray, int]:
    check_width(n)
    return poly_table(poly, n)


def solve_exhaustive(model: DiagnosisModel | MultilinearPoly, top_n: int | None = None,
                     num_vars: int | None = None) -> ExactResult:
    poly = model.poly if isinstance(model, DiagnosisModel) else model
    n = model.num_qubits if isinstance(model, DiagnosisModel) else num_vars
    if n is None:
        n = max(poly.support(), default=-1) + 1
    vals, den = energies(poly, n)
    rev = reversed_index(n)
    order = np.lexsort((rev, vals))
    if top_n is not None:
        order = order[: min(top_n, order.size)]
    entries = tuple(ExactEntry(int(z), bitstring(int(z), n), Fraction(int(vals[z]), den)) for z in order)
    lo = vals.min()
    opt_idx = np.flatnonzero(vals == lo)
    optimal = tuple(bitstring(int(z), n) for z in opt_idx[np.argsort(rev[opt_idx])])
    return ExactResult(n, entries, optimal)


def solve_enumerate(poly: MultilinearPoly, n: int) -> list[tuple[str, Fraction]]:
    """Reference path: plain Python enumeration with exact rational evaluation."""
    out = []
    for bits in itertools.product((0, 1), repeat=n):
        out.append(("".join(map(str, bits)), evaluate_poly(poly, bits)))
    out.sort(key=lambda t: (t[1], t[0]))
    return out


@dataclass(frozen=True)
class Verdict:
    match: bool                  # QAOA's top bitstring attains the oracle minimum
    qaoa_top: str
    qaoa_top_energy: Fraction
    oracle_min: Fraction
    optimal: tuple[str, ...]
    oracle_rank: int             # 1-based rank of the best-placed optimum in the QAOA distribution
    optimal_probability: float   # total QAOA probability on optimal bitstrings

    def to_dict(self) -> dict:
        return {
            "match": self.match,
            "qaoa_top": self.qaoa_top,
            "qaoa_top_energy": str(self.qaoa_top_energy),
            "oracle_min": str(self.oracle_min),
            "optimal": list(self.optimal),
            "oracle_rank": self.oracle_rank,
            "optimal_probability": self.optimal_probability,
        }


def verify_against_qaoa(exact: ExactResult, qaoa_result) -> Verdict:
    probs = np.asarray(qaoa_result.probabilities)
    n = exact.num_vars
    if probs.size != 1 << n:
        raise ValueError(f"QAOA distribution covers {probs.size.bit_length() - 1} qubits, oracle {n}")
    by_bits = {e.bits: e.energy for e in exact.entries}
    if len(by_bits) != 1 << n:
        raise ValueError("verification needs the full oracle table (top_n=None)")
    rev = reversed_index(n)
    order = np.lexsort((rev, -probs))
    ranked = [bitstring(int(z), n) for z in order]
    top = ranked[0]
    optimal = set(exact.optimal)
    rank = next(i for i, b in enumerate(ranked, 1) if b in optimal)
    p_opt = float(sum(probs[int(b[::-1], 2)] for b in optimal))
    return Verdict(by_bits[top] == exact.min_energy, top, by_bits[top], exact.min_energy,
                   exact.optimal, rank, p_opt)
