"""Boolean expressions, multilinear pseudo-Boolean polynomials and Ising forms.

Coefficients are kept as :class:`fractions.Fraction` values whose denominators
are powers of two, so every conversion in this module is exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

DEFAULT_DEGREE_CAP = 16

Number = Union[int, Fraction]
Term = tuple[int, ...]


class DegreeCapError(ValueError):
    """Raised when an expansion produces a term beyond the configured degree cap."""


class UnboundVariableError(KeyError):
    pass


# --------------------------------------------------------------------------
# Boolean expression tree


@dataclass(frozen=True)
class Const:
    value: int

    def __post_init__(self):
        if self.value not in (0, 1):
            raise ValueError(f"Const must be 0 or 1, got {self.value!r}")


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Not:
    child: "BoolExpr"


@dataclass(frozen=True)
class And:
    children: tuple["BoolExpr", ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise ValueError("And needs at least one child")


@dataclass(frozen=True)
class Or:
    children: tuple["BoolExpr", ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise ValueError("Or needs at least one child")


@dataclass(frozen=True)
class Xor:
    left: "BoolExpr"
    right: "BoolExpr"


BoolExpr = Union[Const, Var, Not, And, Or, Xor]


def conj(*children: BoolExpr) -> BoolExpr:
    return children[0] if len(children) == 1 else And(children)


def disj(*children: BoolExpr) -> BoolExpr:
    return children[0] if len(children) == 1 else Or(children)


def variables(expr: BoolExpr) -> set[int]:
    if isinstance(expr, Var):
        return {expr.index}
    if isinstance(expr, Const):
        return set()
    if isinstance(expr, Not):
        return variables(expr.child)
    if isinstance(expr, Xor):
        return variables(expr.left) | variables(expr.right)
    out: set[int] = set()
    for c in expr.children:
        out |= variables(c)
    return out


def eval_bool(expr: BoolExpr, assignment):
    """Evaluate ``expr`` under ``assignment`` (a sequence indexed by var id).

    Entries of ``assignment`` may be ints or numpy boolean/int arrays; in the
    latter case the result is evaluated elementwise.
    """
    if isinstance(expr, Const):
        return expr.value
    if isinstance(expr, Var):
        if expr.index < 0 or expr.index >= len(assignment):
            raise UnboundVariableError(f"variable {expr.index} is not bound by the assignment")
        return assignment[expr.index]
    if isinstance(expr, Not):
        return 1 - eval_bool(expr.child, assignment)
    if isinstance(expr, Xor):
        return eval_bool(expr.left, assignment) ^ eval_bool(expr.right, assignment)
    vals = [eval_bool(c, assignment) for c in expr.children]
    out = vals[0]
    for v in vals[1:]:
        out = (out & v) if isinstance(expr, And) else (out | v)
    return out


def truth_table(expr: BoolExpr, n: int) -> np.ndarray:
    """Values of ``expr`` on all ``2**n`` assignments; bit q of the index is var q."""
    idx = np.arange(1 << n, dtype=np.int64)
    cols = [((idx >> q) & 1) for q in range(n)]
    out = eval_bool(expr, cols)
    return np.broadcast_to(np.asarray(out, dtype=np.int64), idx.shape).copy()


# --------------------------------------------------------------------------
# Exact dyadic arithmetic helpers


def _is_dyadic(x: Fraction) -> bool:
    d = x.denominator
    return d & (d - 1) == 0


def _clean(terms: Mapping[Term, Number]) -> dict[Term, Fraction]:
    out = {}
    for k in sorted(terms):
        v = Fraction(terms[k])
        if v != 0:
            out[k] = v
    return out


@dataclass(frozen=True)
class _TermPoly:
    constant: Fraction = Fraction(0)
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "constant", Fraction(self.constant))
        clean = _clean(self.terms)
        for k, v in clean.items():
            if list(k) != sorted(set(k)) or len(k) == 0:
                raise ValueError(f"term {k!r} must be a non-empty strictly increasing tuple")
            if not _is_dyadic(v):
                raise ValueError(f"coefficient {v} of {k} is not dyadic")
        if not _is_dyadic(self.constant):
            raise ValueError(f"constant {self.constant} is not dyadic")
        object.__setattr__(self, "terms", clean)

    @property
    def degree(self) -> int:
        return max((len(k) for k in self.terms), default=0)

    def support(self) -> set[int]:
        return {i for k in self.terms for i in k}

    def items(self):
        return self.terms.items()

    def denominator(self) -> int:
        d = self.constant.denominator
        for v in self.terms.values():
            d = max(d, v.denominator)
        return d


@dataclass(frozen=True)
class MultilinearPoly(_TermPoly):
    """Polynomial over 0/1 variables; each term is a product of distinct variables."""

    constant: Fraction = Fraction(0)
    terms: dict = field(default_factory=dict)

    @classmethod
    def const(cls, value: Number) -> "MultilinearPoly":
        return cls(Fraction(value), {})

    @classmethod
    def var(cls, i: int) -> "MultilinearPoly":
        return cls(Fraction(0), {(i,): Fraction(1)})

    def __add__(self, other):
        if not isinstance(other, MultilinearPoly):
            other = MultilinearPoly.const(other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return MultilinearPoly(self.constant + other.constant, terms)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if not isinstance(other, MultilinearPoly):
            other = MultilinearPoly.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return MultilinearPoly.const(other) - self

    def scale(self, factor: Number) -> "MultilinearPoly":
        f = Fraction(factor)
        return MultilinearPoly(self.constant * f, {k: v * f for k, v in self.terms.items()})

    def mul(self, other: "MultilinearPoly", degree_cap: int = DEFAULT_DEGREE_CAP) -> "MultilinearPoly":
        a = [((), self.constant)] + list(self.terms.items())
        b = [((), other.constant)] + list(other.terms.items())
        const = Fraction(0)
        terms: dict[Term, Fraction] = {}
        for ka, va in a:
            if va == 0:
                continue
            for kb, vb in b:
                if vb == 0:
                    continue
                k = tuple(sorted(set(ka) | set(kb)))
                if len(k) > degree_cap:
                    raise DegreeCapError(f"term of degree {len(k)} exceeds cap {degree_cap}")
                if k:
                    terms[k] = terms.get(k, 0) + va * vb
                else:
                    const += va * vb
        return MultilinearPoly(const, terms)

    def __mul__(self, other):
        if not isinstance(other, MultilinearPoly):
            return self.scale(other)
        return self.mul(other)

    __rmul__ = __mul__


@dataclass(frozen=True)
class IsingHamiltonian(_TermPoly):
    """Offset plus weighted products of spins s_i in {-1, +1}."""

    constant: Fraction = Fraction(0)
    terms: dict = field(default_factory=dict)
    num_spins: int = 0

    def __post_init__(self):
        super().__post_init__()
        used = self.support()
        if used and max(used) >= self.num_spins:
            raise ValueError(f"spin id {max(used)} out of range for {self.num_spins} spins")

    @property
    def offset(self) -> Fraction:
        return self.constant


# --------------------------------------------------------------------------
# Expansion and conversion


def expand(expr: BoolExpr, degree_cap: int = DEFAULT_DEGREE_CAP) -> MultilinearPoly:
    """Multilinear polynomial agreeing with ``expr`` on every 0/1 assignment."""
    if isinstance(expr, Const):
        return MultilinearPoly.const(expr.value)
    if isinstance(expr, Var):
        return MultilinearPoly.var(expr.index)
    if isinstance(expr, Not):
        return 1 - expand(expr.child, degree_cap)
    if isinstance(expr, Xor):
        a = expand(expr.left, degree_cap)
        b = expand(expr.right, degree_cap)
        return a + b - a.mul(b, degree_cap).scale(2)
    parts = [expand(c, degree_cap) for c in expr.children]
    if isinstance(expr, And):
        out = parts[0]
        for p in parts[1:]:
            out = out.mul(p, degree_cap)
        return out
    # Or: 1 - prod(1 - p)
    rest = 1 - parts[0]
    for p in parts[1:]:
        rest = rest.mul(1 - p, degree_cap)
    return 1 - rest


def to_ising(poly: MultilinearPoly, num_spins: int | None = None) -> IsingHamiltonian:
    """Substitute x_i = (1 - s_i)/2 and collect spin products."""
    if num_spins is None:
        num_spins = max(poly.support(), default=-1) + 1
    const = poly.constant
    terms: dict[Term, Fraction] = {}
    for k, v in poly.terms.items():
        w = v / (1 << len(k))
        const += w
        for r in range(1, len(k) + 1):
            sign = -1 if r % 2 else 1
            for sub in combinations(k, r):
                terms[sub] = terms.get(sub, 0) + sign * w
    return IsingHamiltonian(const, terms, num_spins)


def from_ising(ising: IsingHamiltonian) -> MultilinearPoly:
    """Inverse of :func:`to_ising` via s_i = 1 - 2 x_i."""
    const = ising.constant
    terms: dict[Term, Fraction] = {}
    for k, v in ising.terms.items():
        const += v
        for r in range(1, len(k) + 1):
            w = v * (-2) ** r
            for sub in combinations(k, r):
                terms[sub] = terms.get(sub, 0) + w
    return MultilinearPoly(const, terms)


def substitute(
    poly: MultilinearPoly, fixings: Mapping[int, int], num_vars: int | None = None
) -> tuple[MultilinearPoly, dict[int, int]]:
    """Fix some variables to bits and re-index the rest densely.

    Returns the reduced polynomial and the old->new index map of the survivors.
    """
    for var, bit in fixings.items():
        if bit not in (0, 1):
            raise ValueError(f"fixing for {var} must be 0 or 1, got {bit!r}")
    if num_vars is None:
        num_vars = max(poly.support() | set(fixings), default=-1) + 1
    remap = {}
    for i in range(num_vars):
        if i not in fixings:
            remap[i] = len(remap)
    const = poly.constant
    terms: dict[Term, Fraction] = {}
    for k, v in poly.terms.items():
        if any(fixings.get(i, 1) == 0 for i in k):
            continue
        rest = tuple(remap[i] for i in k if i not in fixings)
        if rest:
            terms[rest] = terms.get(rest, 0) + v
        else:
            const += v
    return MultilinearPoly(const, terms), remap


def _check_len(assignment: Sequence[int], needed: int, what: str):
    if len(assignment) < needed:
        raise ValueError(f"{what} has {len(assignment)} entries, needs at least {needed}")


def evaluate_poly(poly: MultilinearPoly, assignment: Sequence[int]) -> Fraction:
    _check_len(assignment, max(poly.support(), default=-1) + 1, "assignment")
    total = poly.constant
    for k, v in poly.terms.items():
        if all(assignment[i] for i in k):
            total += v
    return total


def evaluate_ising(ising: IsingHamiltonian, spins: Sequence[int]) -> Fraction:
    if len(spins) != ising.num_spins:
        raise ValueError(f"expected {ising.num_spins} spins, got {len(spins)}")
    total = ising.constant
    for k, v in ising.terms.items():
        p = 1
        for i in k:
            p *= spins[i]
        total += v * p
    return total


def poly_table(poly: MultilinearPoly, n: int) -> tuple[np.ndarray, int]:
    """Exact values on all ``2**n`` assignments as (integer numerators, denominator)."""
    den = poly.denominator()
    idx = np.arange(1 << n, dtype=np.int64)
    out = np.full(idx.shape, int(poly.constant * den), dtype=np.int64)
    for k, v in poly.terms.items():
        mask = 0
        for i in k:
            mask |= 1 << i
        out += np.where((idx & mask) == mask, int(v * den), 0)
    return out, den


def ising_table(ising: IsingHamiltonian) -> tuple[np.ndarray, int]:
    """Exact Ising values on every basis index (bit q set means s_q = -1)."""
    den = ising.denominator()
    idx = np.arange(1 << ising.num_spins, dtype=np.int64)
    out = np.full(idx.shape, int(ising.constant * den), dtype=np.int64)
    for k, v in ising.terms.items():
        mask = 0
        for i in k:
            mask |= 1 << i
        out += int(v * den) * parity_sign(idx & mask)
    return out, den


def parity_sign(x: np.ndarray) -> np.ndarray:
    """(-1)**popcount(x) elementwise for non-negative int64 arrays."""
    par = np.bitwise_count(x).astype(np.int64) & 1
    return 1 - 2 * par


def format_terms(h: _TermPoly, symbol: str = "x") -> str:
    parts = [str(h.constant)] if h.constant else []
    for k, v in h.terms.items():
        parts.append(f"{v}*" + "*".join(f"{symbol}{i}" for i in k))
    return " + ".join(parts) or "0"


__all__ = [
    "And", "BoolExpr", "Const", "DegreeCapError", "IsingHamiltonian", "MultilinearPoly",
    "Not", "Or", "UnboundVariableError", "Var", "Xor", "conj", "disj", "eval_bool",
    "evaluate_ising", "evaluate_poly", "expand", "from_ising", "ising_table", "poly_table",
    "format_terms", "substitute", "to_ising", "truth_table", "variables",
]
