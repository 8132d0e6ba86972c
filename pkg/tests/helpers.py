"""Independent oracles for the test-suite: dense unitaries and a tiny spin algebra."""
from __future__ import annotations

from fractions import Fraction
from functools import reduce

import numpy as np
from hypothesis import strategies as st

from faultq.boolpoly import And, Const, Not, Or, Var, Xor

I2 = np.eye(2, dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
HAD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def kron_all(ops):
    return reduce(np.kron, ops)


def on_qubit(op, q, n):
    """Embed a one-qubit operator; qubit 0 is the least significant bit, i.e. the last kron factor."""
    return kron_all([op if (n - 1 - k) == q else I2 for k in range(n)])


def cnot_matrix(c, t, n):
    dim = 1 << n
    u = np.zeros((dim, dim), dtype=complex)
    for z in range(dim):
        u[z ^ (((z >> c) & 1) << t), z] = 1
    return u


def gate_matrix(g, n):
    if g.kind == "CNOT":
        return cnot_matrix(*g.qubits, n)
    (q,) = g.qubits
    if g.kind == "H":
        return on_qubit(HAD, q, n)
    if g.kind == "RX":
        return on_qubit(np.cos(g.theta / 2) * I2 - 1j * np.sin(g.theta / 2) * X, q, n)
    if g.kind == "RZ":
        return on_qubit(np.cos(g.theta / 2) * I2 - 1j * np.sin(g.theta / 2) * Z, q, n)
    raise ValueError(g.kind)


def circuit_unitary(circuit):
    n = circuit.n_qubits
    u = np.eye(1 << n, dtype=complex)
    for g in circuit.gates:
        u = gate_matrix(g, n) @ u
    return u


def zz_rotation(qubits, theta, n):
    """exp(-i theta/2 Z..Z) built from its diagonal."""
    z = np.arange(1 << n)
    par = np.zeros(1 << n, dtype=int)
    for q in qubits:
        par ^= (z >> q) & 1
    return np.diag(np.exp(-0.5j * theta * (1 - 2 * par)))


# spin polynomials as {sorted tuple: Fraction}, with s*s = 1

def sp(const=0, **_):
    return {(): Fraction(const)}


def s(i):
    return {(i,): Fraction(1)}


def sadd(*ps):
    out = {}
    for p in ps:
        for k, v in p.items():
            out[k] = out.get(k, 0) + Fraction(v)
    return {k: v for k, v in out.items() if v}


def sscale(p, c):
    return {k: v * Fraction(c) for k, v in p.items() if v * Fraction(c)}


def smul(*ps):
    out = {(): Fraction(1)}
    for p in ps:
        nxt = {}
        for ka, va in out.items():
            for kb, vb in p.items():
                k = tuple(sorted(set(ka) ^ set(kb)))
                nxt[k] = nxt.get(k, 0) + va * vb
        out = {k: v for k, v in nxt.items() if v}
    return out


def binary(i):
    """x_i = (1 - s_i) / 2."""
    return sadd(sp(Fraction(1, 2)), sscale(s(i), Fraction(-1, 2)))


def nbinary(i):
    """1 - x_i = (1 + s_i) / 2."""
    return sadd(sp(Fraction(1, 2)), sscale(s(i), Fraction(1, 2)))


def as_dict(h):
    d = dict(h.terms)
    if h.constant:
        d[()] = h.constant
    return d


def bool_exprs(n_vars: int, max_leaves: int = 12):
    leaves = st.one_of(st.builds(Var, st.integers(0, n_vars - 1)), st.builds(Const, st.sampled_from((0, 1))))

    def grow(children):
        return st.one_of(
            st.builds(Not, children),
            st.builds(lambda cs: And(tuple(cs)), st.lists(children, min_size=1, max_size=3)),
            st.builds(lambda cs: Or(tuple(cs)), st.lists(children, min_size=1, max_size=3)),
            st.builds(Xor, children, children),
        )

    return st.recursive(leaves, grow, max_leaves=max_leaves)


def random_expr(rng: np.random.Generator, n_vars: int, depth: int = 4):
    if depth == 0 or rng.random() < 0.25:
        if rng.random() < 0.1:
            return Const(int(rng.integers(2)))
        return Var(int(rng.integers(n_vars)))
    kind = rng.integers(4)
    if kind == 0:
        return Not(random_expr(rng, n_vars, depth - 1))
    if kind == 3:
        return Xor(random_expr(rng, n_vars, depth - 1), random_expr(rng, n_vars, depth - 1))
    kids = tuple(random_expr(rng, n_vars, depth - 1) for _ in range(int(rng.integers(1, 4))))
    return And(kids) if kind == 1 else Or(kids)


# Closed-form Ising models of the objective's building blocks.
# Each entry: name -> (polynomial builder, expected spin dict).

def _F(a, b=1):
    return Fraction(a, b)


def _terms(den, pairs):
    return {tuple(k): _F(v, den) for k, v in pairs}


def _prod_not_dc(pairs):
    """prod over (d, c) of (1 - x_d * (1 - x_c))."""
    out = sp(1)
    for d, cs in pairs:
        inner = binary(d)
        for c in cs:
            inner = smul(inner, nbinary(c))
        out = smul(out, sadd(sp(1), sscale(inner, -1)))
    return out


def closed_forms():
    from faultq.boolpoly import MultilinearPoly, conj, disj, expand

    r, d, f, m = Var(0), Var(1), Var(2), Var(3)
    forms = {}

    # main relay mismatch; variables r, d, f, m
    forms["relay_main"] = (
        expand(Xor(r, disj(conj(d, Not(f)), m))), 4,
        _terms(8, [((), 4), ((0,), 1), ((0, 3), -3), ((0, 2), 1), ((0, 1), -1), ((0, 2, 3), 1),
                   ((0, 1, 2), -1), ((0, 1, 3), -1), ((0, 1, 2, 3), -1)]))

    # first back-up mismatch; variables r, d, r_main, f, m
    rj, f5, m5 = Var(2), Var(3), Var(4)
    forms["relay_first_backup"] = (
        expand(Xor(r, disj(conj(d, Not(rj), Not(f5)), m5))), 5,
        _terms(16, [((), 8), ((0,), 1), ((0, 4), -7), ((0, 3), 1), ((0, 2), 1), ((0, 1), -1),
                    ((0, 3, 4), 1), ((0, 2, 3), 1), ((0, 2, 4), 1), ((0, 1, 3), -1), ((0, 1, 4), -1),
                    ((0, 1, 2), -1), ((0, 2, 3, 4), 1), ((0, 1, 3, 4), -1), ((0, 1, 2, 3), -1),
                    ((0, 1, 2, 4), -1), ((0, 1, 2, 3, 4), -1)]))

    # second back-up mismatch; variables r, f, m, then (d, c...) blocks
    def second_backup(blocks):
        p = disj(*[conj(Var(dd), *[Not(Var(c)) for c in cs]) for dd, cs in blocks])
        poly = expand(Xor(Var(0), disj(conj(p, Not(Var(1))), Var(2))))
        left = sscale(sadd(sp(1), sscale(smul(s(0), s(2)), -1)), _F(1, 2))
        a = sscale(sadd(s(0), smul(s(0), s(1)), smul(s(0), s(2)), smul(s(0), s(1), s(2))), _F(1, 4))
        right = smul(a, sadd(sp(1), sscale(_prod_not_dc(blocks), -1)))
        n = 1 + max(max([dd, *cs]) for dd, cs in blocks)
        return poly, n, sadd(left, right)

    forms["relay_second_backup_1x1"] = second_backup([(3, [4])])
    forms["relay_second_backup_2x2"] = second_backup([(3, [4, 5]), (6, [7])])

    # breaker mismatch; variables c, f, m, relays...
    def breaker(k):
        relays = [Var(3 + i) for i in range(k)]
        poly = expand(Xor(Var(0), disj(conj(disj(*relays), Not(Var(1))), Var(2))))
        left = sscale(sadd(sp(1), sscale(smul(s(0), s(2)), -1)), _F(1, 2))
        a = sscale(sadd(s(0), smul(s(0), s(1)), smul(s(0), s(2)), smul(s(0), s(1), s(2))), _F(1, 4))
        prod = smul(*[nbinary(3 + i) for i in range(k)])
        right = smul(a, sadd(sp(1), sscale(prod, -1)))
        return poly, 3 + k, sadd(left, right)

    forms["breaker_1"] = breaker(1)
    forms["breaker_3"] = breaker(3)

    # alarm mismatch and failure counts
    forms["alarm_1"] = (expand(Xor(Var(0), Const(1))), 1, {(): _F(1, 2), (0,): _F(1, 2)})
    forms["alarm_0"] = (expand(Xor(Var(0), Const(0))), 1, {(): _F(1, 2), (0,): _F(-1, 2)})
    forms["failure_count"] = (MultilinearPoly.var(0) + MultilinearPoly.var(1), 2,
                              {(): _F(1), (0,): _F(-1, 2), (1,): _F(-1, 2)})

    # contradiction terms; p is the relay's pick-up condition
    def contradictions(p, rr, ff, mm):
        parts = [conj(ff, mm), conj(rr, ff), conj(Not(rr), mm), conj(p, mm), conj(Not(p), ff)]
        total = MultilinearPoly.const(0)
        for e in parts:
            total = total + expand(e)
        return total

    forms["contradiction_main"] = (
        contradictions(d, r, f, m), 4,
        _terms(4, [((), 5), ((2,), -3), ((3,), -3), ((2, 3), 1), ((0, 2), 1), ((0, 3), -1),
                   ((1, 3), 1), ((1, 2), -1)]))
    forms["contradiction_first_backup"] = (
        contradictions(conj(d, Not(rj)), r, f5, m5), 5,
        _terms(8, [((), 10), ((3,), -7), ((4,), -5), ((3, 4), 2), ((0, 3), 2), ((0, 4), -2),
                   ((1, 4), 1), ((2, 4), -1), ((2, 3), 1), ((1, 3), -1), ((1, 2, 4), 1),
                   ((1, 2, 3), -1)]))

    def contradiction_second(blocks):
        p = disj(*[conj(Var(dd), *[Not(Var(c)) for c in cs]) for dd, cs in blocks])
        poly = contradictions(p, Var(0), Var(1), Var(2))
        base = sadd(sp(_F(5, 4)), sscale(s(1), _F(-1, 2)), sscale(s(2), -1),
                    sscale(smul(s(1), s(2)), _F(1, 4)), sscale(smul(s(0), s(1)), _F(1, 4)),
                    sscale(smul(s(0), s(2)), _F(-1, 4)))
        tail = smul(sscale(sadd(s(2), sscale(s(1), -1)), _F(1, 2)), _prod_not_dc(blocks))
        n = 1 + max(max([dd, *cs]) for dd, cs in blocks)
        return poly, n, sadd(base, tail)

    forms["contradiction_second_backup_1x1"] = contradiction_second([(3, [4])])
    forms["contradiction_second_backup_2x2"] = contradiction_second([(3, [4, 5]), (6, [7])])

    def contradiction_breaker(k):
        relays = [Var(3 + i) for i in range(k)]
        poly = contradictions(disj(*relays), Var(0), Var(1), Var(2))
        prod = smul(*[nbinary(3 + i) for i in range(k)])
        inner = sadd(sp(5), sscale(s(1), -2), sscale(s(2), -4), smul(s(1), s(2)), smul(s(0), s(1)),
                     sscale(smul(s(0), s(2)), -1), smul(sadd(sscale(s(2), 2), sscale(s(1), -2)), prod))
        return poly, 3 + k, sscale(inner, _F(1, 4))

    forms["contradiction_breaker_1"] = contradiction_breaker(1)
    forms["contradiction_breaker_3"] = contradiction_breaker(3)
    return forms
