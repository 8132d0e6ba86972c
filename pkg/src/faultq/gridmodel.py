"""Protection topology, alarms, action-logic expectations and diagnosis objectives."""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .boolpoly import (
    DEFAULT_DEGREE_CAP,
    BoolExpr,
    Const,
    DegreeCapError,
    IsingHamiltonian,
    MultilinearPoly,
    Not,
    Var,
    Xor,
    conj,
    disj,
    expand,
    substitute,
    to_ising,
)

COMPONENT_KINDS = ("busbar", "transformer", "line")
RELAY_KINDS = ("main", "first_backup", "second_backup")
ROLES = ("d", "r", "c", "f_r", "f_c", "m_r", "m_c")
DEFAULT_WEIGHTS = (1, 1, 1, 40)


class TopologyError(ValueError):
    pass


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class Component:
    id: str
    kind: str
    label: str = ""


@dataclass(frozen=True)
class Breaker:
    id: str
    nodes: tuple[str, str]
    label: str = ""


@dataclass(frozen=True)
class RegionEntry:
    component: str
    path: tuple[str, ...]


@dataclass(frozen=True)
class Relay:
    id: str
    kind: str
    protects: str
    trips: tuple[str, ...]
    main: str | None = None
    region: tuple[RegionEntry, ...] = ()
    label: str = ""


@dataclass(frozen=True)
class Topology:
    components: tuple[Component, ...]
    breakers: tuple[Breaker, ...]
    relays: tuple[Relay, ...]
    sources: tuple[str, ...] = ()
    name: str = ""

    def __post_init__(self):
        by_id = {}
        object.__setattr__(self, "_by_id", by_id)
        for group in (self.components, self.breakers, self.relays):
            for e in group:
                if e.id in by_id:
                    raise TopologyError(f"duplicate id {e.id!r}")
                by_id[e.id] = e
        comps = {c.id for c in self.components}
        brks = {b.id for b in self.breakers}
        for c in self.components:
            if c.kind not in COMPONENT_KINDS:
                raise TopologyError(f"component {c.id}: unknown kind {c.kind!r}")
        for r in self.relays:
            if r.kind not in RELAY_KINDS:
                raise TopologyError(f"relay {r.id}: unknown kind {r.kind!r}")
            if r.protects not in comps:
                raise TopologyError(f"relay {r.id} protects unknown component {r.protects!r}")
            for cb in r.trips:
                if cb not in brks:
                    raise TopologyError(f"relay {r.id} trips unknown breaker {cb!r}")
            if r.kind == "first_backup":
                m = self._by_id.get(r.main)
                if not isinstance(m, Relay) or m.kind != "main" or m.protects != r.protects:
                    raise TopologyError(
                        f"first back-up {r.id}: {r.main!r} is not a main relay of {r.protects}")
            if r.kind == "second_backup":
                for entry in r.region:
                    if entry.component not in comps:
                        raise TopologyError(f"relay {r.id}: region component {entry.component!r} unknown")
                    if entry.component != r.protects and not entry.path:
                        raise TopologyError(f"relay {r.id}: empty breaker path for {entry.component}")
                    for cb in entry.path:
                        if cb not in brks:
                            raise TopologyError(f"relay {r.id}: path breaker {cb!r} unknown")
        everything = self.components + self.breakers + self.relays
        object.__setattr__(self, "_order", {e.id: i for i, e in enumerate(everything)})

    def __getitem__(self, key: str):
        return self._by_id[key]

    def __contains__(self, key: str) -> bool:
        return key in self._by_id

    def order(self, ids: Iterable[str]) -> list[str]:
        return sorted(set(ids), key=self._order.__getitem__)

    def triggers(self, breaker: str) -> list[str]:
        """R(c): relays able to trip ``breaker``."""
        return [r.id for r in self.relays if breaker in r.trips]

    def boundary(self, component: str) -> list[str]:
        return [b.id for b in self.breakers if component in b.nodes]

    @classmethod
    def from_dict(cls, doc: Mapping) -> "Topology":
        try:
            comps = tuple(Component(c["id"], c["kind"], c.get("label", c["id"])) for c in doc["components"])
            brks = tuple(Breaker(b["id"], tuple(b["nodes"]), b.get("label", b["id"])) for b in doc["breakers"])
            relays = []
            for r in doc["relays"]:
                region = tuple(RegionEntry(e["component"], tuple(e.get("path", ())))
                               for e in r.get("region", ()))
                relays.append(Relay(r["id"], r["kind"], r["protects"], tuple(r.get("trips", ())),
                                    r.get("main"), region, r.get("label", r["id"])))
        except KeyError as exc:
            raise TopologyError(f"topology document is missing field {exc}") from None
        for b in brks:
            if len(b.nodes) != 2:
                raise TopologyError(f"breaker {b.id} must connect exactly two nodes")
        return cls(comps, brks, tuple(relays), tuple(doc.get("sources", ())), doc.get("name", ""))

    def to_dict(self) -> dict:
        def relay(r: Relay) -> dict:
            d = {"id": r.id, "kind": r.kind, "protects": r.protects, "trips": list(r.trips)}
            if r.main:
                d["main"] = r.main
            if r.region:
                d["region"] = [{"component": e.component, "path": list(e.path)} for e in r.region]
            return d

        return {
            "name": self.name,
            "sources": list(self.sources),
            "components": [{"id": c.id, "kind": c.kind} for c in self.components],
            "breakers": [{"id": b.id, "nodes": list(b.nodes)} for b in self.breakers],
            "relays": [relay(r) for r in self.relays],
        }


def _read_json(path) -> dict:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise TopologyError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def load_topology(path) -> Topology:
    return Topology.from_dict(_read_json(path))


def bundled_path(name: str) -> Path:
    return Path(resources.files("faultq") / "data" / name)


def bundled_topology() -> Topology:
    return load_topology(bundled_path("testsystem28.json"))


@dataclass(frozen=True)
class AlarmSnapshot:
    operated_relays: frozenset[str]
    tripped_breakers: frozenset[str]
    suspected: tuple[str, ...] | None = None

    @classmethod
    def from_dict(cls, doc: Mapping) -> "AlarmSnapshot":
        if "operated_relays" not in doc or "tripped_breakers" not in doc:
            raise TopologyError("alarm document needs 'operated_relays' and 'tripped_breakers'")
        sus = doc.get("suspected_components")
        return cls(frozenset(doc["operated_relays"]), frozenset(doc["tripped_breakers"]),
                   tuple(sus) if sus is not None else None)

    def validate(self, topology: Topology):
        for rid in self.operated_relays:
            if not isinstance(topology._by_id.get(rid), Relay):
                raise TopologyError(f"alarm names unknown relay {rid!r}")
        for cid in self.tripped_breakers:
            if not isinstance(topology._by_id.get(cid), Breaker):
                raise TopologyError(f"alarm names unknown breaker {cid!r}")

    def state(self, entity: str) -> int:
        return int(entity in self.operated_relays or entity in self.tripped_breakers)


def load_alarms(path) -> AlarmSnapshot:
    return AlarmSnapshot.from_dict(_read_json(path))


# --------------------------------------------------------------------------
# Outage region


@dataclass(frozen=True)
class OutageRegion:
    components: tuple[str, ...]
    relays: tuple[str, ...]
    breakers: tuple[str, ...]


def _energized(topology: Topology, tripped: frozenset[str]) -> set[str]:
    adj: dict[str, set[str]] = {}
    for b in topology.breakers:
        if b.id in tripped:
            continue
        u, v = b.nodes
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    seen = set(topology.sources)
    stack = list(seen)
    while stack:
        for nxt in adj.get(stack.pop(), ()):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def related_entities(topology: Topology, suspected: Sequence[str]) -> OutageRegion:
    sus = set(suspected)
    relays, breakers = [], set()
    for r in topology.relays:
        if r.kind == "second_backup":
            hits = [e for e in r.region if e.component in sus]
            if hits:
                relays.append(r.id)
                for e in hits:
                    breakers.update(e.path)
        elif r.protects in sus:
            relays.append(r.id)
    for b in topology.breakers:
        if sus.intersection(b.nodes):
            breakers.add(b.id)
    return OutageRegion(tuple(topology.order(sus)), tuple(topology.order(relays)),
                        tuple(topology.order(breakers)))


def identify_outage_region(
    topology: Topology, tripped: Iterable[str], suspected: Sequence[str] | None = None
) -> OutageRegion:
    """Suspected components plus the relays and breakers that bear on them.

    A component is suspected when no closed-breaker path reaches a source, or
    when more than half of its boundary breakers tripped (which still flags a
    component whose clearing was left incomplete by a failed breaker).
    ``suspected`` bypasses the search.
    """
    tripped = frozenset(tripped)
    if not tripped:
        raise ModelError("no outage evidence: no tripped breakers")
    for cb in tripped:
        if not isinstance(topology._by_id.get(cb), Breaker):
            raise TopologyError(f"unknown breaker {cb!r}")
    if suspected is None:
        live = _energized(topology, tripped)
        found = []
        for c in topology.components:
            bnd = topology.boundary(c.id)
            opened = sum(b in tripped for b in bnd)
            if c.id not in live or (bnd and 2 * opened > len(bnd)):
                found.append(c.id)
        suspected = found
    else:
        for cid in suspected:
            if not isinstance(topology._by_id.get(cid), Component):
                raise TopologyError(f"unknown component {cid!r}")
    if not suspected:
        raise ModelError("no suspected components")
    return related_entities(topology, suspected)


# --------------------------------------------------------------------------
# Hypothesis layout


@dataclass(frozen=True)
class VarDesc:
    name: str
    role: str
    entity: str


@dataclass(frozen=True)
class HypothesisLayout:
    variables: tuple[VarDesc, ...]
    fixed: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "fixed", dict(sorted(dict(self.fixed).items())))
        object.__setattr__(self, "_index", {(v.role, v.entity): i for i, v in enumerate(self.variables)})
        for i in self.fixed:
            if not 0 <= i < len(self.variables):
                raise ModelError(f"fixed index {i} out of range")

    @classmethod
    def build(cls, components: Sequence[str], relays: Sequence[str], breakers: Sequence[str],
              failures: bool = True) -> "HypothesisLayout":
        """D, R, C blocks then (when ``failures``) F = (f_r, f_c) and M = (m_r, m_c)."""
        vs = [VarDesc(c, "d", c) for c in components]
        vs += [VarDesc(r, "r", r) for r in relays]
        vs += [VarDesc(c, "c", c) for c in breakers]
        if failures:
            vs += [VarDesc(f"f_{r}", "f_r", r) for r in relays]
            vs += [VarDesc(f"f_{c}", "f_c", c) for c in breakers]
            vs += [VarDesc(f"m_{r}", "m_r", r) for r in relays]
            vs += [VarDesc(f"m_{c}", "m_c", c) for c in breakers]
        return cls(tuple(vs))

    def index(self, role: str, entity: str) -> int:
        return self._index[(role, entity)]

    def has(self, role: str, entity: str) -> bool:
        return (role, entity) in self._index

    def var(self, role: str, entity: str) -> Var:
        return Var(self.index(role, entity))

    def entities(self, role: str) -> list[str]:
        return [v.entity for v in self.variables if v.role == role]

    @property
    def free(self) -> list[int]:
        return [i for i in range(len(self.variables)) if i not in self.fixed]

    @property
    def qubit_of(self) -> dict[int, int]:
        return {v: q for q, v in enumerate(self.free)}

    @property
    def free_names(self) -> list[str]:
        return [self.variables[i].name for i in self.free]

    def with_fixed(self, fixings: Mapping[int, int]) -> "HypothesisLayout":
        merged = dict(self.fixed)
        merged.update(fixings)
        return HypothesisLayout(self.variables, merged)

    def expand_bits(self, bits: Sequence[int]) -> list[int]:
        """Full assignment (all variables) from free-variable bits."""
        free = self.free
        if len(bits) != len(free):
            raise ModelError(f"expected {len(free)} bits, got {len(bits)}")
        full = [0] * len(self.variables)
        for i, b in self.fixed.items():
            full[i] = b
        for i, b in zip(free, bits):
            full[i] = int(b)
        return full


def apply_spec(layout: HypothesisLayout, alarms: AlarmSnapshot) -> HypothesisLayout:
    """Small-probability-event fixings: no alarm => no mal operation, alarm => no failure."""
    fix = {}
    for role, prefix in (("r", "_r"), ("c", "_c")):
        for ent in layout.entities(role):
            if alarms.state(ent):
                key = ("f" + prefix, ent)
            else:
                key = ("m" + prefix, ent)
            if layout.has(*key):
                fix[layout.index(*key)] = 0
    return layout.with_fixed(fix)


# --------------------------------------------------------------------------
# Action logic


@dataclass(frozen=True)
class Expectation:
    action: BoolExpr      # p: protection logic alone
    expected: BoolExpr    # r* / c*: with failed and mal operation folded in


def _with_failures(p: BoolExpr, layout: HypothesisLayout, frole: str, mrole: str, ent: str) -> BoolExpr:
    if not layout.has(frole, ent):
        return p
    return disj(conj(p, Not(layout.var(frole, ent))), layout.var(mrole, ent))


def relay_action(topology: Topology, layout: HypothesisLayout, rid: str) -> BoolExpr:
    relay = topology[rid]
    suspected = set(layout.entities("d"))
    if relay.kind == "second_backup":
        terms = []
        for e in relay.region:
            if e.component in suspected:
                terms.append(conj(layout.var("d", e.component),
                                  *[Not(layout.var("c", cb)) for cb in e.path]))
        return disj(*terms) if terms else Const(0)
    if relay.protects not in suspected:
        raise ModelError(f"relay {rid} protects {relay.protects}, which is not a suspected component")
    d = layout.var("d", relay.protects)
    if relay.kind == "main":
        return d
    if not layout.has("r", relay.main):
        raise ModelError(f"first back-up {rid}: main relay {relay.main} is not in the hypothesis")
    return conj(d, Not(layout.var("r", relay.main)))


def breaker_action(topology: Topology, layout: HypothesisLayout, cid: str,
                   relay_terms: Mapping[str, BoolExpr] | None = None) -> BoolExpr:
    """p_c: any related relay in R(c) operates.

    ``relay_terms`` replaces each relay's actual-state variable by another
    expression (the simplified model passes the relays' expected states).
    """
    related = set(layout.entities("r"))
    trig = [r for r in topology.triggers(cid) if r in related]
    if not trig:
        return Const(0)
    if relay_terms is None:
        return disj(*[layout.var("r", r) for r in trig])
    return disj(*[relay_terms[r] for r in trig])


def expected_state_exprs(topology: Topology, layout: HypothesisLayout,
                         breaker_from_expected: bool = False) -> dict[str, Expectation]:
    out: dict[str, Expectation] = {}
    for rid in layout.entities("r"):
        p = relay_action(topology, layout, rid)
        out[rid] = Expectation(p, _with_failures(p, layout, "f_r", "m_r", rid))
    relay_terms = {rid: e.expected for rid, e in out.items()} if breaker_from_expected else None
    for cid in layout.entities("c"):
        p = breaker_action(topology, layout, cid, relay_terms)
        out[cid] = Expectation(p, _with_failures(p, layout, "f_c", "m_c", cid))
    return out


# --------------------------------------------------------------------------
# Objectives


@dataclass(frozen=True)
class DiagnosisModel:
    layout: HypothesisLayout
    weights: tuple
    poly: MultilinearPoly          # over free variables, qubit order
    ising: IsingHamiltonian
    full_poly: MultilinearPoly     # over every layout variable
    kind: str = "full"
    spec: bool = True

    @property
    def num_qubits(self) -> int:
        return len(self.layout.free)

    def __post_init__(self):
        if self.ising.num_spins != len(self.layout.free):
            raise ModelError("Ising width does not match the free-variable count")


def _expand_named(expr: BoolExpr, who: str, degree_cap: int) -> MultilinearPoly:
    try:
        return expand(expr, degree_cap)
    except DegreeCapError as exc:
        raise DegreeCapError(f"{who}: {exc}") from None


def _alarm_mismatch(x: MultilinearPoly, alarm: int) -> MultilinearPoly:
    return 1 - x if alarm else x


def _finish(layout, weights, full, kind, spec) -> DiagnosisModel:
    reduced, _ = substitute(full, layout.fixed, len(layout.variables))
    n = len(layout.free)
    return DiagnosisModel(layout, tuple(weights), reduced, to_ising(reduced, n), full, kind, spec)


def _check_weights(weights) -> tuple[Fraction, ...]:
    w = tuple(Fraction(x) for x in weights)
    if len(w) != 4:
        raise ModelError("exactly four weights are required")
    if w[3] < 10 * max(w[:3]):
        warnings.warn(f"contradiction weight {w[3]} is not much larger than {max(w[:3])}", stacklevel=3)
    return w


def full_objective(topology: Topology, layout: HypothesisLayout, alarms: AlarmSnapshot,
                   weights=DEFAULT_WEIGHTS, degree_cap: int = DEFAULT_DEGREE_CAP) -> MultilinearPoly:
    w1, w2, w3, w4 = _check_weights(weights)
    exprs = expected_state_exprs(topology, layout)
    total = MultilinearPoly.const(0)
    for role, frole, mrole in (("r", "f_r", "m_r"), ("c", "f_c", "m_c")):
        for ent in layout.entities(role):
            x = layout.var(role, ent)
            f, m = layout.var(frole, ent), layout.var(mrole, ent)
            e = exprs[ent]
            xp = MultilinearPoly.var(x.index)
            fp, mp = MultilinearPoly.var(f.index), MultilinearPoly.var(m.index)
            pp = _expand_named(e.action, ent, degree_cap)
            total += _expand_named(Xor(x, e.expected), ent, degree_cap).scale(w1)
            total += _alarm_mismatch(xp, alarms.state(ent)).scale(w2)
            total += (fp + mp).scale(w3)
            contra = (fp.mul(mp) + xp.mul(fp) + (1 - xp).mul(mp)
                      + pp.mul(mp, degree_cap) + (1 - pp).mul(fp, degree_cap))
            total += contra.scale(w4)
    return total


def build_full_model(topology: Topology, alarms: AlarmSnapshot, weights=DEFAULT_WEIGHTS,
                     use_spec: bool = True, region: OutageRegion | None = None,
                     degree_cap: int = DEFAULT_DEGREE_CAP) -> DiagnosisModel:
    alarms.validate(topology)
    if region is None:
        region = identify_outage_region(topology, alarms.tripped_breakers, alarms.suspected)
    layout = HypothesisLayout.build(region.components, region.relays, region.breakers)
    full = full_objective(topology, layout, alarms, weights, degree_cap)
    if use_spec:
        layout = apply_spec(layout, alarms)
    return _finish(layout, weights, full, "full", use_spec)


def build_simplified_model(topology: Topology, alarms: AlarmSnapshot,
                           region: OutageRegion | None = None, breaker_from_expected: bool = True,
                           degree_cap: int = DEFAULT_DEGREE_CAP) -> DiagnosisModel:
    """Objective over suspected components only; relay and breaker states are the alarms.

    With ``breaker_from_expected`` a breaker's expectation is driven by the
    expected states of its relays; otherwise by their alarm states, which
    makes every breaker term a constant.
    """
    alarms.validate(topology)
    if region is None:
        region = identify_outage_region(topology, alarms.tripped_breakers, alarms.suspected)
    if not region.components:
        raise ModelError("no suspected components")
    layout = HypothesisLayout.build(region.components, region.relays, region.breakers, failures=False)
    exprs = expected_state_exprs(topology, layout, breaker_from_expected)
    full = MultilinearPoly.const(0)
    for role in ("r", "c"):
        for ent in layout.entities(role):
            full += _expand_named(Xor(layout.var(role, ent), exprs[ent].expected), ent, degree_cap)
    fix = {layout.index(role, ent): alarms.state(ent)
           for role in ("r", "c") for ent in layout.entities(role)}
    layout = layout.with_fixed(fix)
    return _finish(layout, (1, 1, 0, 0), full, "simplified", False)


# --------------------------------------------------------------------------
# Decoding


@dataclass(frozen=True)
class FaultHypothesis:
    values: dict            # variable name -> bit, every layout variable
    faulted: tuple[str, ...]
    verdicts: tuple[str, ...]

    @property
    def summary(self) -> str:
        return "; ".join(self.verdicts)


def decode_hypothesis(bits: Sequence[int], layout: HypothesisLayout) -> FaultHypothesis:
    full = layout.expand_bits(bits)
    val = {(v.role, v.entity): full[i] for i, v in enumerate(layout.variables)}
    get = lambda role, ent: val.get((role, ent), 0)
    verdicts = []
    faulted = tuple(c for c in layout.entities("d") if get("d", c))
    if faulted:
        verdicts.append(", ".join(faulted) + " faulty")
    for r in layout.entities("r"):
        if get("f_r", r):
            verdicts.append(f"{r} failed to operate")
        elif get("r", r) and get("m_r", r):
            verdicts.append(f"{r} mal-operated")
        elif get("r", r):
            verdicts.append(f"{r} operated")
    groups = {"tripped": [], "mal-tripped": [], "failed to trip": []}
    for c in layout.entities("c"):
        if get("f_c", c):
            groups["failed to trip"].append(c)
        if get("c", c):
            groups["mal-tripped" if get("m_c", c) else "tripped"].append(c)
    for label, items in groups.items():
        if items:
            verdicts.append(", ".join(items) + " " + label)
    if not verdicts:
        verdicts.append("no fault, no actions")
    names = {v.name: full[i] for i, v in enumerate(layout.variables)}
    return FaultHypothesis(names, faulted, tuple(verdicts))


def format_bits(bits: Sequence[int]) -> str:
    return "".join(str(int(b)) for b in bits)
