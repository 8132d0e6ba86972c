"""Seeded synthetic diagnosis instances of a chosen size, for timing sweeps.

A radial feeder of ``n`` busbars hangs off one source. Every busbar has a
main relay tripping both adjacent breakers and a first back-up relay. A
random non-empty set of buses is faulted and the alarms are what healthy
protection would report, with every bus listed as suspected so that the
simplified model has exactly ``n`` qubits.
"""
from __future__ import annotations

import numpy as np

from .gridmodel import AlarmSnapshot, Topology, build_simplified_model, DiagnosisModel


def feeder_topology(n: int) -> Topology:
    if n < 1:
        raise ValueError("feeder needs at least one bus")
    buses = [f"B{i}" for i in range(1, n + 1)]
    nodes = ["S"] + buses + ["END"]
    doc = {
        "name": f"feeder{n}",
        "sources": ["S"],
        "components": [{"id": b, "kind": "busbar"} for b in buses],
        "breakers": [{"id": f"CB{i}", "nodes": [nodes[i - 1], nodes[i]]} for i in range(1, n + 2)],
        "relays": [],
    }
    for i, b in enumerate(buses, 1):
        trips = [f"CB{i}", f"CB{i + 1}"]
        doc["relays"].append({"id": f"{b}m", "kind": "main", "protects": b, "trips": trips})
        doc["relays"].append({"id": f"{b}p", "kind": "first_backup", "protects": b,
                              "main": f"{b}m", "trips": trips})
    return Topology.from_dict(doc)


def feeder_alarms(topology: Topology, faulted) -> AlarmSnapshot:
    faulted = set(faulted)
    relays = {r.id for r in topology.relays if r.kind == "main" and r.protects in faulted}
    breakers = {cb for r in topology.relays if r.id in relays for cb in r.trips}
    return AlarmSnapshot(frozenset(relays), frozenset(breakers),
                         tuple(c.id for c in topology.components))


def instance(n: int, seed: int) -> DiagnosisModel:
    rng = np.random.default_rng(seed)
    topo = feeder_topology(n)
    buses = [c.id for c in topo.components]
    k = int(rng.integers(1, max(1, n // 3) + 1))
    faulted = rng.choice(buses, size=k, replace=False)
    return build_simplified_model(topo, feeder_alarms(topo, faulted))


def instances(n: int, count: int = 5, seed: int = 0) -> list[DiagnosisModel]:
    return [instance(n, seed * 1000 + 31 * n + i) for i in range(count)]
