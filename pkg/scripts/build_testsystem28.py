"""Write the bundled 28-component test system (components, breakers, relays) as JSON.

Connectivity is a reconstruction: bus/transformer/line adjacency and breaker
numbering were chosen to agree with the reference alarm scenarios (Cases 1-2
and the six simplified-model tests); only the counts (28/40/84) and names are
taken as given.
"""
import json
import sys
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "faultq" / "data" / "testsystem28.json"

BREAKERS = {
    1: ("G1", "A1"), 2: ("A1", "T1"), 3: ("A1", "T2"), 4: ("T1", "B1"), 5: ("B1", "L1"),
    6: ("T2", "B2"), 7: ("B1", "B2"), 8: ("B2", "LD2"), 9: ("B3", "L3"), 10: ("B2", "L4"),
    11: ("B1", "L2"), 12: ("L2", "B4"), 13: ("L1", "B3"), 14: ("G2", "A2"), 15: ("A2", "T3"),
    16: ("A2", "T4"), 17: ("T3", "B3"), 18: ("T4", "B4"), 19: ("B4", "L5"), 20: ("L5", "B5"),
    21: ("G3", "A3"), 22: ("A3", "T6"), 23: ("A3", "G5"), 24: ("A3", "T5"), 25: ("T5", "B5"),
    26: ("L3", "B6"), 27: ("B5", "L6"), 28: ("L4", "B6"), 29: ("B5", "L7"), 30: ("T6", "B6"),
    31: ("L6", "B7"), 32: ("B7", "L8"), 33: ("L7", "B8"), 34: ("T7", "B8"), 35: ("L8", "B8"),
    36: ("A4", "T8"), 37: ("A4", "T7"), 38: ("A4", "G4"), 39: ("B3", "B4"), 40: ("T8", "B7"),
}
# transformer: (high-side breaker, low-side breaker, low-side bus)
TRANSFORMERS = {
    "T1": (2, 4, "B1"), "T2": (3, 6, "B2"), "T3": (15, 17, "B3"), "T4": (16, 18, "B4"),
    "T5": (24, 25, "B5"), "T6": (22, 30, "B6"), "T7": (37, 34, "B8"), "T8": (36, 40, "B7"),
}
# line: (sending bus, sending breaker, receiving bus, receiving breaker)
LINES = {
    "L1": ("B1", 5, "B3", 13), "L2": ("B1", 11, "B4", 12), "L3": ("B3", 9, "B6", 26),
    "L4": ("B2", 10, "B6", 28), "L5": ("B4", 19, "B5", 20), "L6": ("B5", 27, "B7", 31),
    "L7": ("B5", 29, "B8", 33), "L8": ("B7", 32, "B8", 35),
}
SOURCES = ["G1", "G2", "G3", "G4", "G5"]


def cb(n):
    return f"CB{n}"


def build():
    buses = [f"A{i}" for i in range(1, 5)] + [f"B{i}" for i in range(1, 9)]
    components = [{"id": b, "kind": "busbar"} for b in buses]
    components += [{"id": t, "kind": "transformer"} for t in TRANSFORMERS]
    components += [{"id": l, "kind": "line"} for l in LINES]
    breakers = [{"id": cb(n), "nodes": list(BREAKERS[n])} for n in sorted(BREAKERS)]

    relays = []
    for b in buses:
        trips = [cb(n) for n in sorted(BREAKERS) if b in BREAKERS[n]]
        relays.append({"id": f"{b}m", "kind": "main", "protects": b, "trips": trips})
    for t, (hi, lo, _) in TRANSFORMERS.items():
        relays.append({"id": f"{t}m", "kind": "main", "protects": t, "trips": [cb(hi), cb(lo)]})
    for l, (_, s, _, r) in LINES.items():
        relays.append({"id": f"{l}Sm", "kind": "main", "protects": l, "trips": [cb(s)]})
        relays.append({"id": f"{l}Rm", "kind": "main", "protects": l, "trips": [cb(r)]})
    for t, (hi, lo, _) in TRANSFORMERS.items():
        relays.append({"id": f"{t}p", "kind": "first_backup", "protects": t, "main": f"{t}m",
                       "trips": [cb(hi), cb(lo)]})
    for l, (_, s, _, r) in LINES.items():
        relays.append({"id": f"{l}Sp", "kind": "first_backup", "protects": l, "main": f"{l}Sm",
                       "trips": [cb(s)]})
        relays.append({"id": f"{l}Rp", "kind": "first_backup", "protects": l, "main": f"{l}Rm",
                       "trips": [cb(r)]})
    for t, (hi, lo, bus) in TRANSFORMERS.items():
        relays.append({"id": f"{t}s", "kind": "second_backup", "protects": t, "trips": [cb(hi)],
                       "region": [{"component": bus, "path": [cb(lo)]}]})
    for l, (sbus, s, rbus, r) in LINES.items():
        relays.append({"id": f"{l}Ss", "kind": "second_backup", "protects": l, "trips": [cb(s)],
                       "region": [{"component": rbus, "path": [cb(r)]}]})
        relays.append({"id": f"{l}Rs", "kind": "second_backup", "protects": l, "trips": [cb(r)],
                       "region": [{"component": sbus, "path": [cb(s)]}]})
    assert len(components) == 28 and len(breakers) == 40 and len(relays) == 84
    return {"name": "testsystem28", "sources": SOURCES, "components": components,
            "breakers": breakers, "relays": relays}


if __name__ == "__main__":
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else OUT
    out.write_text(json.dumps(build(), indent=1) + "\n")
    print(f"wrote {out}")
