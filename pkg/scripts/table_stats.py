"""Circuit statistics of the bundled cases next to the reference values.

    python3 scripts/table_stats.py [--levels 1,10]
"""
import argparse
import json

from faultq.circuit import build_qaoa_circuit, circuit_stats
from faultq.gridmodel import (AlarmSnapshot, bundled_path, bundled_topology, build_full_model,
                              build_simplified_model)
from faultq.timing import estimate

ROWS = [  # label, case, model, reference qubits / depth / gates
    ("case 1 SPEC", "case1", "spec", 9, 59, 83),
    ("case 1 without SPEC", "case1", "nospec", 13, 163, 198),
    ("test 1", "test1", "simplified", 2, 6, 9),
    ("test 3", "test3", "simplified", 4, 20, 29),
    ("test 6", "test6", "simplified", 5, 59, 71),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--levels", default="1,10")
    args = ap.parse_args()
    levels = [int(k) for k in args.levels.split(",")]
    topo = bundled_topology()
    print(f"{'row':<20} {'k':>3} {'qubits':>6} {'depth':>6} {'gates':>6} {'d-H':>5} {'g-H':>5} "
          f"{'reference':>12} {'T_sr (s)':>10}")
    for label, name, kind, q, d, g in ROWS:
        alarms = AlarmSnapshot.from_dict(json.loads(bundled_path(f"cases/{name}.json").read_text()))
        if kind == "simplified":
            model = build_simplified_model(topo, alarms)
        else:
            model = build_full_model(topo, alarms, use_spec=kind == "spec")
        for k in levels:
            s = circuit_stats(build_qaoa_circuit(model.ising, [0.0] * k, [0.0] * k))
            print(f"{label:<20} {k:>3} {s['qubits']:>6} {s['depth']:>6} {s['gates']:>6} "
                  f"{s['depth_without_h']:>5} {s['gates_without_h']:>5} {f'{q}/{d}/{g}':>12} "
                  f"{estimate(s['depth']).single_repetition:>10.3e}")


if __name__ == "__main__":
    main()
