"""Solve the bundled cases with the oracle and QAOA and print a comparison table.

    python3 scripts/reproduce_cases.py [--level 10] [--restarts 5] [--seed 0]
"""
import argparse
import json

from faultq.exact import solve_exhaustive, verify_against_qaoa
from faultq.gridmodel import (AlarmSnapshot, bundled_path, bundled_topology, build_full_model,
                              build_simplified_model, decode_hypothesis)
from faultq.qaoa import QaoaConfig, optimize

CASES = [("case1", "full", 100), ("case2", "full", 130)] + \
        [(f"test{t}", "simplified", 100) for t in range(1, 7)]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--level", type=int, default=10)
    ap.add_argument("--restarts", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--no-qaoa", action="store_true")
    args = ap.parse_args()

    topo = bundled_topology()
    for name, kind, iters in CASES:
        doc = json.loads(bundled_path(f"cases/{name}.json").read_text())
        alarms = AlarmSnapshot.from_dict(doc)
        model = build_full_model(topo, alarms) if kind == "full" else build_simplified_model(topo, alarms)
        ex = solve_exhaustive(model)
        best = decode_hypothesis([int(b) for b in ex.best.bits], model.layout)
        print(f"{name:<13} {kind:<10} n={model.num_qubits:<2} oracle {ex.best.bits} "
              f"E={ex.min_energy} ({len(ex.optimal)} optimal)  {best.summary}")
        if "expected_bits" in doc:
            print(f"{'':<13} expected {doc['expected_bits']} is optimal: {doc['expected_bits'] in ex.optimal}")
        if args.no_qaoa:
            continue
        cfg = QaoaConfig(level=args.level, max_iterations=iters, restarts=args.restarts, seed=args.seed)
        res = optimize(model, cfg)
        v = verify_against_qaoa(ex, res)
        print(f"{'':<13} QAOA top {res.top.bits} p={res.top.probability:.3f} E={res.top.energy} "
              f"match={v.match} optimum rank={v.oracle_rank} F={res.value:.4f}")


if __name__ == "__main__":
    main()
