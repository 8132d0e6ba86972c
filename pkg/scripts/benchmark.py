"""Oracle wall-clock against the estimated QAOA hardware time on synthetic instances.

    python3 scripts/benchmark.py [--sizes 4,5,7,10,12] [--output bench.csv]
"""
import argparse
import csv
import sys
from collections import defaultdict
from statistics import mean

from faultq.cli import benchmark_rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="4,5,7,10,12")
    ap.add_argument("--instances", type=int, default=5)
    ap.add_argument("--level", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--output")
    args = ap.parse_args()
    rows = benchmark_rows([int(s) for s in args.sizes.split(",")], args.instances, args.level, args.seed)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            w = csv.DictWriter(fh, list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    agg = defaultdict(list)
    for r in rows:
        agg[(r["qubits"], r["solver"])].append(r["seconds"])
    w = csv.writer(sys.stdout)
    w.writerow(["qubits", "solver", "mean_seconds"])
    for (n, solver), secs in sorted(agg.items()):
        w.writerow([n, solver, f"{mean(secs):.6g}"])


if __name__ == "__main__":
    main()
