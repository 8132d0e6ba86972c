"""faultq command line: diagnose, circuit-stats, time-estimate, benchmark."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import synthetic, timing
from .boolpoly import DegreeCapError, poly_table
from .circuit import build_qaoa_circuit, circuit_stats
from .exact import solve_enumerate, solve_exhaustive, verify_against_qaoa
from .gridmodel import (ModelError, TopologyError, bundled_path, build_full_model,
                        build_simplified_model, decode_hypothesis, identify_outage_region,
                        load_alarms, load_topology)
from .qaoa import QaoaConfig, optimize
from .simulator import WidthError, bitstring

SCHEMA_VERSION = "1.0"


class CliError(Exception):
    pass


def schema_path() -> Path:
    return bundled_path("schema/result.schema.json")


def _resolve(arg: str, bundled_dir: str = "") -> Path:
    """A filesystem path, or the name of a bundled data file."""
    p = Path(arg)
    if p.exists():
        return p
    for name in (arg, arg + ".json"):
        q = bundled_path(f"{bundled_dir}{name}")
        if q.exists():
            return q
    raise CliError(f"{arg}: no such file")


def _weights(text: str) -> tuple[Fraction, ...]:
    try:
        w = tuple(Fraction(x) for x in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad weights {text!r}") from None
    if len(w) != 4:
        raise argparse.ArgumentTypeError("--weights takes four comma-separated numbers")
    return w


def _hyp(bits: str, layout) -> dict:
    h = decode_hypothesis([int(b) for b in bits], layout)
    return {"faulted": list(h.faulted), "verdicts": list(h.verdicts)}


def build_model(args):
    topo = load_topology(_resolve(args.topology))
    alarms = load_alarms(_resolve(args.alarms, "cases/"))
    alarms.validate(topo)
    region = identify_outage_region(topo, alarms.tripped_breakers, alarms.suspected)
    if args.simplified:
        model = build_simplified_model(topo, alarms, region)
    else:
        model = build_full_model(topo, alarms, args.weights, use_spec=not args.no_spec, region=region)
    return model, region


def model_record(model, region) -> dict:
    return {
        "kind": model.kind,
        "spec": model.spec,
        "weights": [str(Fraction(w)) for w in model.weights],
        "num_qubits": model.num_qubits,
        "free_variables": model.layout.free_names,
        "region": {"components": list(region.components), "relays": list(region.relays),
                   "breakers": list(region.breakers)},
        "ising_terms": len(model.ising.terms),
    }


def _config(args, level=None) -> QaoaConfig:
    return QaoaConfig(level=args.level if level is None else level, max_iterations=args.iterations,
                      restarts=args.restarts, seed=args.seed, optimizer=args.optimizer, init=args.init)


def diagnose(args) -> dict:
    model, region = build_model(args)
    out = {"schema_version": SCHEMA_VERSION, "command": "diagnose", "model": model_record(model, region)}
    layout = model.layout
    exact = qres = None
    if args.solver in ("exact", "both"):
        exact = solve_exhaustive(model)
        out["exact"] = {
            "min_energy": str(exact.min_energy),
            "max_energy": str(exact.entries[-1].energy),
            "optimal": list(exact.optimal),
            "unique": exact.unique,
            "ranked": [{"bits": e.bits, "energy": str(e.energy), "hypothesis": _hyp(e.bits, layout)}
                       for e in exact.entries[: args.top]],
        }
    if args.solver in ("qaoa", "both"):
        cfg = _config(args)
        qres = optimize(model, cfg, top_n=args.top)
        out["qaoa"] = {
            "config": dict(cfg.__dict__),
            "gammas": qres.gammas.tolist(),
            "betas": qres.betas.tolist(),
            "value": qres.value,
            "trace": qres.trace,
            "converged": qres.converged,
            "evaluations": qres.evaluations,
            "restart_values": qres.restart_values,
            "stats": qres.stats,
            "ranked": [{"bits": r.bits, "probability": r.probability, "energy": str(r.energy),
                        "hypothesis": _hyp(r.bits, layout)} for r in qres.ranked],
        }
    if exact is not None and qres is not None:
        out["verdict"] = verify_against_qaoa(exact, qres).to_dict()
    out["_histogram"] = histogram_rows(model, exact, qres)
    return out


def histogram_rows(model, exact, qres) -> list[tuple[str, float, str]]:
    """(bits, probability, energy) for every basis state, bitstring ascending."""
    n = model.num_qubits
    if qres is not None:
        probs = np.asarray(qres.probabilities)
    else:
        probs = np.zeros(1 << n)
        for b in exact.optimal:
            probs[int(b[::-1], 2)] = 1.0 / len(exact.optimal)
    if exact is not None:
        energy = {e.bits: e.energy for e in exact.entries}
    else:
        vals, den = poly_table(model.poly, n)
        energy = {bitstring(z, n): Fraction(int(vals[z]), den) for z in range(1 << n)}
    rows = [(bitstring(z, n), float(probs[z]), str(energy[bitstring(z, n)])) for z in range(1 << n)]
    rows.sort()
    return rows


def write_histogram(rows, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["bits", "probability", "energy"])
        for bits, p, e in rows:
            w.writerow([bits, repr(p), e])


def print_table(result: dict, top: int, stream):
    m = result["model"]
    print(f"model: {m['kind']}{' + SPEC' if m['spec'] and m['kind'] == 'full' else ''}, "
          f"{m['num_qubits']} qubits, {m['ising_terms']} Ising terms", file=stream)
    print("variables: " + " ".join(m["free_variables"]), file=stream)
    if "exact" in result:
        ex = result["exact"]
        print(f"oracle minimum {ex['min_energy']} at {', '.join(ex['optimal'])}"
              f"{'' if ex['unique'] else ' (degenerate)'}", file=stream)
    if "qaoa" in result:
        q = result["qaoa"]
        print(f"QAOA F = {q['value']:.6g} after {q['evaluations']} evaluations", file=stream)
        w = max(4, m["num_qubits"])
        print(f"{'rank':>4}  {'bits':<{w}}  {'prob':>8}  {'energy':>8}  hypothesis", file=stream)
        for i, r in enumerate(q["ranked"][:top], 1):
            print(f"{i:>4}  {r['bits']:<{w}}  {r['probability']:8.4f}  {r['energy']:>8}  "
                  f"{'; '.join(r['hypothesis']['verdicts'])}", file=stream)
    elif "exact" in result:
        for i, r in enumerate(result["exact"]["ranked"][:top], 1):
            print(f"{i:>4}  {r['bits']}  {r['energy']:>8}  {'; '.join(r['hypothesis']['verdicts'])}",
                  file=stream)
    if "verdict" in result:
        v = result["verdict"]
        print(f"verdict: match={v['match']} oracle optimum rank={v['oracle_rank']} "
              f"p(optimal)={v['optimal_probability']:.4f}", file=stream)


def cmd_diagnose(args, stream) -> int:
    result = diagnose(args)
    rows = result.pop("_histogram")
    if args.output:
        Path(args.output).write_text(json.dumps(result, indent=2) + "\n")
    if args.histogram:
        write_histogram(rows, args.histogram)
    print_table(result, args.top, stream)
    return 0


def circuit_stats_report(args) -> dict:
    model, region = build_model(args)
    k = args.level
    circ = build_qaoa_circuit(model.ising, np.zeros(k), np.zeros(k))
    return {"schema_version": SCHEMA_VERSION, "command": "circuit-stats", "level": k,
            "model": model_record(model, region), "stats": circuit_stats(circ)}


def cmd_circuit_stats(args, stream) -> int:
    rep = circuit_stats_report(args)
    text = json.dumps(rep, indent=2)
    if args.output:
        Path(args.output).write_text(text + "\n")
    print(text, file=stream)
    return 0


def cmd_time_estimate(args, stream) -> int:
    try:
        est = timing.estimate(args.depth, args.iterations, args.shots, args.t_prep_meas, args.t_gate)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    rep = {"schema_version": SCHEMA_VERSION, "command": "time-estimate", "estimate": est.to_dict()}
    print(json.dumps(rep, indent=2), file=stream)
    return 0


def benchmark_rows(sizes, count: int, level: int, seed: int) -> list[dict]:
    rows = []
    for n in sizes:
        for i, model in enumerate(synthetic.instances(n, count, seed)):
            t0 = time.perf_counter()
            solve_enumerate(model.poly, model.num_qubits)
            dt = time.perf_counter() - t0
            rows.append({"qubits": n, "instance": i, "solver": "exact", "seconds": dt, "depth": ""})
            d = circuit_stats(build_qaoa_circuit(model.ising, np.zeros(level), np.zeros(level)))["depth"]
            rows.append({"qubits": n, "instance": i, "solver": "qaoa_estimate",
                         "seconds": timing.estimate(d).total, "depth": d})
    return rows


def cmd_benchmark(args, stream) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",")]
    except ValueError:
        raise CliError(f"bad size list {args.sizes!r}") from None
    if any(n < 1 for n in sizes):
        raise CliError("sizes must be positive")
    rows = benchmark_rows(sizes, args.instances, args.level, args.seed)
    buf = io.StringIO()
    w = csv.DictWriter(buf, ["qubits", "instance", "solver", "seconds", "depth"], lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    if args.output:
        Path(args.output).write_text(buf.getvalue())
    stream.write(buf.getvalue())
    return 0


def _model_args(p):
    p.add_argument("--topology", default="testsystem28.json",
                   help="topology JSON (path or bundled name)")
    p.add_argument("--alarms", required=True, help="alarm JSON (path or bundled case name)")
    p.add_argument("--simplified", action="store_true", help="component-only objective")
    p.add_argument("--no-spec", action="store_true", help="keep every failure/mal-operation variable")
    p.add_argument("--weights", type=_weights, default=(1, 1, 1, 40), help="w1,w2,w3,w4")
    p.add_argument("--level", type=int, default=10)
    p.add_argument("--output", help="write the JSON result here")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="faultq", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("diagnose", help="build a model and solve it")
    _model_args(d)
    d.add_argument("--iterations", type=int, default=100)
    d.add_argument("--restarts", type=int, default=5)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--optimizer", choices=("nelder_mead", "spsa"), default="nelder_mead")
    d.add_argument("--init", choices=("seeded_uniform", "linear_ramp"), default="seeded_uniform")
    d.add_argument("--solver", choices=("qaoa", "exact", "both"), default="both")
    d.add_argument("--top", type=int, default=10)
    d.add_argument("--histogram", help="write the final distribution as CSV here")
    d.set_defaults(func=cmd_diagnose)

    c = sub.add_parser("circuit-stats", help="qubits, depth and gate counts")
    _model_args(c)
    c.set_defaults(func=cmd_circuit_stats)

    t = sub.add_parser("time-estimate", help="hardware time from circuit depth")
    t.add_argument("--depth", type=int, required=True)
    t.add_argument("--iterations", type=int, default=timing.ITERATIONS)
    t.add_argument("--shots", type=int, default=timing.SHOTS)
    t.add_argument("--t-prep-meas", type=float, default=timing.T_PREP_MEAS)
    t.add_argument("--t-gate", type=float, default=timing.T_GATE)
    t.set_defaults(func=cmd_time_estimate)

    b = sub.add_parser("benchmark", help="oracle wall-clock vs estimated QAOA time")
    b.add_argument("--sizes", default="4,5,7,10,12")
    b.add_argument("--instances", type=int, default=5)
    b.add_argument("--level", type=int, default=10)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--output", help="write the CSV here")
    b.set_defaults(func=cmd_benchmark)
    return ap


def main(argv=None, stream=None) -> int:
    stream = stream or sys.stdout
    args = make_parser().parse_args(argv)
    try:
        if getattr(args, "level", 1) < 0:
            raise CliError("--level must be >= 0")
        if args.command == "diagnose" and args.solver != "exact" and args.level < 1:
            raise CliError("QAOA needs --level >= 1")
        return args.func(args, stream)
    except (CliError, TopologyError, ModelError, WidthError, DegreeCapError, ValueError) as exc:
        print(f"faultq: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"faultq: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
