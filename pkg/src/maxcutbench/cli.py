"""Command line entry point: ``maxcut-bench {convert,solve,bench,validate}``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import formats
from .anneal import PRESETS
from .bench import (
    FORMATS,
    BenchError,
    InstanceRecord,
    SolverConfig,
    infer_dataset,
    load_external,
    load_manifest,
    run_bench,
    solve_graph,
    summary_csv,
    to_reported,
    validate_dataset,
    convert,
)
from .graph import cut_value


def _schedule_overrides(args) -> dict:
    out = {}
    for key in ("initial_temp", "decrement", "min_temp", "moves_per_temp", "cooling"):
        val = getattr(args, key, None)
        if val is not None:
            out[key] = val
    if getattr(args, "schedule_config", None):
        cfg = json.loads(Path(args.schedule_config).read_text(encoding="utf-8"))
        out = {**cfg, **out}
    return out


def cmd_convert(args) -> int:
    info = convert(args.input, args.output, args.from_format, args.to_format,
                   scale=args.scale, convention=args.convention,
                   qubo_scale=args.qubo_scale, n=args.n)
    if info:
        print(json.dumps(info, sort_keys=True), file=sys.stderr)
    return 0


def cmd_solve(args) -> int:
    name = Path(args.instance).name
    for suffix in (".sparse.mc", ".mc", ".txt"):
        if name.endswith(suffix):
            name = name[: -len(suffix)]
            break
    dataset = args.dataset or infer_dataset(name)
    rec = InstanceRecord(name, Path(args.instance), dataset, format=args.format)
    g = rec.load()
    kind = {"exact": "exact", "bb": "bb", "sa": "sa"}[args.solver]
    solver = SolverConfig(args.solver_id or kind, kind, preset=args.preset, seed=args.seed,
                          restarts=args.restarts, time_limit=args.time_limit,
                          polish=args.polish, schedule=_schedule_overrides(args))
    res = solve_graph(g, solver, args.seed)
    value = cut_value(g, res.best_assignment)
    out = {
        "instance": name,
        "solver": solver.id,
        "cut": value,
        "value": to_reported(value, dataset),
        "time_s": round(res.wall_time, 6),
    }
    if hasattr(res, "optimal"):
        out["optimal"] = res.optimal
    if hasattr(res, "moves_attempted"):
        out["moves_attempted"] = res.moves_attempted
        out["moves_accepted"] = res.moves_accepted
    print(json.dumps(out))
    if args.cut_out:
        formats.write_cut_vector(res.best_assignment, args.cut_out)
    return 0


def cmd_bench(args) -> int:
    instances, solvers = load_manifest(args.manifest)
    if args.solver:
        solvers = list(solvers) + [SolverConfig(**json.loads(s)) for s in args.solver]
    external = []
    for path in args.external or []:
        external.extend(load_external(path))
    report = run_bench(instances, solvers, external, workers=args.workers)
    text = report.to_csv(args.timings) if args.out == "csv" else report.to_markdown(args.timings)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.summary:
        with open(args.summary, "w", encoding="utf-8", newline="") as fh:
            fh.write(summary_csv(report))
    return 0


def cmd_validate(args) -> int:
    report = validate_dataset(args.directory, strict_sign=args.strict_sign,
                              weight_divisor=args.weight_divisor)
    for e in report.entries:
        status = "PASS" if e.ok else "FAIL"
        detail = f"cut={e.cut} value={e.value}" if e.cut is not None else ""
        line = f"{status} {e.name} {detail} {e.message}".rstrip()
        print(line, file=sys.stdout if e.ok else sys.stderr)
    n_ok = sum(e.ok for e in report.entries)
    print(f"{n_ok}/{len(report.entries)} triples consistent")
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="maxcut-bench", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("convert", help="convert between instance formats")
    c.add_argument("input")
    c.add_argument("output")
    c.add_argument("--from", dest="from_format", choices=FORMATS, default="edge-list")
    c.add_argument("--to", dest="to_format", choices=FORMATS, required=True)
    c.add_argument("--scale", choices=formats.SCALES, default="L")
    c.add_argument("--convention", choices=formats.CONVENTIONS, default="gset")
    c.add_argument("--qubo-scale", type=int, default=1,
                   help="weight multiplier when turning a QUBO into a graph")
    c.add_argument("--n", type=int, help="vertex count for coupling-dict input")
    c.set_defaults(func=cmd_convert)

    s = sub.add_parser("solve", help="solve one instance")
    s.add_argument("instance")
    s.add_argument("--format", choices=("edge-list", "laplacian", "coupling-dict"),
                   default="edge-list")
    s.add_argument("--dataset", choices=("be", "bqp", "G", "custom"))
    s.add_argument("--solver", choices=("exact", "bb", "sa"), default="sa")
    s.add_argument("--solver-id")
    s.add_argument("--preset", choices=sorted(PRESETS), default="sa2")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--restarts", type=int, default=1)
    s.add_argument("--time-limit", type=float)
    s.add_argument("--polish", action="store_true",
                   help="finish each restart with steepest single-flip ascent")
    s.add_argument("--initial-temp", type=float)
    s.add_argument("--decrement", type=float)
    s.add_argument("--min-temp", type=float)
    s.add_argument("--moves-per-temp", type=int)
    s.add_argument("--cooling", choices=("geometric", "linear"))
    s.add_argument("--schedule-config", help="JSON file with schedule fields")
    s.add_argument("--cut-out", help="write the best assignment here")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="run a benchmark manifest")
    b.add_argument("--manifest", required=True)
    b.add_argument("--external", action="append",
                   help="JSON Lines file of external solver results (repeatable)")
    b.add_argument("--solver", action="append",
                   help='extra solver as JSON, e.g. \'{"id": "SA2", "kind": "sa"}\'')
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--out", choices=("csv", "md"), default="csv")
    b.add_argument("--output", help="report file (default: stdout)")
    b.add_argument("--summary", help="also write best/only/worst counts as CSV")
    b.add_argument("--timings", action="store_true",
                   help="include wall times (makes reports run-dependent)")
    b.set_defaults(func=cmd_bench)

    v = sub.add_parser("validate", help="check cut vectors against value files")
    v.add_argument("directory")
    v.add_argument("--strict-sign", action="store_true")
    v.add_argument("--weight-divisor", type=int, default=1)
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BenchError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
