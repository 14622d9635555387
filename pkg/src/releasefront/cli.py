"""Command-line entry points: solve, bench, gen, front, serve."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .anytime import ALGORITHMS, RunConfig, normalize_algorithm, run
from .bench import (
    GeneratorParams,
    bench,
    generate_instance,
    instance_totals,
    load_instance,
    replay_rows,
    write_progress_dat,
    write_rows_csv,
    write_summary_csv,
)
from .metrics import brute_force_front, hypervolume
from .model import Point, build_bi_objective, dumps_instance
from .oracle import make_oracle


def _add_solve(sub) -> None:
    p = sub.add_parser("solve", help="run one algorithm on one instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--algorithm", required=True)
    p.add_argument("--deadline", type=float, default=None, help="seconds")
    p.add_argument("--lambda", dest="lam", default=None, help="rational like 1/1000")
    p.add_argument("--budget", type=int, default=None, help="max oracle calls")
    p.add_argument("--node-budget", type=int, default=10**7)
    p.add_argument("--out", choices=("csv", "json"), default="json")


def _add_bench(sub) -> None:
    p = sub.add_parser("bench", help="run an instance x algorithm matrix")
    p.add_argument("--instances", required=True, help="directory of instance files")
    p.add_argument("--algorithms", required=True, help="comma-separated ids")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--deadline", type=float, default=None)
    p.add_argument("--out", required=True, help="output directory")


def _add_gen(sub) -> None:
    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pdens", type=float, default=0.1)
    p.add_argument("--qdens", type=float, default=0.25)
    p.add_argument("--max-cost", type=int, default=9)
    p.add_argument("--max-weight", type=int, default=9)
    p.add_argument("--out", required=True)


def _add_front(sub) -> None:
    p = sub.add_parser("front", help="brute-force the exact front (small instances)")
    p.add_argument("--instance", required=True)


def _add_serve(sub) -> None:
    p = sub.add_parser("serve", help="launch the HTTP control plane")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--persist", default=None, help="directory for event logs")
    p.add_argument("--frontend", default=None, help="static UI directory to serve")


def _report_json(instance, report) -> dict:
    return {
        "instance": instance.name,
        "algorithm": report.algorithm,
        "termination": report.termination,
        "nadir": None if report.nadir is None else report.nadir.as_pair(),
        "oracle_calls": report.stats.oracle_calls,
        "oracle_nodes": report.stats.oracle_nodes,
        "late_discards": report.stats.late_discards,
        "archive": [
            {
                "f1": p.f1,
                "f2": p.f2,
                "satisfaction": -p.f1,
                "cost": p.f2,
            }
            for p in report.archive.points
        ],
        "events": [
            {
                "elapsed": e.elapsed,
                "f1": e.point.f1,
                "f2": e.point.f2,
                "oracle_calls": e.oracle_calls,
            }
            for e in report.events
        ],
    }


def cmd_solve(args) -> int:
    instance = load_instance(args.instance)
    problem = build_bi_objective(instance)
    config = RunConfig(
        algorithm=args.algorithm,
        deadline=args.deadline,
        lam=None if args.lam is None else Fraction(args.lam),
        node_budget=args.node_budget,
        max_oracle_calls=args.budget,
    )
    report = run(problem, config, oracle=make_oracle())
    if args.out == "json":
        json.dump(_report_json(instance, report), sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        total_hv, _, nadir = instance_totals(instance)
        rows = replay_rows(instance.name, report, 0, total_hv, nadir)
        write_rows_csv(rows, sys.stdout)
    return 0


def cmd_bench(args) -> int:
    directory = Path(args.instances)
    paths = sorted(p for p in directory.iterdir() if p.is_file())
    if not paths:
        print(f"no instance files under {directory}", file=sys.stderr)
        return 2
    instances = [load_instance(p) for p in paths]
    algorithms = [normalize_algorithm(a) for a in args.algorithms.split(",") if a]
    result = bench(
        instances,
        algorithms,
        repetitions=args.reps,
        deadline=args.deadline,
        oracle=make_oracle(),
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "rows.csv", "w", newline="") as fh:
        write_rows_csv(result.rows, fh)
    with open(out / "summary.csv", "w", newline="") as fh:
        write_summary_csv(result.summaries, fh)
    for instance in instances:
        for algorithm in algorithms:
            cell = [
                r
                for r in result.rows
                if r.instance == instance.name and r.algorithm == algorithm and r.run_index == 0
            ]
            if cell:
                dat = out / f"progress-{instance.name}-{algorithm}.dat"
                with open(dat, "w") as fh:
                    write_progress_dat(cell, fh)
    for error in result.errors:
        print(f"error: {error}", file=sys.stderr)
    print(f"wrote {out / 'rows.csv'} and {out / 'summary.csv'}")
    return 1 if result.errors else 0


def cmd_gen(args) -> int:
    params = GeneratorParams(
        n=args.n,
        m=args.m,
        max_cost=args.max_cost,
        max_weight=args.max_weight,
        precedence_density=args.pdens,
        request_density=args.qdens,
        seed=args.seed,
    )
    instance = generate_instance(params)
    Path(args.out).write_text(dumps_instance(instance) + "\n")
    print(f"wrote {args.out} (n={instance.n}, m={instance.m})")
    return 0


def cmd_front(args) -> int:
    instance = load_instance(args.instance)
    front = brute_force_front(instance)
    points = front.points
    nadir = Point(points[-1].f1, points[0].f2) if points else None
    doc = {
        "instance": instance.name,
        "points": [p.as_pair() for p in points],
        "nadir": None if nadir is None else nadir.as_pair(),
        "hypervolume": hypervolume(points, nadir) if nadir else 0,
    }
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(
        oracle=make_oracle(), persist_dir=args.persist, frontend_dir=args.frontend
    )
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="releasefront",
        description="Exact anytime bi-objective optimization for release planning",
        epilog=f"algorithms: {', '.join(ALGORITHMS)}",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _add_solve(sub)
    _add_bench(sub)
    _add_gen(sub)
    _add_front(sub)
    _add_serve(sub)
    args = parser.parse_args(argv)
    handlers = {
        "solve": cmd_solve,
        "bench": cmd_bench,
        "gen": cmd_gen,
        "front": cmd_front,
        "serve": cmd_serve,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    raise SystemExit(main())
