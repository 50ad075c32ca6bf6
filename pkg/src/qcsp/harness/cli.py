"""Command-line interface: ``qcsp <command> ...``.

Exit codes: 0 success, 2 unreadable input (parse errors, bad arguments),
3 infeasible schedule, 1 anything else.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

from ..analysis import lower_bound_info
from ..decode import DecodeError
from ..feasibility import ScheduleError, check
from ..model import InstanceError
from ..search import SearchParams, mgeo_solve
from .bench import BenchmarkError, format_csv, run_benchmark
from .gantt import emit_gantt
from .generator import BENCHMARK_SETS, GeneratorConfig, generate_instance
from .io import (ParseError, format_instance, format_schedule, parse_params, parse_schedule,
                 published_results_path, read_instance, read_references)

EXIT_PARSE = 2
EXIT_INFEASIBLE = 3


def _params(args) -> SearchParams:
    base = SearchParams()
    if args.params:
        base = parse_params(Path(args.params).read_text())
    if args.seed is not None:
        base = replace(base, seed=args.seed)
    return base


def _write(text: str, out) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_generate(args) -> int:
    if args.set:
        n, m = BENCHMARK_SETS[args.set]
    else:
        if args.n is None or args.m is None:
            raise ParseError("generate needs --set or both --n and --m")
        n, m = args.n, args.m
    seed = 0 if args.seed is None else args.seed
    texts = []
    for r in range(args.count):
        cfg = GeneratorConfig(n=n, m=m, p_low=args.p_low, p_high=args.p_high, bays=args.bays,
                              delta=args.delta, seed=seed + r)
        inst = generate_instance(cfg)
        texts.append(format_instance(inst, comment=f"generated n={n} m={m} seed={seed + r}"))
    if args.outdir:
        outdir = Path(args.outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        for r, text in enumerate(texts):
            (outdir / f"{args.prefix}{r + 1:03d}.txt").write_text(text)
    else:
        _write("".join(texts) if args.count == 1 else "\n".join(texts), args.out)
    return 0


def cmd_solve(args) -> int:
    inst = read_instance(args.instance)
    params = _params(args)
    res = mgeo_solve(inst, params)
    if args.schedule_out:
        Path(args.schedule_out).write_text(format_schedule(inst, res.schedule))
    if args.gantt:
        fmt = "text" if args.gantt.endswith(".txt") else "svg"
        Path(args.gantt).write_text(emit_gantt(inst, res.schedule, fmt))
    if args.format == "csv":
        _write("instance,makespan,direction,iterations,evaluations,assignment\n"
               f"{Path(args.instance).stem},{res.makespan},{res.schedule.direction},"
               f"{res.iterations},{res.evaluations},{' '.join(map(str, res.assignment))}\n",
               args.out)
    else:
        _write(f"makespan    {res.makespan}\n"
               f"direction   {res.schedule.direction}\n"
               f"assignment  {' '.join(map(str, res.assignment))}\n"
               f"iterations  {res.iterations}\n"
               f"evaluations {res.evaluations}\n\n"
               + format_schedule(inst, res.schedule), args.out)
    return 0


def cmd_check(args) -> int:
    inst = read_instance(args.instance)
    sched = parse_schedule(Path(args.schedule).read_text(), inst)
    report = check(inst, sched)
    if args.format == "csv":
        lines = ["tag,tasks,slack"] + [f"{v.tag},{' '.join(map(str, v.tasks))},{v.slack}"
                                       for v in report]
        _write("\n".join(lines) + "\n", args.out)
    else:
        _write(("feasible, makespan " + str(sched.makespan) if report.feasible else str(report))
               + "\n", args.out)
    return 0 if report.feasible else EXIT_INFEASIBLE


def cmd_bench(args) -> int:
    params = _params(args)
    instances = [(Path(p).stem, read_instance(p)) for p in args.instances]
    refs = None
    if args.reference:
        path = published_results_path() if args.reference == "published" else args.reference
        refs = read_references(path)
    reports = run_benchmark(instances, params, args.reps, refs,
                            base_seed=0 if args.seed is None else args.seed,
                            workers=args.workers)
    if args.format == "csv":
        _write(format_csv(reports, timing=args.timing), args.out)
    else:
        lines = [f"{'instance':<16}{'reps':>5}{'mean':>10}{'best':>7}{'worst':>7}"
                 f"{'rg_mean':>9}{'rg_best':>9}{'ref':>7}  kind"]
        for r in reports:
            lines.append(f"{r.instance:<16}{r.reps:>5}{r.mean:>10.2f}{r.best:>7}{r.worst:>7}"
                         f"{r.rg_mean:>9.2f}{r.rg_best:>9.2f}{r.ref:>7g}  {r.ref_kind}")
        _write("\n".join(lines) + "\n", args.out)
    return 0


def cmd_lb(args) -> int:
    rows = []
    for p in args.instances:
        value, exact = lower_bound_info(read_instance(p), node_cap=args.node_cap,
                                        milp_nodes=args.milp_nodes,
                                        time_limit=args.time_limit)
        rows.append((Path(p).stem, value, exact))
    if args.format == "csv":
        text = "instance,lower_bound,exact\n" + "".join(
            f"{name},{v},{str(e).lower()}\n" for name, v, e in rows)
    else:
        text = "".join(f"{name:<16}{v:>8}  {'exact' if e else 'relaxed'}\n"
                       for name, v, e in rows)
    _write(text, args.out)
    return 0


def cmd_gantt(args) -> int:
    inst = read_instance(args.instance)
    sched = parse_schedule(Path(args.schedule).read_text(), inst)
    fmt = "svg" if args.svg or not args.text else "text"
    _write(emit_gantt(inst, sched, fmt), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="random seed")
    common.add_argument("--params", help="file of key=value solver settings")
    common.add_argument("--format", choices=("csv", "human"), default="human")
    common.add_argument("-o", "--out", help="output file (default: stdout)")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="qcsp", description="Quay crane scheduling toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="write random instances")
    p.add_argument("--set", choices=sorted(BENCHMARK_SETS), help="use the size of a standard set")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--bays", type=int, default=None, help="number of bays (default n)")
    p.add_argument("--delta", type=int, default=1)
    p.add_argument("--p-low", type=int, default=3)
    p.add_argument("--p-high", type=int, default=180)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--outdir", help="write one file per instance into this directory")
    p.add_argument("--prefix", default="inst")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", parents=[common], help="run the search on one instance")
    p.add_argument("instance")
    p.add_argument("--schedule-out", help="write the best schedule to this file")
    p.add_argument("--gantt", help="write a Gantt chart (.svg or .txt)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("check", parents=[common], help="validate a schedule file")
    p.add_argument("instance")
    p.add_argument("schedule")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("bench", parents=[common], help="replicated runs with statistics")
    p.add_argument("instances", nargs="+")
    p.add_argument("--reps", type=int, default=30)
    p.add_argument("--reference", help="CSV of reference values, or 'published'")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="fill the time_mean_s column")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("lb", parents=[common], help="lower bound on the makespan")
    p.add_argument("instances", nargs="+")
    p.add_argument("--node-cap", type=int, default=20_000,
                   help="search nodes before switching to the MILP solver")
    p.add_argument("--milp-nodes", type=int, default=5_000,
                   help="MILP node limit; when reached the proven dual bound is reported")
    p.add_argument("--time-limit", type=float, default=None,
                   help="optional MILP wall-clock limit in seconds")
    p.set_defaults(func=cmd_lb)

    p = sub.add_parser("gantt", parents=[common], help="draw a schedule file")
    p.add_argument("instance")
    p.add_argument("schedule")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--svg", action="store_true")
    g.add_argument("--text", action="store_true")
    p.set_defaults(func=cmd_gantt)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ParseError, InstanceError, OSError, ValueError) as exc:
        if isinstance(exc, ScheduleError):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INFEASIBLE
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (BenchmarkError, DecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
