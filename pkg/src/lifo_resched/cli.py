"""Command line interface: ``lifo-resched <command> ...``.

Exit codes: 0 success, 1 bad input, 2 an invariant check failed.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench
from .baselines import edd, lawler_moore_weighted, moore_hodgson, wspt
from .errors import ReschedError
from .model import OBJECTIVES, Instance, RegularFunctionSet, evaluate, format_instance, read_instance
from .moves import apply_moves, parse_move_script, stack_metrics
from .numlate import numlate_tables
from .oracle import DEFAULT_LIMIT, oracle_optimum
from .solvers import solve
from .wlate import choose_method, make_partition_instance

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2


class InvariantViolation(Exception):
    pass


def _order(order) -> str:
    return " ".join(str(j) for j in order)


def _load(args) -> Instance:
    instance = read_instance(args.instance)
    if getattr(args, "stack", None) is not None:
        instance = instance.with_capacity(args.stack)
    return instance


def _has_omega(instance: Instance) -> bool:
    return instance.movable != frozenset(range(1, instance.n + 1))


def cmd_gen(args) -> int:
    if args.kind == "partition":
        if not args.values:
            raise ValueError("gen partition needs --values")
        values = [int(x) for x in args.values.split(",")]
        instance, q = make_partition_instance(values)
        text = format_instance(instance, f"equal-cardinality partition of {values}; threshold Q={q}")
        return _emit_instances([("partition", text)], args.out)
    config = bench.GenConfig(args.n, args.seed, args.d_lo, args.d_hi, args.count)
    texts = []
    for k, inst in enumerate(bench.generate(config)):
        name = bench.instance_id(config, k)
        texts.append((name, format_instance(inst.with_capacity(args.stack), f"{name} seed={args.seed}")))
    return _emit_instances(texts, args.out)


def _emit_instances(texts, out) -> int:
    if out is None:
        sys.stdout.write("".join(text for _, text in texts))
    elif len(texts) == 1 and not out.endswith("/"):
        Path(out).write_text(texts[0][1])
    else:
        folder = Path(out)
        folder.mkdir(parents=True, exist_ok=True)
        for name, text in texts:
            (folder / f"{name}.txt").write_text(text)
    return EXIT_OK


def cmd_solve(args) -> int:
    instance = _load(args)
    objective = args.objective
    omega = _has_omega(instance)
    method = "weight" if args.alt_dp else "time" if args.time_dp else "auto"
    if objective == "wlate" and method == "auto":
        method = choose_method(instance)
    phis = RegularFunctionSet.from_spec(instance) if objective == "phimax" else None
    sol = solve(objective, instance, omega=omega, method=method, phis=phis)
    _, trace = apply_moves(instance, sol.moves)
    check = evaluate(objective, instance, sol.schedule, phis)
    if check != sol.value:
        raise InvariantViolation(f"schedule evaluates to {check}, solver reported {sol.value}")
    print(f"objective={objective}")
    print(f"S={instance.stack_capacity}")
    if objective == "twct":
        initial = evaluate("twct", instance, list(range(1, instance.n + 1)))
        print(f"delta={sol.value - initial}")
    if objective == "wlate":
        print(f"method={method}")
    print(f"value={sol.value}")
    print(f"order={_order(sol.schedule.order)}")
    print(f"moves={' '.join(f'{i}->{j}' for i, j in sol.moves.pairs())}")
    moves, max_stack, avg_stack = stack_metrics(trace)
    print(f"max_stack={max_stack}")
    print(f"avg_stack={avg_stack:.6f}")
    if args.dump_tables:
        if objective != "numlate":
            raise ValueError("--dump-tables is available for numlate only")
        sys.stdout.write(numlate_tables(instance, omega=omega).to_csv())
    return EXIT_OK


def cmd_oracle(args) -> int:
    instance = _load(args)
    phis = RegularFunctionSet.from_spec(instance) if args.objective == "phimax" else None
    value, schedule = oracle_optimum(instance, instance.stack_capacity, args.objective, phis=phis,
                                     omega=_has_omega(instance), limit=args.limit)
    print(f"objective={args.objective}")
    print(f"S={instance.stack_capacity}")
    print(f"value={value}")
    print(f"order={_order(schedule.order)}")
    return EXIT_OK


def cmd_baseline(args) -> int:
    instance = _load(args)
    print(f"objective={args.objective}")
    if args.objective == "wlate":
        print(f"value={lawler_moore_weighted(instance)}")
        return EXIT_OK
    rule = {"twct": wspt, "lmax": edd, "numlate": moore_hodgson}[args.objective]
    value, schedule = rule(instance)
    print(f"value={value}")
    print(f"order={_order(schedule.order)}")
    return EXIT_OK


def cmd_apply(args) -> int:
    instance = _load(args)
    moves = parse_move_script(Path(args.moves).read_text())
    schedule, trace = apply_moves(instance, moves)
    if args.trace:
        Path(args.trace).write_text(trace.to_csv())
    print(f"order={_order(schedule.order)}")
    print(f"required_capacity={moves.required_capacity}")
    for obj in ("twct", "lmax", "numlate", "wlate"):
        print(f"{obj}={evaluate(obj, instance, schedule)}")
    if not args.trace:
        sys.stdout.write(trace.to_csv())
    return EXIT_OK


def cmd_bench(args) -> int:
    objectives = args.objectives.split(",")
    instances = bench.study_instances(args.n, args.count, args.seed)
    records = bench.run_study(instances, args.s_max, objectives, workers=args.workers)
    paths = bench.write_study(records, args.out)
    summary = bench.summarize(records)
    for line in bench.plateau_report(summary):
        print(line)
    if not args.no_plot:
        from .plotting import plot_study

        for path in plot_study(summary, args.out):
            print(f"figure={path}")
    print(f"results={paths['results']}")
    print(f"summary={paths['summary']}")
    print(f"digest={bench.digest(paths['results'].read_text())}")
    problems = bench.audit(records)
    if problems:
        for line in problems:
            print(f"violation: {line}", file=sys.stderr)
        raise InvariantViolation(f"{len(problems)} invariant violations")
    return EXIT_OK


def cmd_plot(args) -> int:
    from .plotting import plot_study, read_summary

    for path in plot_study(read_summary(args.summary), args.out):
        print(f"figure={path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lifo-resched", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write random or partition instances")
    p.add_argument("kind", choices=("random", "partition"))
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--d-lo", type=float, default=0.2)
    p.add_argument("--d-hi", type=float, default=1.0)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--stack", type=int, default=1)
    p.add_argument("--values", help="comma-separated integers for 'partition'")
    p.add_argument("-o", "--out", help="file, or directory for several instances (default: stdout)")
    p.set_defaults(func=cmd_gen)

    objectives = list(OBJECTIVES)
    p = sub.add_parser("solve", help="optimal reachable schedule")
    p.add_argument("instance")
    p.add_argument("--objective", choices=objectives, required=True)
    p.add_argument("--stack", type=int, help="override the instance's stack capacity")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--alt-dp", action="store_true", help="wlate: weight-indexed program")
    group.add_argument("--time-dp", action="store_true", help="wlate: time-indexed program")
    p.add_argument("--dump-tables", action="store_true", help="numlate: print the state tables as CSV")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="brute-force optimum for small n")
    p.add_argument("instance")
    p.add_argument("--objective", choices=objectives, required=True)
    p.add_argument("--stack", type=int)
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("baseline", help="unconstrained optimum")
    p.add_argument("instance")
    p.add_argument("--objective", choices=("twct", "lmax", "numlate", "wlate"), required=True)
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("apply", help="replay a move script and print the stack trace")
    p.add_argument("instance")
    p.add_argument("moves")
    p.add_argument("--stack", type=int)
    p.add_argument("--trace", help="write the trace CSV here instead of stdout")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("bench", help="run the stack-size study")
    p.add_argument("--n", type=int, nargs="+", default=[20, 50])
    p.add_argument("--count", type=int, default=5, help="instances per due-date class")
    p.add_argument("--s-max", type=int, default=15)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--objectives", default=",".join(bench.STUDY_OBJECTIVES))
    p.add_argument("--workers", type=int, help="default: CPU count, capped by LIFO_RESCHED_THREADS")
    p.add_argument("--out", default="study")
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("plot", help="draw figures from a summary CSV")
    p.add_argument("summary")
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvariantViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (ReschedError, ValueError, OSError, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
