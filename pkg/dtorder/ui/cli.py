"""Command-line surface: ``dtorder <subcommand> ...``.

Exit codes: 0 success, 1 infeasible instance or failed validation, 2 usage or input error.
"""

import argparse
import json
import logging
import sys
from typing import List, Optional, Tuple

from ..core.errors import DTOrderError, InputError, ParameterError, SizeLimitError
from ..core.johnson import omim
from ..core.model import ALL_HEURISTICS, HeuristicId, Instance, Schedule, Task
from ..core.schedule import makespan, min_capacity, validate_schedule
from ..core.settings import APP_NAME, settings_manager
from ..logic.bench import characterize, sweep
from ..logic.exact import brute_force_free_order, brute_force_same_order
from ..logic.exporter import Exporter
from ..logic.generators import ThreePartitionInput, gen_3partition, gen_synthetic, builtin_instance, PROFILES
from ..logic.heuristics import FAVORABLE_SCENARIOS, run_heuristic
from ..logic.milp import export_milp
from ..logic.trace_io import dump_trace, load_trace, run_in_batches

logger = logging.getLogger(__name__)

BUILTIN_PREFIX = "builtin:"


def _fmt(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def _load_tasks(source: str) -> Tuple[List[Task], Optional[float]]:
    """Tasks of a trace file or ``builtin:<name>``, with the built-in capacity if any."""
    if source.startswith(BUILTIN_PREFIX):
        instance = builtin_instance(source[len(BUILTIN_PREFIX):])
        return list(instance.tasks), instance.capacity
    return load_trace(source), None


def _load_instance(source: str, capacity: Optional[float]) -> Instance:
    tasks, builtin_capacity = _load_tasks(source)
    if capacity is None:
        capacity = builtin_capacity if builtin_capacity is not None else min_capacity(tasks)
    return Instance(tuple(tasks), capacity)


def _heuristic(text: str) -> HeuristicId:
    return HeuristicId.parse(text, default_k=settings_manager.get("lp_window"))


def _print_schedule(schedule: Schedule) -> None:
    print(json.dumps(schedule.to_rows(), indent=2))


def cmd_run(args) -> int:
    instance = _load_instance(args.trace, args.capacity)
    heuristic = _heuristic(args.heuristic)
    if args.batch:
        result = run_in_batches(instance, heuristic, args.batch)
        bound = result.makespan / result.ratio if result.ratio else 0.0
    else:
        result = run_heuristic(instance, heuristic)
        bound = omim(instance.tasks)
    print(f"heuristic: {heuristic}")
    print(f"capacity: {_fmt(instance.capacity)}")
    print(f"makespan: {_fmt(result.makespan)}")
    print(f"omim: {_fmt(bound)}")
    print(f"ratio: {result.ratio:.6f}")
    if args.print_schedule:
        _print_schedule(result.schedule)
    if args.schedule_out:
        with open(args.schedule_out, "w", encoding="utf-8") as f:
            json.dump(result.schedule.to_rows(), f, indent=2)
        logger.info("Wrote schedule to %s", args.schedule_out)
    return 0


def cmd_sweep(args) -> int:
    workloads = [_load_tasks(source)[0] for source in args.trace]
    heuristics = [_heuristic(text) for text in args.heuristics.split(",")] if args.heuristics else list(ALL_HEURISTICS)
    rows = sweep(workloads, heuristics, batch_size=args.batch, jobs=args.jobs, names=args.trace)
    for path in Exporter(args.out).export_sweep(rows):
        print(path)
    return 0


def cmd_gen(args) -> int:
    if args.gadget_3par:
        if args.a is None or args.m is None:
            raise InputError("--gadget-3par needs --a and --m")
        try:
            values = [int(v) for v in args.a.split(",")]
        except ValueError:
            raise InputError(f"--a must be a comma-separated list of integers, got {args.a!r}") from None
        instance, target = gen_3partition(ThreePartitionInput(tuple(values), args.m))
        dump_trace(instance.tasks, args.out)
        print(f"capacity: {_fmt(instance.capacity)}")
        print(f"target: {_fmt(target)}")
        return 0
    if args.profile is None or args.n is None:
        raise InputError("gen needs --profile and --n (or --gadget-3par)")
    tasks = gen_synthetic(args.profile, args.n, args.seed, args.bias)
    dump_trace(tasks, args.out)
    print(f"tasks: {len(tasks)}")
    print(f"m_c: {_fmt(min_capacity(tasks))}")
    return 0


def cmd_oracle(args) -> int:
    instance = _load_instance(args.trace, args.capacity)
    if args.free_order:
        result = brute_force_free_order(instance, args.limit)
        print(f"makespan: {_fmt(result.makespan)}")
        print("comm order: " + " ".join(str(i) for i in result.comm_order))
        print("comp order: " + " ".join(str(i) for i in result.comp_order))
    else:
        result = brute_force_same_order(instance, args.limit)
        print(f"makespan: {_fmt(result.makespan)}")
        print("order: " + " ".join(str(i) for i in result.order))
    return 0


def cmd_export_milp(args) -> int:
    text = export_milp(_load_instance(args.trace, args.capacity))
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        logger.info("Wrote MILP to %s", args.out)
    else:
        sys.stdout.write(text)
    return 0


def cmd_validate(args) -> int:
    instance = _load_instance(args.trace, args.capacity)
    try:
        with open(args.schedule, "r", encoding="utf-8") as f:
            rows = json.load(f)
    except json.JSONDecodeError as e:
        raise InputError(f"{args.schedule} is not valid JSON: {e}") from None
    if not isinstance(rows, list):
        raise InputError("a schedule document is an array of {id, comm_start, comp_start}")
    schedule = Schedule.from_starts(instance, rows)
    report = validate_schedule(instance, schedule)
    if report.feasible:
        print(f"feasible, makespan: {_fmt(makespan(schedule))}")
        return 0
    for violation in report.violations:
        print(violation)
    return 1


def cmd_characterize(args) -> int:
    profile = characterize(_load_tasks(args.trace)[0])
    print(f"tasks: {profile.tasks}")
    for name in ("sum_comm", "sum_comp", "lower", "upper", "m_c", "omim", "omim_peak_memory"):
        print(f"{name}: {_fmt(getattr(profile, name))}")
    print(f"compute_intensive_fraction: {profile.compute_intensive_fraction:.4f}")
    return 0


def cmd_catalog(args) -> int:
    for heuristic in ALL_HEURISTICS:
        print(f"{str(heuristic):8} {heuristic.category.value:10} {FAVORABLE_SCENARIOS[heuristic]}")
    print(f"{'lp.k':8} exact      Windows of k tasks solved exactly, k in 3..6")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dtorder", description=f"{APP_NAME}: data transfer ordering under a memory capacity")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_trace(p, capacity=True):
        p.add_argument("--trace", required=True, help="trace CSV file or builtin:<name>")
        if capacity:
            p.add_argument("--capacity", type=float, help="memory capacity (default: the built-in's, else m_c)")

    p = sub.add_parser("run", help="run one heuristic")
    with_trace(p)
    p.add_argument("--heuristic", required=True, help="e.g. OOSIM, OOLCMR, lp.4")
    p.add_argument("--batch", type=int, help="schedule in batches of this size")
    p.add_argument("--print-schedule", action="store_true", help="print the schedule as JSON")
    p.add_argument("--schedule-out", help="write the schedule JSON to this file")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="capacity sweep over workloads and heuristics")
    p.add_argument("--trace", required=True, nargs="+", help="trace files or builtin:<name>")
    p.add_argument("--heuristics", help="comma-separated list (default: all)")
    p.add_argument("--batch", type=int)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--jobs", type=int, help="worker processes (default from settings)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gen", help="generate a trace")
    p.add_argument("--profile", choices=PROFILES)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bias", type=float, default=1.0, help="sum(comm) / sum(comp)")
    p.add_argument("--gadget-3par", action="store_true", help="3-Partition reduction gadget")
    p.add_argument("--a", help="comma-separated 3-Partition integers")
    p.add_argument("--m", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="exhaustive optimum for small instances")
    with_trace(p)
    p.add_argument("--free-order", action="store_true", help="allow different comm and comp orders")
    p.add_argument("--limit", type=int, help="largest task count to search")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("export-milp", help="write the MILP in LP format")
    with_trace(p)
    p.add_argument("--out", help="output .lp file (default: stdout)")
    p.set_defaults(func=cmd_export_milp)

    p = sub.add_parser("validate", help="check a schedule JSON against a trace")
    with_trace(p)
    p.add_argument("--schedule", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("characterize", help="workload sums, bounds and m_c")
    with_trace(p, capacity=False)
    p.set_defaults(func=cmd_characterize)

    p = sub.add_parser("catalog", help="heuristics and their favorable scenarios")
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    if args.verbose:
        logging.getLogger().setLevel(logging.DEBUG if args.verbose > 1 else logging.INFO)
    try:
        return args.func(args)
    except (InputError, ParameterError, SizeLimitError, OSError) as e:
        logger.error("%s", e)
        return 2
    except DTOrderError as e:
        logger.error("%s", e)
        return 1
