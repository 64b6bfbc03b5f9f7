"""Command-line front end: generate instances, build and check schedules,
evaluate travel, benchmark, and print the approximation-factor table.

Exit codes: 0 success, 1 usage or input error, 2 internal construction
failure (including over-budget benchmark trials), 3 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
import time
from fractions import Fraction

from .analysis import (BOUND_SLACK, evaluation_report, factors_exact,
                       flip_budget, format_report, lower_bound, report_to_json,
                       total_travel)
from .errors import (InstanceError, MatchingError, OracleBudgetError,
                     SchedulingError, TTP2Error, ValidationError)
from .instance import emit_instance, generate_instance, load_instance, save_instance
from .matching import min_weight_perfect_matching
from .oracle import best_effort_optimal, brute_force_optimal, sample_valid_schedules
from .scheduler import (Schedule, build_schedule, format_level_table,
                        schedule_from_json, schedule_to_json)
from .validator import parse_day_list, validate_schedule

DEFAULT_SEED = 0
GEN_KINDS = ("euclidean", "unit", "random_metric")
BENCH_DEFAULT_NS = "8,12,16,20,24,28,32"


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; remap to this tool's convention (1)
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _resolve_seed(value):
    if value is not None:
        return value
    env = os.environ.get("TTP2_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InstanceError(f"TTP2_SEED must be an integer, got {env!r}")
    return DEFAULT_SEED


def _obtain_instance(args):
    """Instance from -i PATH or --gen KIND --n N [--seed S]."""
    if getattr(args, "input", None):
        return load_instance(args.input)
    if getattr(args, "gen", None) or getattr(args, "n", None) is not None:
        if args.n is None:
            raise InstanceError("--gen requires --n")
        kind = args.gen or "euclidean"
        return generate_instance(args.n, kind, _resolve_seed(args.seed))
    raise InstanceError("provide an instance via -i PATH or --gen KIND --n N")


def _check_constructor_n(n: int) -> None:
    if n % 4 != 0:
        raise InstanceError("n must be divisible by 4")
    if n < 8:
        raise InstanceError("n must be at least 8")


def _load_schedule_file(path: str):
    """Schedule from JSON (constructor output) or day-list text."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        sched = schedule_from_json(text)
        return sched, sched.n
    return text, None


def cmd_gen(args) -> int:
    inst = generate_instance(args.n, args.kind, _resolve_seed(args.seed))
    if args.output:
        save_instance(inst, args.output, fmt=args.fmt)
    else:
        sys.stdout.write(emit_instance(inst, fmt=args.fmt or "json"))
        sys.stdout.write("\n")
    return 0


def cmd_schedule(args) -> int:
    inst = _obtain_instance(args)
    _check_constructor_n(inst.n)
    sched = build_schedule(inst)
    report = validate_schedule(sched, inst.n)
    if not report.ok:
        for v in report.violations:
            print(f"violation: {v.constraint} day={v.day} teams={v.teams} {v.detail}",
                  file=sys.stderr)
        return 2
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(schedule_to_json(sched))
            fh.write("\n")
    if args.json:
        print(schedule_to_json(sched))
        return 0
    if args.table:
        print(format_level_table(sched))
    matching = min_weight_perfect_matching(inst.dist)
    lb = lower_bound(inst, matching)
    total = total_travel(sched, inst)
    print(f"flips: {sched.flips}")
    print(f"lower bound: {lb:.6f}")
    print(f"total travel: {total:.6f}")
    if lb > 0:
        print(f"ratio: {total / lb:.6f}")
    else:
        print("ratio: n/a")
    return 0


def cmd_validate(args) -> int:
    sched, n = _load_schedule_file(args.input)
    if args.n is not None:
        n = args.n
    if args.instance:
        inst = load_instance(args.instance)
        if n is not None and inst.n != n:
            raise InstanceError(
                f"instance has n={inst.n} but schedule has n={n}")
        n = inst.n
    report = validate_schedule(sched, n)
    if report.ok:
        print("valid")
        return 0
    for v in report.violations:
        print(f"{v.constraint}: day={v.day} teams={v.teams} {v.detail}")
    print(f"{len(report.violations)} violation(s)")
    return 3


def cmd_evaluate(args) -> int:
    sched, _ = _load_schedule_file(args.input)
    inst = load_instance(args.instance)
    if not isinstance(sched, Schedule):
        sched = parse_day_list(sched)  # day-list text: evaluate the raw days
    rep = evaluation_report(sched, inst)
    if args.json:
        print(report_to_json(rep))
    else:
        print(format_report(rep))
    return 0 if rep.valid else 3


def cmd_bench(args) -> int:
    ns = [int(tok) for tok in args.n_set.split(",") if tok.strip()]
    for n in ns:
        _check_constructor_n(n)
    base_seed = _resolve_seed(args.seed)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["n", "seed", "LB", "total", "ratio", "flips", "budget",
                     "factor_ours", "factor_XK", "valid", "millis"])
    any_invalid = False
    any_over = False
    for n in ns:
        budget = math.ceil(flip_budget(n))
        max_ratio = None
        all_valid = True
        for trial in range(args.trials):
            seed = base_seed + trial
            inst = generate_instance(n, "euclidean", seed)
            t0 = time.perf_counter()
            sched = build_schedule(inst)
            millis = (time.perf_counter() - t0) * 1000.0
            rep = evaluation_report(sched, inst)
            ratio = rep.ratio if rep.ratio is not None else float("nan")
            writer.writerow([n, seed, f"{rep.lower_bound:.6f}",
                             f"{rep.total_travel:.6f}", f"{ratio:.9f}",
                             rep.flips, budget, f"{rep.factor_ours:.9f}",
                             f"{rep.factor_xiao_kou:.9f}",
                             "true" if rep.valid else "false",
                             f"{millis:.3f}"])
            all_valid = all_valid and rep.valid
            if max_ratio is None or ratio > max_ratio:
                max_ratio = ratio
            if rep.flips > budget or ratio > rep.factor_ours + BOUND_SLACK:
                any_over = True
        any_invalid = any_invalid or not all_valid
        writer.writerow([n, "max", "", "", f"{max_ratio:.9f}", "", "",
                         f"{float(factors_exact(n)[0]):.9f}", "",
                         "true" if all_valid else "false", ""])
    text = buf.getvalue()
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if any_invalid:
        return 3
    if any_over:
        return 2
    return 0


def cmd_factors(args) -> int:
    rows = []
    for n in range(8, args.n_max + 1, 4):
        ours, xk = factors_exact(n)
        rows.append((n, ours, xk, ours <= xk))
    if args.csv:
        writer = csv.writer(sys.stdout)
        writer.writerow(["n", "factor_ours", "factor_XK", "ours_le_XK"])
        for n, ours, xk, le in rows:
            writer.writerow([n, f"{float(ours):.9f}", f"{float(xk):.9f}",
                             "true" if le else "false"])
        return 0
    print(f"{'n':>4}  {'factor_ours':>12}  {'factor_XK':>12}  ours<=XK")
    for n, ours, xk, le in rows:
        print(f"{n:>4}  {float(ours):>12.9f}  {float(xk):>12.9f}  "
              f"{'yes' if le else 'no'}")
    return 0


def cmd_oracle(args) -> int:
    inst = _obtain_instance(args)
    if args.samples:
        samples = sample_valid_schedules(inst, args.samples,
                                         seed=_resolve_seed(args.seed))
        for k, (_, travel) in enumerate(samples):
            print(f"sample {k}: travel {travel:.6f}")
        return 0
    if inst.n == 4:
        result = brute_force_optimal(inst)
    elif inst.n == 6:
        result = best_effort_optimal(inst, node_budget=args.budget)
    else:
        raise InstanceError(f"oracle supports n in {{4, 6}}, got n={inst.n}")
    print(f"optimum: {result.optimum:.6f}")
    print(f"explored: {result.explored}")
    if not result.optimal:
        print("warning: node budget reached; optimum is an incumbent only",
              file=sys.stderr)
    return 0


def _add_gen_source(sub, with_input=True):
    if with_input:
        sub.add_argument("-i", "--input", metavar="PATH",
                         help="instance file (matrix, csv, or json)")
    sub.add_argument("--gen", choices=GEN_KINDS, metavar="KIND",
                     help="generate an instance instead of reading one "
                          f"(one of: {', '.join(GEN_KINDS)})")
    sub.add_argument("--n", type=int, help="team count for --gen")
    sub.add_argument("--seed", type=int, default=None,
                     help="RNG seed (default: $TTP2_SEED or 0)")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ttp2", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("gen", help="generate a distance-matrix instance")
    p.add_argument("--kind", choices=GEN_KINDS, default="euclidean")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-o", "--output", metavar="PATH")
    p.add_argument("--fmt", choices=("json", "csv", "matrix"), default=None)
    p.set_defaults(func=cmd_gen)

    p = subs.add_parser("schedule", help="build a schedule")
    _add_gen_source(p)
    p.add_argument("-o", "--output", metavar="PATH", help="write schedule JSON")
    p.add_argument("--table", action="store_true",
                   help="print the round/level block table")
    p.add_argument("--json", action="store_true",
                   help="print schedule JSON to stdout")
    p.set_defaults(func=cmd_schedule)

    p = subs.add_parser("validate", help="check a schedule against the constraints")
    p.add_argument("-i", "--input", metavar="PATH", required=True,
                   help="schedule file (JSON or day-list text)")
    p.add_argument("-d", "--instance", metavar="PATH",
                   help="instance file, for cross-checking the team count")
    p.add_argument("-n", type=int, default=None, help="team count for text schedules")
    p.set_defaults(func=cmd_validate)

    p = subs.add_parser("evaluate", help="travel totals, bounds, and ratio")
    p.add_argument("-i", "--input", metavar="PATH", required=True,
                   help="schedule JSON file")
    p.add_argument("-d", "--instance", metavar="PATH", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_evaluate)

    p = subs.add_parser("bench", help="seeded benchmark sweep, CSV output")
    p.add_argument("--n-set", default=BENCH_DEFAULT_NS,
                   help=f"comma-separated team counts (default {BENCH_DEFAULT_NS})")
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-o", "--output", metavar="PATH")
    p.set_defaults(func=cmd_bench)

    p = subs.add_parser("factors", help="approximation factor table")
    p.add_argument("--n-max", type=int, default=40)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_factors)

    p = subs.add_parser("oracle", help="exact search at n=4 (best effort at n=6)")
    _add_gen_source(p)
    p.add_argument("--budget", type=int, default=2_000_000,
                   help="node budget for the n=6 search")
    p.add_argument("--samples", type=int, default=0,
                   help="emit this many randomized valid schedules instead")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except (SchedulingError, OracleBudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InstanceError, MatchingError, ValidationError, TTP2Error) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
