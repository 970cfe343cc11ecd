"""Command-line front end.

Subcommands: oracle build|query, table gen|verify|search|eps-star,
extract check|equiv, demo popular|curse|vv, exp dep-census|hitting,
pipeline run. Every subcommand echoes a one-screen summary and can write
a report envelope with --out. Exit codes: 0 on pass/complete, 1 when a
report assertion fails, 2 on usage or feasibility errors.

Randomized subcommands require an explicit --seed; nothing here reads
environmental entropy. --threads and --override-feasibility are
execution details: they never change results and are not recorded in
reports.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from . import __version__, calibration
from .balance import (
    FeasibilityError,
    balance_check_almost,
    measure_eps_star,
    rainbow_check,
    search_rainbow,
)
from .bits import EMPTY, BitString, all_strings
from .experiments import dependent_census_sweep, hitting_demo, write_census_csv
from .extraction import (
    enumerate_class,
    equivalence_report,
    extraction_check,
    popular_color_demo,
    popular_prefix_demo,
    popular_range_procedure,
)
from .machine import MachineBudget
from .oracle import build_complexity_table, load_table, save_table
from .reports import all_passed, assertion, build_report, write_report
from .tables import (
    SingleSourceTable,
    TwoSourceTable,
    gen_constant,
    gen_gf2_mult,
    gen_inner_product,
    gen_random,
    gen_random_single,
    gen_truncate,
    read_table,
    write_table,
)


def _common_flags(
    parser: argparse.ArgumentParser,
    seed: bool = False,
    out_help: str = "write a JSON report here",
) -> None:
    parser.add_argument("--out", help=out_help)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument(
        "--override-feasibility",
        action="store_true",
        help="run sweeps past the primitive-op guard",
    )
    if seed:
        parser.add_argument("--seed", type=int, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kextract",
        description="Exact Kolmogorov-extraction laboratory",
    )
    parser.add_argument("--version", action="version", version=__version__)
    top = parser.add_subparsers(dest="group", required=True)

    oracle = top.add_parser("oracle", help="complexity table builds and lookups")
    oracle_sub = oracle.add_subparsers(dest="command", required=True)
    p = oracle_sub.add_parser("build", help="enumerate programs into a table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument(
        "--conditions",
        default="lambda",
        help="'lambda', 'all' (lambda plus all n-bit), or 'all:<len>'",
    )
    p.add_argument("--l-max", type=int, default=None)
    p.add_argument("--max-l-max", type=int, default=24)
    p.add_argument("--budget-out", type=int, default=4096)
    p.add_argument("--budget-ops", type=int, default=4096)
    _common_flags(p, out_help="write the oracle table JSON here")
    p.set_defaults(func=cmd_oracle_build)
    p = oracle_sub.add_parser("query", help="look up one complexity value")
    p.add_argument("--table", required=True)
    p.add_argument("--target", required=True, help="target as a 01 string")
    p.add_argument("--cond", default="", help="condition as a 01 string; empty = lambda")
    _common_flags(p)
    p.set_defaults(func=cmd_oracle_query)

    table = top.add_parser("table", help="generate and verify color tables")
    table_sub = table.add_subparsers(dest="command", required=True)
    p = table_sub.add_parser("gen", help="write a table in KEXT binary form")
    p.add_argument(
        "--kind",
        required=True,
        choices=["inner-product", "gf2", "random", "random-single", "constant", "truncate"],
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--color", type=int, default=0, help="constant tables only")
    _common_flags(p, out_help="write the KEXT table here")
    p.set_defaults(func=cmd_table_gen)
    p = table_sub.add_parser("verify", help="exhaustive rectangle balance verdict")
    p.add_argument("--table", required=True)
    p.add_argument("--mode", required=True, choices=["almost", "rainbow"])
    p.add_argument("--k", type=int, help="almost: log2 of the rectangle side")
    p.add_argument("--d", type=int, default=0)
    p.add_argument("--eps", type=float, default=0.25)
    p.add_argument("--u-size", type=int, default=1)
    p.add_argument("--side", type=int, help="rainbow: rectangle side K")
    p.add_argument("--divisor", type=int, help="rainbow: imbalance divisor D")
    _common_flags(p)
    p.set_defaults(func=cmd_table_verify)
    p = table_sub.add_parser("search", help="draw seeded tables until rainbow passes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--side", type=int, required=True)
    p.add_argument("--divisor", type=int, required=True)
    p.add_argument("--max-trials", type=int, required=True)
    p.add_argument("--table-out", help="write the passing table here")
    _common_flags(p, seed=True)
    p.set_defaults(func=cmd_table_search)
    p = table_sub.add_parser("eps-star", help="exact eps* over flat source pairs")
    p.add_argument("--table", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    _common_flags(p)
    p.set_defaults(func=cmd_table_eps_star)

    extract = top.add_parser("extract", help="class deficiency checks")
    extract_sub = extract.add_subparsers(dest="command", required=True)
    p = extract_sub.add_parser("check", help="deficiency census over a class")
    p.add_argument("--table", required=True)
    p.add_argument("--cond-oracle", required=True)
    p.add_argument("--output-oracle", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--require-d", type=int, default=None)
    _common_flags(p)
    p.set_defaults(func=cmd_extract_check)
    p = extract_sub.add_parser("equiv", help="balance-to-class comparison report")
    p.add_argument("--table", required=True)
    p.add_argument("--cond-oracle", required=True)
    p.add_argument("--output-oracle", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--delta", type=int, default=calibration.DELTA_MARGIN)
    _common_flags(p)
    p.set_defaults(func=cmd_extract_equiv)

    demo = top.add_parser("demo", help="counting demonstrations")
    demo_sub = demo.add_subparsers(dest="command", required=True)
    p = demo_sub.add_parser("popular", help="popular color pigeonhole witness")
    p.add_argument("--table", required=True, help="single-source KEXT table")
    p.add_argument("--oracle", required=True)
    _common_flags(p)
    p.set_defaults(func=cmd_demo_popular)
    p = demo_sub.add_parser("curse", help="popular output prefix witness pair")
    p.add_argument("--table", required=True)
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--pair-oracle", required=True)
    p.add_argument("--output-oracle", default=None)
    _common_flags(p)
    p.set_defaults(func=cmd_demo_curse)
    p = demo_sub.add_parser("vv", help="shared-range recovery by popularity voting")
    p.add_argument("--oracle", required=True, help="m-bit targets, all n-bit conditions")
    p.add_argument("--advice", type=int, required=True)
    p.add_argument("--n", type=int, default=None, help="validate the condition length")
    p.add_argument("--m", type=int, default=None, help="validate the target length")
    _common_flags(p)
    p.set_defaults(func=cmd_demo_vv)

    exp = top.add_parser("exp", help="census and hitting experiments")
    exp_sub = exp.add_subparsers(dest="command", required=True)
    p = exp_sub.add_parser("dep-census", help="alpha-dependent partner census sweep")
    p.add_argument("--oracle", required=True)
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--csv", default=None)
    p.add_argument("--max-c", type=float, default=None)
    _common_flags(p)
    p.set_defaults(func=cmd_exp_dep_census)
    p = exp_sub.add_parser("hitting", help="threshold argument vs direct scan")
    p.add_argument("--table", required=True)
    p.add_argument("--cond-oracle", required=True)
    p.add_argument("--output-oracle", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--alpha", type=int, required=True)
    p.add_argument("--set", dest="target_set", default=None, help="comma-separated colors")
    p.add_argument(
        "--set-popular-row",
        type=int,
        default=None,
        help="use the most popular color of this row as the set",
    )
    _common_flags(p)
    p.set_defaults(func=cmd_exp_hitting)

    pipe = top.add_parser("pipeline", help="run committed step sequences")
    pipe_sub = pipe.add_subparsers(dest="command", required=True)
    p = pipe_sub.add_parser("run")
    p.add_argument("--config", default=None, help="JSON step list")
    p.add_argument("--standard", default=None, choices=["n4"], help="built-in pipeline")
    p.add_argument("--out-dir", required=True)
    _common_flags(p)
    p.set_defaults(func=cmd_pipeline_run)

    return parser


def _parse_bits(text: str) -> BitString:
    if text in ("", "-"):
        return EMPTY
    return BitString.from01(text)


def _conditions_for(spec: str, n: int) -> list[BitString]:
    if spec == "lambda":
        return [EMPTY]
    if spec == "all":
        return [EMPTY] + all_strings(n)
    if spec.startswith("all:"):
        return [EMPTY] + all_strings(int(spec.split(":", 1)[1]))
    raise ValueError(f"unknown condition spec {spec!r}")


def _finish(args, command: str, params: dict, data, assertions: list[dict]) -> int:
    report = build_report(command, params, data, assertions)
    for entry in assertions:
        print(f"  {'PASS' if entry['passed'] else 'FAIL'} {entry['name']}")
    if args.out:
        write_report(report, args.out)
        print(f"  report -> {args.out}")
    return 0 if all_passed(report) else 1


def cmd_oracle_build(args) -> int:
    conds = _conditions_for(args.conditions, args.n)
    budget = MachineBudget(args.budget_out, args.budget_ops)
    table = build_complexity_table(
        args.n,
        conds,
        l_max=args.l_max,
        budget=budget,
        max_l_max=args.max_l_max,
        threads=args.threads,
    )
    if not args.out:
        raise ValueError("oracle build needs --out for the table file")
    save_table(table, args.out)
    print(
        f"[oracle build] n={table.n} l_max={table.l_max} "
        f"conditions={len(table.conditions)} not_found(lambda)="
        f"{table.not_found_count() if EMPTY in table.conditions else 'n/a'} "
        f"-> {args.out}"
    )
    return 0


def cmd_oracle_query(args) -> int:
    table = load_table(args.table)
    target = _parse_bits(args.target)
    cond = _parse_bits(args.cond)
    value = table.complexity(target, cond)
    print(f"[oracle query] C({target.to01()!r} | {cond.to01()!r}) = {value}")
    params = {
        "table": args.table,
        "target": target.to01(),
        "cond": cond.to01(),
    }
    return _finish(args, "oracle query", params, {"complexity": value}, [])


def cmd_table_gen(args) -> int:
    kind = args.kind
    if kind == "inner-product":
        table = gen_inner_product(args.n)
    elif kind == "gf2":
        if args.m is None:
            raise ValueError("gf2 needs --m")
        table = gen_gf2_mult(args.n, args.m)
    elif kind == "random":
        if args.m is None or args.seed is None:
            raise ValueError("random needs --m and --seed")
        table = gen_random(args.n, args.m, args.seed)
    elif kind == "random-single":
        if args.m is None or args.seed is None:
            raise ValueError("random-single needs --m and --seed")
        table = gen_random_single(args.n, args.m, args.seed)
    elif kind == "constant":
        if args.m is None:
            raise ValueError("constant needs --m")
        table = gen_constant(args.n, args.m, args.color)
    else:
        if args.m is None:
            raise ValueError("truncate needs --m")
        table = gen_truncate(args.n, args.m)
    if not args.out:
        raise ValueError("table gen needs --out for the KEXT file")
    write_table(table, args.out)
    shape = "two-source" if isinstance(table, TwoSourceTable) else "single-source"
    print(f"[table gen] {kind} n={table.n} m={table.m} ({shape}) -> {args.out}")
    return 0


def cmd_table_verify(args) -> int:
    table = read_table(args.table)
    if not isinstance(table, TwoSourceTable):
        raise ValueError("verification needs a two-source table")
    if args.mode == "almost":
        if args.k is None:
            raise ValueError("--mode almost needs --k")
        report = balance_check_almost(
            table,
            args.k,
            args.d,
            args.eps,
            args.u_size,
            override=args.override_feasibility,
            threads=args.threads,
        )
        print(
            f"[table verify almost] worst={report.worst_cells}/{1 << (2 * args.k)} "
            f"fraction={report.worst_fraction} bound={report.bound} "
            f"passed={report.passed}"
        )
        params = {
            "table": args.table,
            "mode": "almost",
            "k": args.k,
            "d": args.d,
            "eps": args.eps,
            "u_size": args.u_size,
        }
        checks = [assertion("balance_pass", report.passed, report.worst_fraction)]
        return _finish(args, "table verify", params, report, checks)
    if args.side is None or args.divisor is None:
        raise ValueError("--mode rainbow needs --side and --divisor")
    report = rainbow_check(
        table,
        args.side,
        args.divisor,
        override=args.override_feasibility,
        threads=args.threads,
    )
    print(
        f"[table verify rainbow] K={args.side} D={args.divisor} "
        f"per_column={report.per_column.worst_cells} "
        f"per_row={report.per_row.worst_cells} passed={report.passed}"
    )
    params = {
        "table": args.table,
        "mode": "rainbow",
        "side": args.side,
        "divisor": args.divisor,
    }
    checks = [assertion("rainbow_pass", report.passed)]
    return _finish(args, "table verify", params, report, checks)


def cmd_table_search(args) -> int:
    result = search_rainbow(
        args.n,
        args.m,
        args.side,
        args.divisor,
        seed=args.seed,
        max_trials=args.max_trials,
        override=args.override_feasibility,
    )
    print(
        f"[table search] found={result.found} trials={result.trials} "
        f"seed={result.seed}"
    )
    if result.found and args.table_out:
        write_table(result.table, args.table_out)
        print(f"  table -> {args.table_out}")
    params = {
        "n": args.n,
        "m": args.m,
        "side": args.side,
        "divisor": args.divisor,
        "seed": args.seed,
        "max_trials": args.max_trials,
    }
    data = {
        "found": result.found,
        "trials": result.trials,
        "seed_used": result.seed,
        "report": result.report,
    }
    return _finish(args, "table search", params, data, [])


def cmd_table_eps_star(args) -> int:
    table = read_table(args.table)
    if not isinstance(table, TwoSourceTable):
        raise ValueError("eps-star needs a two-source table")
    value = measure_eps_star(
        table,
        args.k,
        args.d,
        override=args.override_feasibility,
        threads=args.threads,
    )
    print(f"[table eps-star] k={args.k} d={args.d} eps*={value!r}")
    params = {"table": args.table, "k": args.k, "d": args.d}
    return _finish(args, "table eps-star", params, {"eps_star": value}, [])


def cmd_extract_check(args) -> int:
    table = read_table(args.table)
    cond_oracle = load_table(args.cond_oracle)
    output_oracle = load_table(args.output_oracle)
    cls = enumerate_class(cond_oracle, args.k, args.alpha)
    report = extraction_check(table, cls, output_oracle)
    print(
        f"[extract check] class={cls.size} (indeterminate {cls.indeterminate}) "
        f"max_deficiency={report.max_deficiency} min_C={report.min_output_complexity}"
    )
    params = {
        "table": args.table,
        "cond_oracle": args.cond_oracle,
        "output_oracle": args.output_oracle,
        "k": args.k,
        "alpha": args.alpha,
        "require_d": args.require_d,
    }
    checks = []
    if args.require_d is not None:
        checks.append(
            assertion(
                f"extracts_within_d={args.require_d}",
                report.is_extractor(args.require_d),
                report.max_deficiency,
            )
        )
    return _finish(args, "extract check", params, report, checks)


def cmd_extract_equiv(args) -> int:
    table = read_table(args.table)
    cond_oracle = load_table(args.cond_oracle)
    output_oracle = load_table(args.output_oracle)
    report = equivalence_report(
        table,
        args.k,
        args.d,
        cond_oracle,
        output_oracle,
        delta=args.delta,
        override=args.override_feasibility,
        threads=args.threads,
    )
    print(
        f"[extract equiv] eps*={report.eps_star!r} alpha={report.alpha} "
        f"class={report.class_size} table_max_def={report.table_report.max_deficiency} "
        f"constant_max_def={report.constant_report.max_deficiency} "
        f"separated={report.separated}"
    )
    params = {
        "table": args.table,
        "cond_oracle": args.cond_oracle,
        "output_oracle": args.output_oracle,
        "k": args.k,
        "d": args.d,
        "delta": args.delta,
    }
    checks = [
        assertion("class_nonempty", report.class_size > 0, report.class_size),
        assertion("separated", report.separated),
    ]
    return _finish(args, "extract equiv", params, report, checks)


def cmd_demo_popular(args) -> int:
    table = read_table(args.table)
    if not isinstance(table, SingleSourceTable):
        raise ValueError("demo popular needs a single-source table")
    oracle = load_table(args.oracle)
    report = popular_color_demo(table, oracle)
    print(
        f"[demo popular] color={report.color} preimages={report.preimages} "
        f"witness_x={report.witness_x} C={report.witness_complexity} "
        f"floor={report.floor}"
    )
    params = {"table": args.table, "oracle": args.oracle}
    checks = [
        assertion("preimage_bound_met", report.preimage_bound_met, report.preimages),
        assertion("floor_certified", report.floor_certified, report.floor),
    ]
    return _finish(args, "demo popular", params, report, checks)


def cmd_demo_curse(args) -> int:
    table = read_table(args.table)
    if not isinstance(table, TwoSourceTable):
        raise ValueError("demo curse needs a two-source table")
    pair_oracle = load_table(args.pair_oracle)
    output_oracle = load_table(args.output_oracle) if args.output_oracle else None
    report = popular_prefix_demo(table, args.alpha, pair_oracle, output_oracle)
    print(
        f"[demo curse] prefix={report.prefix} cells={report.pair_count} "
        f"witness={report.witness} C={report.witness_complexity} "
        f"floor={report.floor} deficiency={report.output_deficiency}"
    )
    params = {
        "table": args.table,
        "alpha": args.alpha,
        "pair_oracle": args.pair_oracle,
        "output_oracle": args.output_oracle,
    }
    checks = [
        assertion("pair_bound_met", report.pair_bound_met, report.pair_count),
        assertion("floor_certified", report.floor_certified, report.floor),
    ]
    return _finish(args, "demo curse", params, report, checks)


def cmd_demo_vv(args) -> int:
    oracle = load_table(args.oracle)
    if args.m is not None and oracle.n != args.m:
        raise ValueError(f"oracle targets {oracle.n}-bit strings, not m={args.m}")
    report = popular_range_procedure(oracle, args.advice)
    if args.n is not None and report.n != args.n:
        raise ValueError(f"oracle conditions are {report.n}-bit, not n={args.n}")
    print(
        f"[demo vv] chosen={list(report.chosen)} case={report.case} "
        f"witnesses={report.witness_count} bound_met={report.count_bound_met}"
    )
    params = {"oracle": args.oracle, "advice": args.advice, "n": args.n, "m": args.m}
    checks = [
        assertion("count_bound_met", report.count_bound_met, report.witness_count),
        assertion("ranges_match", report.ranges_match),
    ]
    return _finish(args, "demo vv", params, report, checks)


def cmd_exp_dep_census(args) -> int:
    oracle = load_table(args.oracle)
    report = dependent_census_sweep(oracle, args.alpha, committed_max_c=args.max_c)
    print(
        f"[exp dep-census] alpha={args.alpha} max_c={report.max_fitted_c!r} "
        f"sizes={report.size_histogram}"
    )
    if args.csv:
        write_census_csv(report.censuses, report.n, args.csv)
        print(f"  csv -> {args.csv}")
    params = {"oracle": args.oracle, "alpha": args.alpha, "max_c": args.max_c}
    checks = []
    if args.max_c is not None:
        checks.append(
            assertion("within_committed_c", bool(report.within_committed), report.max_fitted_c)
        )
    data = {
        "n": report.n,
        "alpha": report.alpha,
        "max_fitted_c": report.max_fitted_c,
        "size_histogram": report.size_histogram,
    }
    return _finish(args, "exp dep-census", params, data, checks)


def cmd_exp_hitting(args) -> int:
    table = read_table(args.table)
    if not isinstance(table, TwoSourceTable):
        raise ValueError("exp hitting needs a two-source table")
    cond_oracle = load_table(args.cond_oracle)
    output_oracle = load_table(args.output_oracle)
    if (args.target_set is None) == (args.set_popular_row is None):
        raise ValueError("pass exactly one of --set / --set-popular-row")
    if args.target_set is not None:
        targets = [int(z) for z in args.target_set.split(",") if z != ""]
    else:
        row = table.colors[args.set_popular_row]
        counts = [0] * table.num_colors
        for z in row:
            counts[int(z)] += 1
        targets = [max(range(table.num_colors), key=lambda z: (counts[z], -z))]
    cls = enumerate_class(cond_oracle, args.k, args.alpha)
    report = hitting_demo(table, cls, targets, output_oracle)
    print(
        f"[exp hitting] set={targets} applies={report.threshold_applies} "
        f"hits={len(report.hits)} consistent={report.consistent}"
    )
    params = {
        "table": args.table,
        "cond_oracle": args.cond_oracle,
        "output_oracle": args.output_oracle,
        "k": args.k,
        "alpha": args.alpha,
        "set": targets,
    }
    checks = [assertion("consistent", report.consistent, len(report.hits))]
    return _finish(args, "exp hitting", params, report, checks)


def cmd_pipeline_run(args) -> int:
    from .pipeline import run_pipeline

    return run_pipeline(
        config_path=args.config,
        standard=args.standard,
        out_dir=args.out_dir,
        threads=args.threads,
        override=args.override_feasibility,
    )


def dispatch(argv: list[str]) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FeasibilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FileNotFoundError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
