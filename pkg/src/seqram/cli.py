"""Command-line interface.

Exit codes: 0 success, 1 domain failure (validation failed, reproduction
mismatch, menu not covered by the rule), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from seqram import harness, laws
from seqram.attention import validate
from seqram.core import ChoiceModelError, IncompleteRuleError, InputError
from seqram.ram import choice_probability
from seqram.report import ResultTable
from seqram.reproduce import reproduce
from seqram.rulefile import RuleFileError, load_rule_file
from seqram.sequential import (
    TournamentPlan,
    compare_architectures,
    divergence_witness,
    sequential_distribution,
)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


def _split(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in _split(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in _split(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _emit(tables: Sequence[ResultTable], args: argparse.Namespace) -> None:
    for i, table in enumerate(tables):
        if i:
            print()
        if args.csv:
            if table.title:
                print(f"# {table.title}")
            print(table.to_csv(args.exact), end="")
        else:
            print(table.render(args.exact))


def _names(rule, subset) -> str:
    return "{" + ",".join(rule.universe.ordered(subset)) + "}"


def distribution_table(rule, dist, title: str | None = None) -> ResultTable:
    t = ResultTable(["alternative", "probability"], title=title)
    for x in rule.universe.ordered(dist.menu):
        t.add(x, dist[x])
    t.add("(no choice)", dist.no_choice)
    return t


def cmd_validate(args: argparse.Namespace) -> int:
    rule = load_rule_file(args.file)
    report = validate(rule)
    t = ResultTable(["check", "passed", "findings"], title=f"validation of {args.file}")
    t.add("non-degeneracy", report.is_non_degenerate, len(report.non_degeneracy_violations))
    t.add("monotonicity", report.is_monotone, len(report.monotonicity_violations))
    t.add("completeness", report.is_complete, len(report.missing_menus))
    tables = [t]
    if not report.ok:
        w = ResultTable(["kind", "detail"], title="findings")
        for menu, mass in report.non_degeneracy_violations:
            w.add("non-degeneracy", f"menu {_names(rule, menu)} has mass {mass:.12g}")
        for subset, menu, a, here, there in report.monotonicity_violations:
            w.add(
                "monotonicity",
                f"mu({_names(rule, subset)}|{_names(rule, menu)}) = {here:.12g} > "
                f"mu({_names(rule, subset)}|{_names(rule, menu - {a})}) = {there:.12g}",
            )
        for menu in report.missing_menus:
            w.add("completeness", f"menu {_names(rule, menu)} is not defined")
        tables.append(w)
    _emit(tables, args)
    return EXIT_OK if report.ok else EXIT_DOMAIN


def cmd_ram(args: argparse.Namespace) -> int:
    rule = load_rule_file(args.file)
    menu = rule.universe.menu(args.menu)
    dist = choice_probability(rule, menu)
    _emit([distribution_table(rule, dist, f"pi(x | {_names(rule, menu)})")], args)
    return EXIT_OK


def _plan(args: argparse.Namespace) -> TournamentPlan:
    return TournamentPlan(tuple(args.order), args.assoc, args.no_choice)


def cmd_seq(args: argparse.Namespace) -> int:
    rule = load_rule_file(args.file)
    plan = _plan(args)
    outcome = sequential_distribution(rule, plan)
    final = distribution_table(
        rule, outcome.final, f"sequential outcome, order {','.join(plan.order)} ({plan.association})"
    )
    log = ResultTable(["stage", "left", "right", "weight", "left wins", "right wins", "no choice"],
                      title="stage log")
    for stage in outcome.stage_log:
        for m in stage.matches:
            log.add(stage.index, m.left, m.right, m.weight, m.result[m.left], m.result[m.right],
                    m.result.no_choice)
    _emit([final, log], args)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    rule = load_rule_file(args.file)
    plan = _plan(args)
    menu = args.menu if args.menu else None
    cmp = compare_architectures(rule, menu, plan)
    t = ResultTable(["best", "Pr_SEQ", "Pr_SIM", "difference", "verdict"], title="architecture comparison")
    t.add(cmp.best, cmp.seq, cmp.sim, cmp.difference, cmp.verdict)
    w = divergence_witness(rule, menu, plan)
    d = ResultTable(["total variation", "largest gap at", "gap (SEQ - SIM)"], title="divergence")
    if w is None:
        d.add(0.0, None, None)
    else:
        d.add(w.total_variation, w.alternative, w.gap)
    _emit([t, d], args)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    rows = harness.arity_sweep(args.p_grid, args.n, args.uplift or ["threshold"])
    t = ResultTable(["n", "p_n", "uplift", "p_2", "threshold", "sim", "seq", "verdict"],
                    title="simultaneous vs binary tournament")
    for r in rows:
        t.add(r.n, r.p_n, r.uplift, r.p_2, r.threshold, r.sim, r.seq, r.verdict)
    _emit([t], args)
    return EXIT_OK


def cmd_search(args: argparse.Namespace) -> int:
    config = harness.SearchConfig(
        hypothesis=args.hypothesis,
        trials=args.trials,
        seed=args.seed,
        universe_size=args.size,
        grid_resolution=args.grid,
        family=args.family,
        association=args.assoc,
    )
    summary = harness.hypothesis_search(config, workers=args.workers)
    if args.json:
        print(summary.to_json())
        return EXIT_OK
    t = ResultTable(["hypothesis", "family", "trials", "violations", "generation failures", "rate"],
                    title=f"hypothesis search (seed {config.seed})")
    t.add(config.hypothesis, config.family, summary.trials, summary.violations,
          summary.generation_failures, summary.violation_rate)
    _emit([t], args)
    if summary.first_witnesses:
        print()
        print("first witnesses:")
        for w in summary.first_witnesses:
            print(json.dumps(w, sort_keys=True))
    return EXIT_OK


def cmd_axioms(args: argparse.Namespace) -> int:
    rule = load_rule_file(args.file)
    reports = [
        laws.check_a1(rule, args.p_floor),
        laws.check_a2(rule),
        laws.check_a3(rule),
        laws.check_a4(rule),
    ]
    t = ResultTable(["axiom", "holds", "witnesses", "checked"], title="axiom checks")
    for r in reports:
        t.add(r.axiom, r.holds, len(r.witnesses), r.coverage)
    tables = [t]
    if any(r.witnesses for r in reports):
        w = ResultTable(["axiom", "witness"], title="witnesses")
        for r in reports:
            for item in r.witnesses:
                w.add(r.axiom, _describe(rule, item))
        tables.append(w)
    _emit(tables, args)
    return EXIT_OK


def _describe(rule, item: tuple) -> str:
    parts = []
    for v in item:
        if isinstance(v, frozenset):
            parts.append(_names(rule, v))
        elif isinstance(v, float):
            parts.append(f"{v:.6g}")
        else:
            parts.append(str(v))
    return " ".join(parts)


def cmd_reproduce(args: argparse.Namespace) -> int:
    result = reproduce()
    _emit([result.table()], args)
    if not result.ok:
        print(file=sys.stderr)
        for row in result.mismatches:
            print(f"mismatch: {row.quantity}: expected {row.expected}, computed {row.computed}",
                  file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--csv", action="store_true", help="comma-separated output")
    common.add_argument("--exact", action="store_true", help="print 12 significant digits")

    tour = argparse.ArgumentParser(add_help=False)
    tour.add_argument("--order", type=_split, required=True, help="presentation order, e.g. A,B,D")
    tour.add_argument("--assoc", choices=["left", "right"], default="left")
    tour.add_argument("--no-choice", choices=["abort", "bye"], default="abort",
                      help="what happens when a stage picks nothing")

    parser = argparse.ArgumentParser(
        prog="seqram",
        description="Random-attention choice: simultaneous menus vs pairwise tournaments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a rule file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("ram", parents=[common], help="simultaneous choice probabilities")
    p.add_argument("file")
    p.add_argument("--menu", type=_split, required=True)
    p.set_defaults(func=cmd_ram)

    p = sub.add_parser("seq", parents=[common, tour], help="sequential tournament outcome")
    p.add_argument("file")
    p.set_defaults(func=cmd_seq)

    p = sub.add_parser("compare", parents=[common, tour], help="SEQ vs SIM on a menu")
    p.add_argument("file")
    p.add_argument("--menu", type=_split, default=None, help="defaults to the order's members")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", parents=[common], help="closed-form arity sweep")
    p.add_argument("--p-grid", type=_floats, required=True)
    p.add_argument("--n", type=_ints, default=[3])
    p.add_argument("--uplift", action="append",
                   help="homogeneous, threshold, plus:<delta> or fixed:<p2>; repeatable")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("search", parents=[common], help="randomized hypothesis search")
    p.add_argument("--hypothesis", choices=harness.HYPOTHESES, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=int, default=3, help="number of alternatives")
    p.add_argument("--grid", type=int, default=10, help="probability grid resolution")
    p.add_argument("--family", choices=harness.FAMILIES, default="monotone")
    p.add_argument("--assoc", choices=["left", "right"], default="left")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", action="store_true", help="print the summary as JSON")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("axioms", parents=[common], help="check axioms A1-A4")
    p.add_argument("file")
    p.add_argument("--p-floor", type=float, default=0.8)
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("reproduce", parents=[common], help="recompute the worked example")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (RuleFileError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IncompleteRuleError, ChoiceModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
