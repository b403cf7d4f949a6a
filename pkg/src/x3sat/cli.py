"""Command-line front end.

Exit codes: 10 satisfiable, 20 unsatisfiable, 0 for non-decision
subcommands, 1 on any error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import branching_number
from .branch import SolverConfig, solve
from .connection import ConnectionGraph, bridge_edges, components
from .formula import ParseError, evaluate_exact, parse, reconstruct, serialize
from .generate import gen_random
from .oracle import brute_force
from .rulecheck import rule_soundness_check
from .simplify import RULE_IDS

EXIT_SAT = 10
EXIT_UNSAT = 20


def _load(path: str, cnf_ok: bool):
    return parse(Path(path).read_text(), cnf_ok=cnf_ok)


def _config(args) -> SolverConfig:
    return SolverConfig(use_components=not args.no_components,
                        forced_false_shortcut=args.forced_false)


def _stats_line(stats) -> str:
    cases = ",".join(f"{k}:{v}" for k, v in sorted(stats.case_counts.items()))
    return (f"c stats nodes={stats.nodes} depth={stats.max_depth} "
            f"endgames={stats.endgames} cases={cases or '-'}")


def _value_line(f, seed_log, model) -> str:
    full = reconstruct(seed_log, model)
    top = max(f.n_declared, f.max_var())
    vals = [str(v if full.get(v, False) else -v) for v in range(1, top + 1)]
    return "v " + " ".join(vals + ["0"])


def cmd_solve(args) -> int:
    f, seed_log = _load(args.file, args.cnf)
    res = solve(f, _config(args))
    if args.stats:
        print(_stats_line(res.stats))
    if res.sat:
        print("s EXACT-SATISFIABLE")
        print(_value_line(f, seed_log, res.model))
        return EXIT_SAT
    print("s UNSATISFIABLE")
    return EXIT_UNSAT


def cmd_verify(args) -> int:
    f, seed_log = _load(args.file, args.cnf)
    res = solve(f, _config(args))
    oracle = brute_force(f)
    if res.sat != oracle.sat:
        print(f"error: solver says {res.sat}, oracle says {oracle.sat}",
              file=sys.stderr)
        return 1
    if res.sat and not evaluate_exact(f, res.model):
        print("error: solver model fails the formula", file=sys.stderr)
        return 1
    print(f"c verify decision=agree model={'ok' if res.sat else '-'}")
    if res.sat:
        print("s EXACT-SATISFIABLE")
        print(_value_line(f, seed_log, res.model))
        return EXIT_SAT
    print("s UNSATISFIABLE")
    return EXIT_UNSAT


def cmd_gen(args) -> int:
    f = gen_random(args.n, args.m, args.seed, args.neg_prob, args.cap)
    text = serialize(f)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_rulecheck(args) -> int:
    rules = [args.rule] if args.rule else list(RULE_IDS)
    failed = False
    for rule in rules:
        rep = rule_soundness_check(rule, budget=args.budget, seed=args.seed)
        print(json.dumps({"rule": rep.rule, "fired": rep.fired,
                          "attempts": rep.attempts,
                          "failures": len(rep.failures)}))
        if not rep.ok:
            failed = True
            for case in rep.failures[:3]:
                print(f"c counterexample {case}", file=sys.stderr)
    return 1 if failed else 0


def cmd_lambda(args) -> int:
    print(f"{branching_number(args.delta):.6f}")
    return 0


def cmd_stats(args) -> int:
    f, _ = _load(args.file, args.cnf)
    graph = ConnectionGraph(f)
    print(f"n={f.n} m={f.m} phi={f.phi() if f.m else 0}")
    print(f"components={len(components(f))} edges={graph.edge_count()} "
          f"bridges={len(bridge_edges(f))}")
    return 0


def cmd_bench(args) -> int:
    from .reports import format_table, run_bench
    summaries = run_bench(args.spec, args.out, SolverConfig(
        use_components=not args.no_components,
        forced_false_shortcut=args.forced_false))
    print(format_table(summaries))
    if any(not s["bound_ok"] for s in summaries):
        print("error: a row exceeded the node bound", file=sys.stderr)
        return 1
    return 0


def _add_solver_flags(p) -> None:
    p.add_argument("--cnf", action="store_true",
                   help="accept a 'p cnf' header (still exact-one semantics)")
    p.add_argument("--no-components", action="store_true",
                   help="disable independent-component decomposition")
    p.add_argument("--forced-false", action="store_true",
                   help="enable the monotone-triple pruning shortcut")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="x3sat",
        description="Exact satisfiability (one true literal per clause, "
                    "width <= 3): solve, generate, audit, benchmark.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide one instance")
    p.add_argument("file")
    p.add_argument("--stats", action="store_true",
                   help="print a c-line with search statistics")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="solve and cross-check with brute force")
    p.add_argument("file")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="write a seeded random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--neg-prob", type=float, default=0.25)
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("rulecheck", help="audit rewrite rules against the oracle")
    p.add_argument("--rule", choices=list(RULE_IDS), default=None)
    p.add_argument("--budget", type=int, default=300,
                   help="fired instances required per rule")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_rulecheck)

    p = sub.add_parser("lambda", help="branching number of a delta vector")
    p.add_argument("delta", type=int, nargs="+")
    p.set_defaults(func=cmd_lambda)

    p = sub.add_parser("stats", help="structural summary of one instance")
    p.add_argument("file")
    p.add_argument("--cnf", action="store_true")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", help="run a benchmark corpus spec")
    p.add_argument("spec")
    p.add_argument("--out", default="bench_out")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_bench)

    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
