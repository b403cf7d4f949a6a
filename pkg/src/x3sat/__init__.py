"""Exact satisfiability for width-<=3 clauses: one true literal per clause."""

from .analysis import (BranchStats, SolveResult, bound_report,
                       branching_number)
from .branch import CaseContext, SolverConfig, select_case, solve
from .connection import ConnectionGraph, CutSplit, components, verify_cut
from .formula import (CONFLICT, Alias, Bind, Completion, Conflict, Formula,
                      Free, ParseError, assign_true, clause_key,
                      evaluate_exact, num_connected_clauses, parse,
                      reconstruct, serialize, var_of)
from .generate import gen_random
from .matching import maximum_matching, solve_degree2
from .oracle import OracleResult, brute_force
from .propagate import omega
from .rulecheck import check_all, rule_soundness_check
from .simplify import (InternalError, RULE_IDS, apply_rule, assert_simplified,
                       reduce, replay_trace)

__all__ = [
    "Alias", "Bind", "BranchStats", "CONFLICT", "CaseContext", "Completion",
    "Conflict", "ConnectionGraph", "CutSplit", "Formula", "Free",
    "InternalError", "OracleResult", "ParseError", "RULE_IDS", "SolveResult",
    "SolverConfig", "apply_rule", "assert_simplified", "assign_true",
    "bound_report", "branching_number", "brute_force", "check_all",
    "clause_key", "components", "evaluate_exact", "gen_random",
    "maximum_matching", "num_connected_clauses", "omega", "parse",
    "reconstruct", "reduce", "replay_trace", "rule_soundness_check",
    "select_case", "serialize", "solve", "solve_degree2", "var_of",
    "verify_cut",
]
