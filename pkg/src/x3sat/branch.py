"""Branching search for exact satisfiability.

Each node either brute-forces a tiny instance, decomposes into independent
components, hands a degree-<=2 remainder to the matching endgame, splits the
formula at a one-literal cut, or branches on a carefully chosen variable.
The selection rules keep every two-way branch shrinking the clause count
fast enough for the advertised worst-case bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .analysis import BranchStats, SolveResult
from .connection import CutSplit, components, verify_cut
from .formula import (CONFLICT, Formula, Record, evaluate_exact, reconstruct,
                      var_of)
from .matching import solve_degree2
from .oracle import brute_force
from .propagate import omega
from .simplify import InternalError, reduce

__all__ = ["BranchStats", "CaseContext", "SolveResult", "SolverConfig",
           "select_case", "solve"]


@dataclass
class SolverConfig:
    use_components: bool = True       # solve variable-disjoint parts separately
    forced_false_shortcut: bool = False  # monotone triple pruning (off: plain branch)
    oracle_limit: int = 25            # brute-force ceiling, in variables


@dataclass
class CaseContext:
    """What the dispatcher decided for one node and why."""

    tag: str
    x: int = 0                        # branch literal, 0 when not branching
    triple: tuple[int, ...] = ()      # ids of the chosen variable's clauses
    connecting: tuple[int, ...] = ()  # ids of outside clauses touching them
    cut: CutSplit | None = None
    downgraded: bool = False          # a cut shape matched but the cut failed
    forced: bool = False              # shortcut precondition (monotone triple)


def _shared_vars(f: Formula, cid_a: int, cid_b: int, skip: int) -> set[int]:
    va = {var_of(l) for l in f.clauses[cid_a]} - {skip}
    vb = {var_of(l) for l in f.clauses[cid_b]} - {skip}
    return va & vb


def _try_two_connector_shapes(f: Formula, x_var: int, c_pos: list[int],
                              c_neg: int, conn: list[int]) -> CaseContext | None:
    """Match the two patterns that allow splitting at a one-literal cut.

    Shape A: one connector rides both positive clauses, the other touches
    only the negative clause and carries an otherwise-unused variable; the
    formula then splits at the negative clause's shared variable.  Shape B
    mirrors it: one connector on the first positive clause, the other across
    the second positive and the negative clause; the split happens at the
    first positive clause's shared variable.
    """
    c3 = c_neg
    triple_vars = {var_of(l) for cid in c_pos + [c3] for l in f.clauses[cid]}
    for d4, d5 in ((conn[0], conn[1]), (conn[1], conn[0])):
        vars4 = {var_of(l) for l in f.clauses[d4]}
        vars5 = {var_of(l) for l in f.clauses[d5]}
        for c1, c2 in ((c_pos[0], c_pos[1]), (c_pos[1], c_pos[0])):
            s41 = _shared_vars(f, d4, c1, x_var)
            s42 = _shared_vars(f, d4, c2, x_var)
            s43 = _shared_vars(f, d4, c3, x_var)
            s51 = _shared_vars(f, d5, c1, x_var)
            s52 = _shared_vars(f, d5, c2, x_var)
            s53 = _shared_vars(f, d5, c3, x_var)
            if (len(vars4) == 3 and len(s41) == 1 and len(s42) == 1
                    and not s43 and len(vars4 - triple_vars) == 1
                    and len(vars5) == 3 and len(s53) == 1
                    and not s51 and not s52 and len(vars5 - triple_vars) == 2):
                (z1,) = vars4 - triple_vars
                if f.degree(z1) != 1:
                    return CaseContext("6.1.2", 0, (c1, c2, c3), tuple(conn))
                (link,) = s53
                cut_lit = next(l for l in f.clauses[c3] if var_of(l) == link)
                cut = verify_cut(f, [c1, c2, c3, d4], cut_lit)
                if cut is None:
                    return CaseContext("6.1.5", 0, (c1, c2, c3), tuple(conn),
                                       downgraded=True)
                return CaseContext("6.1.1", cut_lit, (c1, c2, c3), tuple(conn),
                                   cut=cut)
            if (len(vars4) == 3 and len(s41) == 1 and not s42 and not s43
                    and len(vars4 - triple_vars) == 2
                    and len(vars5) == 3 and len(s52) == 1 and len(s53) == 1
                    and not s51 and len(vars5 - triple_vars) == 1):
                (z3,) = vars5 - triple_vars
                if f.degree(z3) != 1:
                    return CaseContext("6.1.4", 0, (c1, c2, c3), tuple(conn))
                (link,) = s41
                cut_lit = next(l for l in f.clauses[c1] if var_of(l) == link)
                cut = verify_cut(f, [c1, c2, c3, d5], cut_lit)
                if cut is None:
                    return CaseContext("6.1.5", 0, (c1, c2, c3), tuple(conn),
                                       downgraded=True)
                return CaseContext("6.1.3", cut_lit, (c1, c2, c3), tuple(conn),
                                   cut=cut)
    return None


def select_case(f: Formula) -> CaseContext:
    """Pick the node strategy for a simplified formula of 6+ clauses.

    Degree 4+ variables are branched directly.  At maximum degree 3 the
    structure around the lowest eligible variable decides between a cut
    split, a plain branch, or (for an all-positive variable) the monotone
    case.  When no variable reaches degree 3 the matching endgame takes
    over.
    """
    phi = f.phi()
    if phi >= 4:
        best = max(f.vars(),
                   key=lambda v: (f.degree(v), f.polarity_counts(v)[0], -v))
        return CaseContext("5", best if f.polarity_counts(best)[0] > 0 else -best)
    if phi <= 2:
        return CaseContext("8")
    two_one = sorted(v for v in f.vars() if f.polarity_counts(v) == (2, 1))
    if not two_one:
        three_zero = sorted(v for v in f.vars()
                            if f.polarity_counts(v) == (3, 0))
        if not three_zero:
            raise InternalError("degree-3 variable with flipped majority")
        x = three_zero[0]
        cids = sorted({e[0] for e in f.occ[x]})
        others = {l for cid in cids for l in f.clauses[cid] if var_of(l) != x}
        forced = any(set(f.clauses[cid]) <= others
                     for cid in f.clauses if cid not in cids)
        return CaseContext("7", x, tuple(cids), forced=forced)
    x = two_one[0]
    c_pos = sorted({e[0] for e in f.occ[x] if e[2] > 0})
    c_neg = sorted({e[0] for e in f.occ[x] if e[2] < 0})
    if len(c_pos) != 2 or len(c_neg) != 1:
        return CaseContext("6.0", x)  # variable repeats inside one clause
    triple = c_pos + c_neg
    triple_vars = {var_of(l) for cid in triple for l in f.clauses[cid]} - {x}
    conn = sorted(cid for cid in f.clauses if cid not in triple
                  and triple_vars & {var_of(l) for l in f.clauses[cid]})
    if len(conn) >= 3:
        return CaseContext("6.2", x, tuple(triple), tuple(conn))
    if len(conn) <= 1:
        return CaseContext("6.0", x, tuple(triple), tuple(conn))
    ctx = _try_two_connector_shapes(f, x, c_pos, c_neg[0], conn)
    if ctx is None:
        ctx = CaseContext("6.1.5", 0, tuple(triple), tuple(conn))
    if not ctx.x:
        ctx.x = x  # cut cases carry the cut literal instead
    return ctx


def _branch(f: Formula, x: int, tag: str, stats: BranchStats,
            cfg: SolverConfig, depth: int) -> dict[int, bool] | None:
    log1: list[Record] = []
    log2: list[Record] = []
    g1 = omega(f, x, log1)
    g2 = omega(f, -x, log2)
    r1 = f.m if g1 is CONFLICT else f.m - g1.m
    r2 = f.m if g2 is CONFLICT else f.m - g2.m
    stats.nodes += 1
    stats.vectors.append((tag, r1, r2))
    if g1 is CONFLICT:
        stats.bump("1")
    else:
        sub = _search(g1, stats, cfg, depth + 1)
        if sub is not None:
            return reconstruct(log1, sub)
    if g2 is CONFLICT:
        stats.bump("1")
    else:
        sub = _search(g2, stats, cfg, depth + 1)
        if sub is not None:
            return reconstruct(log2, sub)
    return None


def _split(f: Formula, ctx: CaseContext, stats: BranchStats,
           cfg: SolverConfig, depth: int) -> dict[int, bool] | None:
    """Decide both sides of a one-literal cut.

    The four-clause block is brute-forced under each polarity of the cut
    literal; the rest of the formula continues through the normal search.
    Only the rest contributes future nodes, so the branch deltas count the
    block as fully paid on both sides.
    """
    cut = ctx.cut
    lit = cut.lit
    sides = []
    for pol in (lit, -lit):
        log2: list[Record] = []
        g2 = omega(cut.f2, pol, log2)
        r = f.m if g2 is CONFLICT else f.m - g2.m
        sides.append((pol, g2, log2))
        if pol == lit:
            r1 = r
        else:
            r2 = r
    stats.nodes += 1
    stats.vectors.append((ctx.tag, r1, r2))
    for pol, g2, log2 in sides:
        block = cut.f1.clone()
        block.add_clause([pol])
        res1 = brute_force(block, var_limit=cfg.oracle_limit)
        if not res1.sat:
            continue
        if g2 is CONFLICT:
            stats.bump("1")
            continue
        sub = _search(g2, stats, cfg, depth + 1)
        if sub is None:
            continue
        model = reconstruct(log2, sub)
        model.update(res1.model)
        return model
    return None


def _search(f: Formula, stats: BranchStats, cfg: SolverConfig,
            depth: int) -> dict[int, bool] | None:
    stats.max_depth = max(stats.max_depth, depth)
    if f.m == 0:
        stats.bump("2")
        return {}
    if f.m < 6:
        stats.bump("3")
        res = brute_force(f, var_limit=cfg.oracle_limit)
        return dict(res.model) if res.sat else None
    if cfg.use_components:
        comps = components(f)
        if len(comps) > 1:
            stats.bump("4")
            model: dict[int, bool] = {}
            for sub_f in comps:
                sub = _search(sub_f, stats, cfg, depth)
                if sub is None:
                    return None
                model.update(sub)
            return model
    ctx = select_case(f)
    stats.bump(ctx.tag)
    if ctx.downgraded:
        stats.cut_fallbacks += 1
    if ctx.tag == "8":
        stats.endgames += 1
        res = solve_degree2(f)
        return res.model if res.sat else None
    if ctx.tag in ("6.1.1", "6.1.3"):
        return _split(f, ctx, stats, cfg, depth)
    if ctx.tag == "7" and cfg.forced_false_shortcut and ctx.forced:
        log: list[Record] = []
        g = omega(f, -ctx.x, log)
        if g is CONFLICT:
            return None
        sub = _search(g, stats, cfg, depth)
        return None if sub is None else reconstruct(log, sub)
    return _branch(f, ctx.x, ctx.tag, stats, cfg, depth)


def solve(f: Formula, config: SolverConfig | None = None) -> SolveResult:
    """Decide ``f`` and, when satisfiable, return a verified model."""
    cfg = config or SolverConfig()
    stats = BranchStats()
    log: list[Record] = []
    res = reduce(f, log)
    if res is CONFLICT:
        return SolveResult(False, None, stats)
    sub = _search(res[0], stats, cfg, 0)
    if sub is None:
        return SolveResult(False, None, stats)
    model = reconstruct(log, sub)
    missing = [v for v in f.vars() if v not in model]
    if missing:
        raise InternalError(f"model misses variables {missing}")
    if not evaluate_exact(f, model):
        raise InternalError("reconstructed model fails the formula")
    return SolveResult(True, model, stats)
