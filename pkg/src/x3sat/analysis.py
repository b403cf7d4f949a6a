"""Search-tree accounting: branching numbers, run statistics, bound checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

WORST_CASE_LAMBDA = 1.15855
EPSILON = 0.02


def branching_number(deltas) -> float:
    """Unique root > 1 of  sum(x**-d for d in deltas) == 1  (1.0 if one delta).

    Measures how fast a search tree grows when one node spawns children that
    shrink the instance by the given amounts.
    """
    rs = [float(d) for d in deltas]
    if not rs or any(d <= 0 for d in rs):
        raise ValueError(f"deltas must be positive: {rs!r}")
    k = len(rs)
    if k == 1:
        return 1.0

    def g(x: float) -> float:
        return sum(x ** -d for d in rs) - 1.0

    lo = 1.0 + 1e-12
    hi = k ** (1.0 / min(rs))  # g(hi) <= 0: the slowest-shrinking child alone caps growth
    if g(hi) > 0:
        hi *= 1.0 + 1e-9
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12:
            break
    x = 0.5 * (lo + hi)
    # A few Newton polish steps on the bisection result.
    for _ in range(4):
        gx = sum(x ** -d for d in rs) - 1.0
        dgx = sum(-d * x ** (-d - 1.0) for d in rs)
        if dgx == 0:
            break
        x -= gx / dgx
        if x <= 1.0:
            x = lo
            break
    return x


@dataclass
class BranchStats:
    """Counters collected during one solve."""

    nodes: int = 0
    max_depth: int = 0
    case_counts: dict[str, int] = field(default_factory=dict)
    vectors: list[tuple[str, int, int]] = field(default_factory=list)
    endgames: int = 0
    cut_fallbacks: int = 0

    def bump(self, tag: str) -> None:
        self.case_counts[tag] = self.case_counts.get(tag, 0) + 1

    def worst_branching_number(self) -> float:
        worst = 1.0
        for _tag, r1, r2 in self.vectors:
            worst = max(worst, branching_number((r1, r2)))
        return worst

    def audit_violations(self) -> list[str]:
        """Branch vectors that break the guarantees claimed for their case.

        Max-degree-4 branches must shrink both sides by >= 4 with total >= 10;
        heavily connected degree-3 branches must shrink both sides by >= 4.
        """
        bad = []
        for tag, r1, r2 in self.vectors:
            if tag == "5":
                if min(r1, r2) < 4 or r1 + r2 < 10:
                    bad.append(f"case 5 vector ({r1},{r2})")
            elif tag == "6.2":
                if min(r1, r2) < 4:
                    bad.append(f"case 6.2 vector ({r1},{r2})")
        return bad


@dataclass
class SolveResult:
    sat: bool
    model: dict[int, bool] | None
    stats: BranchStats


def bound_report(stats: BranchStats, m: int) -> dict:
    """Compare observed tree size against the advertised worst case.

    Passes when log(nodes+1)/m stays within EPSILON of log(WORST_CASE_LAMBDA);
    trivially passes for empty instances.
    """
    nodes = stats.nodes
    if m <= 0:
        rate = 0.0
        ok = True
    else:
        rate = math.log(nodes + 1) / m
        ok = rate <= math.log(WORST_CASE_LAMBDA) + EPSILON
    return {
        "nodes": nodes,
        "m": m,
        "rate": rate,
        "limit": math.log(WORST_CASE_LAMBDA) + EPSILON,
        "worst_lambda": stats.worst_branching_number(),
        "ok": ok,
    }
