"""Per-rule soundness audit against the brute-force oracle.

For each rule we instantiate its pattern template with random variable
maps (collisions allowed) and sign flips, add up to two random context
clauses, and keep the instances on which the rule actually fires.  For each
fired instance the decision before and after one application must agree,
and any model of the rewritten formula must extend through the
reconstruction log to an exact model of the original.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .formula import CONFLICT, Formula, evaluate_exact, reconstruct, serialize
from .oracle import brute_force
from .simplify import RULE_IDS, apply_rule

# Pattern templates: tuples of clauses over slot numbers; a negative entry
# means the complement of the slot's literal.  Slots are remapped to a small
# variable pool with random collisions and random polarity per slot.
_TEMPLATES: dict[str, list[list[tuple[int, ...]]]] = {
    "TR1": [[(-1, 2, 3), (-1, 4, 5)]],
    "TR2": [[(1,)]],
    "TR3": [[(1, 2)]],
    "TR4": [[(1, 1, 2)]],
    "TR5": [[(1, -1, 2)]],
    "TR6": [[(1, 2, 3)]],
    "TR7": [[(1, 2, 3), (1, -2, 4)]],
    "TR8": [[(1, 2, 3), (-1, -2, 4)]],
    "TR9": [[(1, 2, 3), (4, 3, 5), (6, -5, 2)]],
    "TR10": [
        [(1, -2, 3), (4, -3, 2)],
        [(1, -2, 3), (4, -3, 5), (6, -5, 2)],
    ],
    "TR11": [[(1, 2, 3), (4, 3, 5), (6, -5, 2)]],
    "TR12": [[(1, 2, 3), (4, 3, 5), (6, 5, 2)]],
    "TR13": [[(1, 2, 3), (1, 2, 4)]],
    "TR14": [[(1, 2, 5), (1, 3, 6)]],
    "THM2": [[(1, 2, 3), (1, 4, 5), (-2, 4, 6)]],
    "THM3": [[(1, 2, 3), (1, 4, 5), (-1, 6, 7), (6, 4, 8)]],
    "THM4": [[(1, 2, 3), (1, 4, 5), (1, 6, 7), (2, 4, 8)]],
}

_POOL = 6  # variable pool size for slot maps and context clauses


@dataclass
class RuleReport:
    rule: str
    fired: int = 0
    attempts: int = 0
    failures: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.fired > 0 and not self.failures


def _instance(rule: str, rng: random.Random) -> Formula:
    template = rng.choice(_TEMPLATES[rule])
    slots = {abs(s) for cl in template for s in cl}
    pool = max(_POOL, max(slots))
    varmap = {s: rng.randint(1, pool) for s in slots}
    signmap = {s: rng.choice((1, -1)) for s in slots}
    clauses = []
    for cl in template:
        clauses.append(
            [(1 if s > 0 else -1) * signmap[abs(s)] * varmap[abs(s)] for s in cl]
        )
    for _ in range(rng.randint(0, 2)):
        width = rng.randint(1, 3)
        clauses.append(
            [rng.choice((1, -1)) * rng.randint(1, pool) for _ in range(width)]
        )
    return Formula.from_clauses(clauses)


def _check_one(rule: str, f: Formula) -> tuple[bool, str]:
    """Returns (fired, failure reason or '')."""
    log: list = []
    got = apply_rule(f, rule, log)
    if got is None:
        return False, ""
    before = brute_force(f, count=False)
    if got is CONFLICT:
        if before.sat:
            return True, "rule reported conflict on a satisfiable formula"
        return True, ""
    g, _entry = got
    after = brute_force(g, count=False)
    if before.sat != after.sat:
        return True, (
            f"decision changed: before={before.sat} after={after.sat}"
        )
    if after.sat:
        model = reconstruct(log, after.model)
        missing = [v for v in f.vars() if v not in model]
        if missing:
            return True, f"reconstruction left variables unset: {missing}"
        if not evaluate_exact(f, model):
            return True, f"reconstructed model {model} fails the original"
    return True, ""


def rule_soundness_check(
    rule: str, budget: int = 300, seed: int = 0
) -> RuleReport:
    """Audit one rule; ``budget`` counts instances on which the rule fired."""
    if rule not in RULE_IDS:
        raise ValueError(f"unknown rule {rule!r}")
    rng = random.Random((seed, rule).__repr__())
    report = RuleReport(rule)
    max_attempts = budget * 50
    while report.fired < budget and report.attempts < max_attempts:
        report.attempts += 1
        f = _instance(rule, rng)
        fired, reason = _check_one(rule, f)
        if not fired:
            continue
        report.fired += 1
        if reason:
            report.failures.append((serialize(f), reason))
            if len(report.failures) >= 5:
                break
    return report


def check_all(budget: int = 300, seed: int = 0) -> list[RuleReport]:
    return [rule_soundness_check(r, budget, seed) for r in RULE_IDS]
