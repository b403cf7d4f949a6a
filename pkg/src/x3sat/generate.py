"""Seeded random instance generation."""

from __future__ import annotations

import random

from .formula import Formula


def gen_random(n: int, m: int, seed: int, neg_prob: float = 0.25,
               cap: int | None = None) -> Formula:
    """Random instance: ``m`` clauses of 3 distinct variables out of ``n``.

    Literals are negated with probability ``neg_prob`` (biased positive:
    uniform polarity just feeds the sign-normalization rewrite).  ``cap``
    bounds how often one variable may occur; clauses that would exceed it
    are redrawn.  The same arguments always produce the same instance.
    """
    if n < 3:
        raise ValueError(f"need at least 3 variables, got {n}")
    if m < 1:
        raise ValueError(f"need at least 1 clause, got {m}")
    if cap is not None and cap * n < 3 * m:
        raise ValueError(
            f"cap {cap} over {n} variables cannot host {m} clauses "
            f"({cap * n} < {3 * m})")
    rng = random.Random(seed)
    counts = dict.fromkeys(range(1, n + 1), 0)
    clauses = []
    stall = 0
    while len(clauses) < m:
        vs = rng.sample(range(1, n + 1), 3)
        if cap is not None and any(counts[v] >= cap for v in vs):
            stall += 1
            if stall > 10000:
                raise RuntimeError(
                    "generation stalled: the cap leaves no room for "
                    "3 distinct fresh variables; loosen it")
            continue
        stall = 0
        for v in vs:
            counts[v] += 1
        clauses.append([v if rng.random() >= neg_prob else -v for v in vs])
    return Formula.from_clauses(clauses)
