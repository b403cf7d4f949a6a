"""Commit a literal and propagate: assign, cascade, then re-simplify."""

from __future__ import annotations

from .formula import CONFLICT, Conflict, Formula, Record, assign_true, var_of
from .simplify import reduce


def omega(f: Formula, x: int, log: list[Record]) -> Formula | Conflict:
    """Make literal ``x`` true in a clone of ``f`` and simplify to fixpoint.

    Clauses containing ``x`` are removed with their other literals forced
    false (recursively); occurrences of ``-x`` are deleted; the remainder
    is reduced.  Returns the reduced formula or CONFLICT.
    """
    if var_of(x) not in f.occ:
        raise ValueError(f"variable {var_of(x)} does not occur")
    g = f.clone()
    if assign_true(g, [x], log) is CONFLICT:
        return CONFLICT
    res = reduce(g, log)
    if res is CONFLICT:
        return CONFLICT
    return res[0]
