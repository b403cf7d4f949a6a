"""Reference decision procedure: exhaustive search over all assignments.

Deliberately dumb and independent of the solver proper; used to validate
rewrite rules, the branching solver and the matching endgame on small
instances.  The numpy path enumerates assignments as integers (the variable
with the lowest index is bit 0), so the model returned for a satisfiable
formula is always the one that comes first in plain binary counting order —
that makes oracle output reproducible and easy to compare across the numpy
and pure-Python paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .formula import Formula, evaluate_exact, var_of

_CHUNK_BITS = 20


@dataclass
class OracleResult:
    sat: bool
    model: dict[int, bool] | None = None
    n_models: int | None = None


def brute_force(f: Formula, var_limit: int = 25, count: bool = False) -> OracleResult:
    """Decide ``f`` by trying every assignment to its occurring variables.

    With ``count=True`` the full space is swept and ``n_models`` is exact;
    otherwise the scan stops at the first satisfying assignment.
    """
    vs = f.vars()
    k = len(vs)
    if k > var_limit:
        raise ValueError(f"{k} variables exceeds oracle limit {var_limit}")
    bitpos = {v: i for i, v in enumerate(vs)}
    cids = f.cids()
    total = 1 << k
    chunk = 1 << min(k, _CHUNK_BITS)
    n_models = 0
    first_model: dict[int, bool] | None = None
    for base in range(0, total, chunk):
        idx = np.arange(base, base + chunk, dtype=np.uint32)
        mask = np.ones(len(idx), dtype=bool)
        bits: dict[int, np.ndarray] = {}
        for cid in cids:
            tc = np.zeros(len(idx), dtype=np.uint8)
            for l in f.clauses[cid]:
                v = var_of(l)
                b = bits.get(v)
                if b is None:
                    b = bits[v] = ((idx >> bitpos[v]) & 1).astype(np.uint8)
                tc += b if l > 0 else 1 - b
            mask &= tc == 1
            if not mask.any():
                break
        if mask.any():
            if first_model is None:
                first = int(idx[int(np.argmax(mask))])
                first_model = {v: bool((first >> bitpos[v]) & 1) for v in vs}
            if not count:
                return OracleResult(True, first_model)
            n_models += int(mask.sum())
    if first_model is not None:
        return OracleResult(True, first_model, n_models)
    return OracleResult(False, None, 0 if count else None)


def brute_force_py(f: Formula, var_limit: int = 16, count: bool = False) -> OracleResult:
    """Pure-Python twin of :func:`brute_force`, same enumeration order."""
    vs = f.vars()
    if len(vs) > var_limit:
        raise ValueError(f"{len(vs)} variables exceeds oracle limit {var_limit}")
    n_models = 0
    first_model: dict[int, bool] | None = None
    # product with the reversed variable list counts in the same order as
    # the integer enumeration above (lowest variable toggles fastest).
    for values in product((False, True), repeat=len(vs)):
        model = dict(zip(vs, reversed(values)))
        if evaluate_exact(f, model):
            if first_model is None:
                first_model = model
            if not count:
                return OracleResult(True, first_model)
            n_models += 1
    if first_model is not None:
        return OracleResult(True, first_model, n_models)
    return OracleResult(False, None, 0 if count else None)
