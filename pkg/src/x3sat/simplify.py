"""Rewrite rules TR1-TR14 and THM2-THM4, plus the simplification fixpoint.

Every rule application is recorded as a TraceEntry whose ``steps`` are
mechanical edit primitives; replaying the steps of a trace on the original
formula reproduces the reduced formula exactly.

Three of the rules replace one 3-clause by another 3-clause and could in
principle undo each other; those are oriented by ``clause_key`` (the
replacement must compare strictly smaller than the replaced clause) and
additionally budgeted, so a cycle shows up as a hard error instead of a
hang.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formula import (
    CONFLICT,
    Alias,
    Completion,
    Conflict,
    Formula,
    Free,
    Record,
    assign_true,
    clause_key,
    substitute,
    var_of,
)

RULE_IDS = [
    "TR1", "TR2", "TR3", "TR4", "TR5", "TR6", "TR7",
    "TR8", "TR9", "TR10", "TR11", "TR12", "TR13", "TR14",
    "THM2", "THM3", "THM4",
]

# Width reducers first so every later pattern sees 3-clauses, then the
# polarity normalizer, then the rest in listed order.
PRIORITY = [
    "TR2", "TR3", "TR1", "TR4", "TR5", "TR6", "TR7", "TR8", "TR9", "TR10",
    "TR11", "TR12", "TR13", "TR14", "THM2", "THM3", "THM4",
]

# Equal-shape clause replacements: oriented by clause_key and capped.
_CAPPED = frozenset({"TR9", "TR12", "TR13", "THM3", "THM4"})


class InternalError(RuntimeError):
    """A rewrite invariant broke (cap exceeded, unlogged variable loss)."""


@dataclass
class TraceEntry:
    rule: str
    cids: tuple[int, ...]
    steps: tuple[tuple, ...]


def _lit_sort_key(l: int) -> tuple[int, int]:
    return (var_of(l), 0 if l > 0 else 1)


# ---------------------------------------------------------------------------
# Step execution.  Steps are the only way rules touch a formula, which keeps
# application and trace replay on the same code path.


def _exec(f: Formula, steps, log: list[Record]):
    for st in steps:
        kind = st[0]
        if kind == "assign":
            if assign_true(f, st[1], log) is CONFLICT:
                return CONFLICT
        elif kind == "set":
            f.set_clause(st[1], st[2])
        elif kind == "remove":
            f.remove_clause(st[1])
        elif kind == "alias":
            substitute(f, st[1], st[2], log)
        elif kind == "alias_always":
            # Like "alias" but the record is written even when the literal
            # has no remaining occurrences (its defining clause was just
            # removed).
            old, new = st[1], st[2]
            v = var_of(old)
            log.append(Alias(v, new if old > 0 else -new))
            for cid in sorted({e[0] for e in f.occ.get(v, ())}):
                lits = [
                    (new if l == old else (-new if l == -old else l))
                    for l in f.clauses[cid]
                ]
                f.set_clause(cid, lits)
        elif kind == "record":
            log.append(st[1])
        elif kind == "free_if_gone":
            if st[1] not in f.occ:
                log.append(Free(st[1]))
        elif kind == "conflict":
            return CONFLICT
        else:  # pragma: no cover
            raise InternalError(f"unknown step {st!r}")
    return None


def replay_trace(f: Formula, trace) -> Formula | Conflict:
    """Re-run a trace's steps on (a clone of) the original formula."""
    g = f.clone()
    scratch: list[Record] = []
    for entry in trace:
        if _exec(g, entry.steps, scratch) is CONFLICT:
            return CONFLICT
    return g


# ---------------------------------------------------------------------------
# Matchers.  Each returns (cids, steps) for the first match in a fixed scan
# order, or None.  Patterns are matched on 3-clauses as printed; shorter
# clauses never survive long enough to reach them because TR2/TR3 run first.


def _others(lits, *skip_positions):
    return [l for i, l in enumerate(lits) if i not in skip_positions]


def _clauses_with_literal(f: Formula, lit: int) -> list[int]:
    v = var_of(lit)
    want = 1 if lit > 0 else -1
    return sorted({e[0] for e in f.occ.get(v, ()) if e[2] == want})


def _match_tr1(f: Formula):
    for v in f.vars():
        p, q = f.polarity_counts(v)
        if q > p:
            return (tuple(f.clauses_with(v)), (("alias", -v, v),))
    return None


def _match_tr2(f: Formula):
    for cid in f.cids():
        lits = f.clauses[cid]
        if len(lits) == 1:
            return ((cid,), (("assign", (lits[0],)),))
    return None


def _match_tr3(f: Formula):
    for cid in f.cids():
        lits = f.clauses[cid]
        if len(lits) != 2:
            continue
        a, b = sorted(lits, key=_lit_sort_key)
        if a == b:
            # Two copies of one literal can never have exactly one true.
            return ((cid,), (("conflict",),))
        if a == -b:
            # Exactly one of a complementary pair is always true.
            return ((cid,), (("remove", cid), ("free_if_gone", var_of(a))))
        return (
            (cid,),
            (
                ("remove", cid),
                ("alias_always", a, -b),
                ("free_if_gone", var_of(b)),
            ),
        )
    return None


def _match_tr4(f: Formula):
    for cid in f.cids():
        lits = f.clauses[cid]
        if len(lits) != 3:
            continue
        for l in sorted(set(lits), key=_lit_sort_key):
            if lits.count(l) >= 2:
                return ((cid,), (("assign", (-l,)),))
    return None


def _match_tr5(f: Formula):
    for cid in f.cids():
        lits = f.clauses[cid]
        if len(lits) != 3:
            continue
        for l in lits:
            if -l in lits:
                third = [x for x in lits if x != l and x != -l]
                if third:
                    y = sorted(third, key=_lit_sort_key)[0]
                    return ((cid,), (("assign", (-y,)),))
    return None


def _match_tr6(f: Formula):
    for cid in f.cids():
        lits = f.clauses[cid]
        if len(lits) != 3:
            continue
        singles = sorted(
            {l for l in lits if f.is_singleton(var_of(l))}, key=_lit_sort_key
        )
        if len(singles) >= 2:
            return ((cid,), (("assign", (-singles[0],)),))
    return None


def _shared_pairs(f: Formula) -> list[tuple[int, int]]:
    pairs = set()
    for v in f.occ:
        cids = f.clauses_with(v)
        for i in range(len(cids)):
            for j in range(i + 1, len(cids)):
                pairs.add((cids[i], cids[j]))
    return sorted(pairs)


def _match_tr7(f: Formula):
    for c1, c2 in _shared_pairs(f):
        la, lb = f.clauses[c1], f.clauses[c2]
        if len(la) != 3 or len(lb) != 3:
            continue
        shared = sorted({l for l in la if l in lb}, key=_lit_sort_key)
        flipped = sorted({var_of(l) for l in la if -l in lb})
        for a in shared:
            if any(w != var_of(a) for w in flipped):
                return ((c1, c2), (("assign", (-a,)),))
    return None


def _match_tr8(f: Formula):
    for c1, c2 in _shared_pairs(f):
        la, lb = f.clauses[c1], f.clauses[c2]
        if len(la) != 3 or len(lb) != 3:
            continue
        flipped = sorted({var_of(l) for l in la if -l in lb})
        if len(flipped) >= 2:
            w1, w2 = flipped[0], flipped[1]
            x_lit = next(l for l in la if var_of(l) == w1)
            y_lit = next(l for l in la if var_of(l) == w2)
            return ((c1, c2), (("alias", y_lit, -x_lit),))
    return None


def _triangle_matches(f: Formula):
    """Ordered matches of the three-clause chain pattern.

    Yields (c1, c2, c3, x1, y1, y2, x2, y3, x3) where
    c1 = x1 | y1 | y2,  c2 = x2 | y2 | y3,  c3 = x3 | -y3 | y1
    with y2 shared between c1/c2, y3 complementary between c2/c3 and y1
    shared between c3/c1.  Slot variables may collide; clause ids are
    pairwise distinct.
    """
    for c3 in f.cids():
        l3 = f.clauses[c3]
        if len(l3) != 3:
            continue
        for i3 in range(3):  # position of -y3 in c3
            y3 = -l3[i3]
            for j3 in range(3):  # position of y1 in c3
                if j3 == i3:
                    continue
                y1 = l3[j3]
                k3 = 3 - i3 - j3
                x3 = l3[k3]
                for c2 in _clauses_with_literal(f, y3):
                    if c2 == c3:
                        continue
                    l2 = f.clauses[c2]
                    if len(l2) != 3:
                        continue
                    for i2 in range(3):
                        if l2[i2] != y3:
                            continue
                        for c1 in _clauses_with_literal(f, y1):
                            if c1 in (c2, c3):
                                continue
                            l1 = f.clauses[c1]
                            if len(l1) != 3:
                                continue
                            for j1 in range(3):
                                if l1[j1] != y1:
                                    continue
                                for k1 in range(3):
                                    if k1 == j1:
                                        continue
                                    y2 = l1[k1]
                                    for k2 in range(3):
                                        if k2 == i2 or l2[k2] != y2:
                                            continue
                                        x1 = l1[3 - j1 - k1]
                                        x2 = l2[3 - i2 - k2]
                                        yield (c1, c2, c3, x1, y1, y2, x2, y3, x3)


def _match_tr9(f: Formula):
    for c1, c2, c3, x1, y1, y2, x2, y3, x3 in _triangle_matches(f):
        new = [-x1, x2, x3]
        if clause_key(new) < clause_key(f.clauses[c3]):
            return ((c1, c2, c3), (("set", c3, new),))
    return None


def _match_tr10(f: Formula):
    # Directed graph on literals: an edge u -> w for every clause that
    # contains -u and w; the remaining literal is the edge's tag.  Any cycle
    # forces every tag false (summing the exact-one equations along the
    # cycle telescopes the u/w terms away).
    edges: dict[int, list[tuple[int, int, int]]] = {}
    for cid in f.cids():
        lits = f.clauses[cid]
        if len(lits) != 3:
            continue
        for i in range(3):
            for j in range(3):
                if i == j:
                    continue
                u = -lits[i]
                w = lits[j]
                tag = lits[3 - i - j]
                edges.setdefault(u, []).append((w, tag, cid))
    for es in edges.values():
        es.sort(key=lambda e: (_lit_sort_key(e[0]), e[2]))
    for start in sorted(edges, key=_lit_sort_key):
        # BFS back to the start literal.
        prev: dict[int, tuple[int, int, int]] = {}
        frontier = [start]
        found = False
        while frontier and not found:
            nxt = []
            for u in frontier:
                for w, tag, cid in edges.get(u, ()):
                    if w == start:
                        prev[start] = (u, tag, cid)
                        found = True
                        break
                    if w not in prev:
                        prev[w] = (u, tag, cid)
                        nxt.append(w)
                if found:
                    break
            frontier = nxt
        if not found:
            continue
        tags = []
        cids = []
        node = start
        while True:
            u, tag, cid = prev[node]
            tags.append(tag)
            cids.append(cid)
            node = u
            if node == start:
                break
        forced = sorted({-t for t in tags}, key=_lit_sort_key)
        return (tuple(sorted(set(cids))), (("assign", tuple(forced)),))
    return None


def _match_tr11(f: Formula):
    for c1, c2, c3, x1, y1, y2, x2, y3, x3 in _triangle_matches(f):
        if f.is_singleton(var_of(x1)):
            rec = Completion(x1, (y1, y2))
            return ((c1, c2, c3), (("record", rec), ("remove", c1)))
    return None


def _triangle_pos_matches(f: Formula):
    """Matches of the all-positive-share triangle.

    Yields (ca, cb, cc, a, p, q, b, r, c) where
    ca = a | p | q,  cb = b | q | r,  cc = c | r | p
    (each shared slot is the identical literal in both clauses).
    """
    for cc in f.cids():
        lc = f.clauses[cc]
        if len(lc) != 3:
            continue
        for ir in range(3):
            r = lc[ir]
            for ip in range(3):
                if ip == ir:
                    continue
                p = lc[ip]
                c = lc[3 - ir - ip]
                for cb in _clauses_with_literal(f, r):
                    if cb == cc:
                        continue
                    lb = f.clauses[cb]
                    if len(lb) != 3:
                        continue
                    for jr in range(3):
                        if lb[jr] != r:
                            continue
                        for jq in range(3):
                            if jq == jr:
                                continue
                            q = lb[jq]
                            b = lb[3 - jr - jq]
                            for ca in _clauses_with_literal(f, p):
                                if ca in (cb, cc):
                                    continue
                                la = f.clauses[ca]
                                if len(la) != 3:
                                    continue
                                for kp in range(3):
                                    if la[kp] != p:
                                        continue
                                    for kq in range(3):
                                        if kq == kp or la[kq] != q:
                                            continue
                                        a = la[3 - kp - kq]
                                        yield (ca, cb, cc, a, p, q, b, r, c)


def _match_tr12(f: Formula):
    for ca, cb, cc, a, p, q, b, r, c in _triangle_pos_matches(f):
        if not f.is_singleton(var_of(c)):
            continue
        new = [-a, r, c]
        if clause_key(new) < clause_key(f.clauses[cc]):
            rec = Completion(c, (r, p))
            return ((ca, cb, cc), (("record", rec), ("set", cc, new)))
    return None


def _match_tr13(f: Formula):
    for c1, c2 in _shared_pairs(f):
        la, lb = list(f.clauses[c1]), list(f.clauses[c2])
        if len(la) != 3 or len(lb) != 3:
            continue
        shared = []
        rest_a, rest_b = list(la), list(lb)
        for l in sorted(la, key=_lit_sort_key):
            if len(shared) == 2:
                break
            if l in rest_a and l in rest_b:
                shared.append(l)
                rest_a.remove(l)
                rest_b.remove(l)
        if len(shared) == 2:
            z1 = min(rest_a, key=_lit_sort_key)
            z2 = min(rest_b, key=_lit_sort_key)
            return ((c1, c2), (("set", c2, [-z1, z2]),))
    return None


def _match_tr14(f: Formula):
    # Sound core of the monotone-literal rule: if every clause containing
    # the non-singleton monotone literal x also contains some singleton
    # (other than x), then a model with x true can be repaired to one with
    # x false by flipping those singletons, so x <- false is safe.
    for v in f.vars():
        p, q = f.polarity_counts(v)
        if q != 0 or p < 2:
            continue
        good = True
        for cid in f.clauses_with(v):
            if not any(
                var_of(l) != v and f.is_singleton(var_of(l))
                for l in f.clauses[cid]
            ):
                good = False
                break
        if good:
            return (tuple(f.clauses_with(v)), (("assign", (-v,)),))
    return None


def _match_thm2(f: Formula):
    for c1 in f.cids():
        l1 = f.clauses[c1]
        if len(l1) != 3:
            continue
        for ix in range(3):  # shared literal x in c1
            x = l1[ix]
            for c2 in _clauses_with_literal(f, x):
                if c2 == c1:
                    continue
                l2 = f.clauses[c2]
                if len(l2) != 3:
                    continue
                for iy in range(3):  # y1 in c1, a (1,1) variable
                    if iy == ix:
                        continue
                    y1 = l1[iy]
                    pv, qv = f.polarity_counts(var_of(y1))
                    if (pv, qv) != (1, 1):
                        continue
                    y2 = l1[3 - ix - iy]
                    for c3 in _clauses_with_literal(f, -y1):
                        if c3 in (c1, c2):
                            continue
                        l3 = f.clauses[c3]
                        if len(l3) != 3:
                            continue
                        for jn in range(3):
                            if l3[jn] != -y1:
                                continue
                            for jy in range(3):  # y3 shared with c2
                                if jy == jn:
                                    continue
                                y3 = l3[jy]
                                z1 = l3[3 - jn - jy]
                                for kx in range(3):
                                    if l2[kx] != x:
                                        continue
                                    for ky in range(3):
                                        if ky == kx or l2[ky] != y3:
                                            continue
                                        y4 = l2[3 - kx - ky]
                                        rec = Completion(y1, (x, y2))
                                        steps = (
                                            ("record", rec),
                                            ("set", c3, [-y4, y2, z1]),
                                            ("remove", c1),
                                        )
                                        return ((c1, c2, c3), steps)
    return None


def _match_thm3(f: Formula):
    for v in f.vars():
        p, q = f.polarity_counts(v)
        if (p, q) == (2, 1):
            x = v
        elif (p, q) == (1, 2):
            x = -v
        else:
            continue
        neg = _clauses_with_literal(f, -x)
        if len(neg) != 1:
            continue
        cn = neg[0]
        ln = f.clauses[cn]
        if len(ln) != 3:
            continue
        for c2 in _clauses_with_literal(f, x):
            l2 = f.clauses[c2]
            if len(l2) != 3:
                continue
            for k2 in range(3):
                if l2[k2] != x:
                    continue
                for ky in range(3):  # y3 in c2
                    if ky == k2:
                        continue
                    y3 = l2[ky]
                    x2f = l2[3 - k2 - ky]
                    for jn in range(3):
                        if ln[jn] != -x:
                            continue
                        for jy in range(3):  # y'1 in cn
                            if jy == jn:
                                continue
                            yp1 = ln[jy]
                            x3f = ln[3 - jn - jy]
                            for d in _clauses_with_literal(f, yp1):
                                if d in (cn, c2):
                                    continue
                                ld = f.clauses[d]
                                if len(ld) != 3:
                                    continue
                                for dp in range(3):
                                    if ld[dp] != yp1:
                                        continue
                                    for dy in range(3):
                                        if dy == dp or ld[dy] != y3:
                                            continue
                                        z1 = ld[3 - dp - dy]
                                        new = [-z1, x2f, x3f]
                                        if clause_key(new) < clause_key(ln):
                                            return (
                                                (d, c2, cn),
                                                (("set", cn, new),),
                                            )
    return None


def _match_thm4(f: Formula):
    for v in f.vars():
        p, q = f.polarity_counts(v)
        if (p, q) == (3, 0):
            x = v
        elif (p, q) == (0, 3):
            x = -v
        else:
            continue
        xcls = _clauses_with_literal(f, x)
        if len(xcls) != 3:
            continue
        for c2 in xcls:  # clause to rewrite, holding the singleton
            l2 = f.clauses[c2]
            if len(l2) != 3:
                continue
            for k2 in range(3):
                if l2[k2] != x:
                    continue
                for ks in range(3):
                    if ks == k2:
                        continue
                    y4 = l2[ks]
                    if not f.is_singleton(var_of(y4)):
                        continue
                    y3 = l2[3 - k2 - ks]
                    for c1 in xcls:
                        if c1 == c2:
                            continue
                        l1 = f.clauses[c1]
                        if len(l1) != 3:
                            continue
                        for j1 in range(3):
                            if l1[j1] != x:
                                continue
                            for jy in range(3):
                                if jy == j1:
                                    continue
                                y1 = l1[jy]
                                y2 = l1[3 - j1 - jy]
                                for d in _clauses_with_literal(f, y1):
                                    if d in (c1, c2):
                                        continue
                                    ld = f.clauses[d]
                                    if len(ld) != 3:
                                        continue
                                    ok = False
                                    for dp in range(3):
                                        if ld[dp] != y1:
                                            continue
                                        for dy in range(3):
                                            if dy != dp and ld[dy] == y3:
                                                ok = True
                                    if not ok:
                                        continue
                                    new = [-y2, y3, y4]
                                    if clause_key(new) < clause_key(l2):
                                        rec = Completion(y4, (y3, x))
                                        steps = (
                                            ("record", rec),
                                            ("set", c2, new),
                                        )
                                        return ((c1, c2, d), steps)
    return None


_MATCHERS = {
    "TR1": _match_tr1,
    "TR2": _match_tr2,
    "TR3": _match_tr3,
    "TR4": _match_tr4,
    "TR5": _match_tr5,
    "TR6": _match_tr6,
    "TR7": _match_tr7,
    "TR8": _match_tr8,
    "TR9": _match_tr9,
    "TR10": _match_tr10,
    "TR11": _match_tr11,
    "TR12": _match_tr12,
    "TR13": _match_tr13,
    "TR14": _match_tr14,
    "THM2": _match_thm2,
    "THM3": _match_thm3,
    "THM4": _match_thm4,
}


# ---------------------------------------------------------------------------


def _try_rule(f: Formula, rule: str, log: list[Record]):
    """Apply one instance of ``rule`` in place.

    Returns a TraceEntry, None when the pattern does not occur, or CONFLICT.
    """
    m = _MATCHERS[rule](f)
    if m is None:
        return None
    cids, steps = m
    entry = TraceEntry(rule, tuple(cids), tuple(steps))
    if _exec(f, steps, log) is CONFLICT:
        return CONFLICT
    return entry


def apply_rule(f: Formula, rule: str, log: list[Record]):
    """One application of ``rule`` on a clone of ``f``.

    Returns (new formula, trace entry), None if the rule does not match, or
    CONFLICT.
    """
    if rule not in _MATCHERS:
        raise ValueError(f"unknown rule {rule!r}")
    g = f.clone()
    got = _try_rule(g, rule, log)
    if got is None:
        return None
    if got is CONFLICT:
        return CONFLICT
    return g, got


def apply_derived(f: Formula, rule: str, log: list[Record]):
    """One application of a derived rewrite (THM2/THM3/THM4) on a clone."""
    if rule not in ("THM2", "THM3", "THM4"):
        raise ValueError(f"not a derived rewrite: {rule!r}")
    got = apply_rule(f, rule, log)
    if got is None or got is CONFLICT:
        return got
    return got[0]


def reduce(f: Formula, log: list[Record], enabled=None):
    """Apply rules to fixpoint.  Returns (formula, trace) or CONFLICT.

    ``enabled`` optionally restricts the rule set (used by the rule audit).
    The input formula is not modified.
    """
    g = f.clone()
    trace: list[TraceEntry] = []
    order = [r for r in PRIORITY if enabled is None or r in enabled]
    cap = max(16, f.m * max(f.n, 1))
    capped_uses = 0
    while True:
        fired = False
        for rule in order:
            before_vars = set(g.occ)
            mark = len(log)
            got = _try_rule(g, rule, log)
            if got is None:
                continue
            if got is CONFLICT:
                return CONFLICT
            trace.append(got)
            if rule in _CAPPED:
                capped_uses += 1
                if capped_uses > cap:
                    raise InternalError(
                        f"rewrite cap {cap} exceeded (last rule {rule}); "
                        "likely a rule cycle"
                    )
            gone = before_vars - set(g.occ)
            if gone:
                covered = set()
                for rec in log[mark:]:
                    covered.add(
                        rec.var if hasattr(rec, "var") else var_of(rec.lit)
                    )
                missing = gone - covered
                if missing:
                    raise InternalError(
                        f"rule {rule} dropped variables {sorted(missing)} "
                        "without reconstruction records"
                    )
            fired = True
            break
        if not fired:
            return g, trace


def assert_simplified(f: Formula, strict: bool = False) -> list[str]:
    """Structural checks on a fully reduced formula; returns violations.

    Checks: no 1-/2-clauses; no clause pair shares two variables; at most
    one singleton per clause; every non-singleton monotone variable has at
    least one clause free of singletons.  ``strict=True`` extends the last
    check to variables with exactly one negated occurrence, which the rule
    set does not guarantee (see the almost-monotone note in the README).
    """
    out: list[str] = []
    for cid in f.cids():
        w = len(f.clauses[cid])
        if w < 3:
            out.append(f"{w}-clause (id {cid})")
    for c1, c2 in _shared_pairs(f):
        common = {var_of(l) for l in f.clauses[c1]} & {
            var_of(l) for l in f.clauses[c2]
        }
        if len(common) > 1:
            out.append(f"two common variables (ids {c1},{c2})")
    for cid in f.cids():
        singles = {
            var_of(l) for l in f.clauses[cid] if f.is_singleton(var_of(l))
        }
        if len(singles) > 1:
            out.append(f"two singletons in clause (id {cid})")
    for v in f.vars():
        p, q = f.polarity_counts(v)
        if p + q < 2:
            continue
        if q == 0 or (strict and q == 1):
            ok = False
            for cid in f.clauses_with(v):
                if not any(
                    var_of(l) != v and f.is_singleton(var_of(l))
                    for l in f.clauses[cid]
                ):
                    ok = True
                    break
            if not ok:
                out.append(f"monotone variable {v} only in singleton clauses")
    return out
