"""Endgame for formulas where every variable occurs at most twice.

Such instances need no search: merge away variables that occur once
positively and once negatively, then read the remainder as a graph whose
vertices are clauses and whose edges are twice-occurring literals.  The
instance is satisfiable exactly when some matching covers every clause
that has no once-occurring literal to fall back on.
"""

from __future__ import annotations

from .analysis import BranchStats, SolveResult
from .formula import (CONFLICT, Bind, Completion, Conflict, Formula, Free,
                      Record, reconstruct, var_of)


class GF:
    """Exactly-one formula without the width-3 cap (merges grow clauses)."""

    def __init__(self):
        self.clauses: dict[int, list[int]] = {}
        self.occ: dict[int, list[tuple[int, int]]] = {}  # var -> [(cid, sign)]
        self.next_id = 1

    @classmethod
    def from_formula(cls, f: Formula) -> "GF":
        g = cls()
        for cid in f.cids():
            g.add_clause(list(f.clauses[cid]), cid)
        g.next_id = max(g.next_id, f.next_id)
        return g

    def add_clause(self, lits: list[int], cid: int | None = None) -> int:
        if cid is None:
            cid = self.next_id
        self.next_id = max(self.next_id, cid + 1)
        self.clauses[cid] = lits
        for l in lits:
            self.occ.setdefault(var_of(l), []).append((cid, 1 if l > 0 else -1))
        return cid

    def remove_clause(self, cid: int) -> None:
        for v in {var_of(l) for l in self.clauses.pop(cid)}:
            entries = [e for e in self.occ[v] if e[0] != cid]
            if entries:
                self.occ[v] = entries
            else:
                del self.occ[v]

    def set_clause(self, cid: int, lits: list[int]) -> None:
        self.remove_clause(cid)
        self.add_clause(lits, cid)

    @property
    def m(self) -> int:
        return len(self.clauses)

    def polarity(self, v: int) -> tuple[int, int]:
        entries = self.occ.get(v, [])
        pos = sum(1 for _, s in entries if s > 0)
        return pos, len(entries) - pos


def _force(g: GF, lits, log: list[Record]) -> bool | Conflict:
    """Make the given literals true in ``g``, cascading exactly-one effects."""
    queue = list(lits)
    bound: dict[int, bool] = {}
    while queue:
        lit = queue.pop()
        v, val = var_of(lit), lit > 0
        if v in bound:
            if bound[v] != val:
                return CONFLICT
            continue
        bound[v] = val
        log.append(Bind(v, val))
        if v not in g.occ:
            # Already disappeared with a removed clause; keep the record only.
            continue
        true_lit = v if val else -v
        for cid in {c for c, _ in g.occ[v]}:
            if cid not in g.clauses:
                continue
            lits_c = g.clauses[cid]
            hits_true = lits_c.count(true_lit)
            if hits_true > 1:
                return CONFLICT  # the same literal true twice in one clause
            if hits_true == 1:
                # One literal true: the rest of the clause goes false.
                for other in lits_c:
                    if other != true_lit:
                        queue.append(-other)
                g.remove_clause(cid)
            else:
                rest = [l for l in lits_c if l != -true_lit]
                if not rest:
                    return CONFLICT
                g.set_clause(cid, rest)
                if len(rest) == 1:
                    queue.append(rest[0])
    return True


def _normalize(g: GF, log: list[Record]) -> bool | Conflict:
    """Remove repeated and complementary literals inside clauses; fire units.

    A literal occurring twice in one clause can never be the single true one,
    so it goes false.  A complementary pair eats the clause's single truth,
    so everything else in that clause goes false and the pair's variable is
    left free.
    """
    changed = True
    while changed:
        changed = False
        for cid in sorted(g.clauses):
            if cid not in g.clauses:
                continue
            lits = g.clauses[cid]
            seen: set[int] = set()
            dup = next((l for l in lits if l in seen or seen.add(l)), None)
            if dup is not None:
                rest = [l for l in lits if l != dup]
                g.set_clause(cid, rest) if rest else g.remove_clause(cid)
                if not rest:
                    return CONFLICT
                if _force(g, [-dup], log) is CONFLICT:
                    return CONFLICT
                changed = True
                continue
            comp = next((l for l in lits if -l in seen), None)
            if comp is not None:
                others = [l for l in lits if var_of(l) != var_of(comp)]
                v = var_of(comp)
                g.remove_clause(cid)
                if v not in g.occ:
                    log.append(Free(v))
                if _force(g, [-l for l in others], log) is CONFLICT:
                    return CONFLICT
                changed = True
                continue
            if len(lits) == 1:
                if _force(g, [lits[0]], log) is CONFLICT:
                    return CONFLICT
                changed = True
    return True


def eliminate_11(g: GF, log: list[Record]) -> bool | Conflict:
    """Merge away variables occurring once positive, once negative.

    With x+a+b = 1 and (1-x)+c+d = 1, x equals c+d and the two clauses
    collapse to a+b+c+d = 1.  The merged clause keeps the smaller id.  Other
    variables keep their signs, so no new once-each-way variable appears.
    """
    if _normalize(g, log) is CONFLICT:
        return CONFLICT
    while True:
        v = next((v for v in sorted(g.occ) if g.polarity(v) == (1, 1)), None)
        if v is None:
            return True
        (c_pos,) = [cid for cid, s in g.occ[v] if s > 0]
        (c_neg,) = [cid for cid, s in g.occ[v] if s < 0]
        pos_rest = [l for l in g.clauses[c_pos] if l != v]
        neg_rest = [l for l in g.clauses[c_neg] if l != -v]
        log.append(Completion(v, tuple(pos_rest)))
        keep, drop = min(c_pos, c_neg), max(c_pos, c_neg)
        g.remove_clause(drop)
        merged = pos_rest + neg_rest
        if merged:
            g.set_clause(keep, merged)
        else:
            # x alone on one side and -x alone on the other: contradiction.
            return CONFLICT
        if _normalize(g, log) is CONFLICT:
            return CONFLICT


def build_match_instance(g: GF):
    """Read a no-(1,1) degree-<=2 formula as a matching problem.

    Returns (cids, edges, mandatory) where edges are (cid_a, cid_b, label)
    with parallel edges collapsed to their smallest label, and mandatory
    holds the clauses containing no once-occurring literal.
    """
    pair_label: dict[tuple[int, int], int] = {}
    for v in sorted(g.occ):
        entries = g.occ[v]
        if len(entries) != 2:
            continue
        (ca, sa), (cb, sb) = entries
        if sa != sb:
            raise ValueError(f"variable {v} still occurs once each way")
        if ca == cb:
            raise ValueError(f"variable {v} occurs twice in clause {ca}")
        lit = v if sa > 0 else -v
        key = (min(ca, cb), max(ca, cb))
        if key not in pair_label:
            pair_label[key] = lit
    edges = [(a, b, lit) for (a, b), lit in sorted(pair_label.items())]
    mandatory = set()
    for cid, lits in g.clauses.items():
        if all(len(g.occ[var_of(l)]) == 2 for l in lits):
            mandatory.add(cid)
    return sorted(g.clauses), edges, mandatory


def maximum_matching(n: int, edges) -> list[int]:
    """Maximum matching on an undirected simple graph, O(V^3).

    Vertices are 0..n-1; returns mate[] with -1 for unmatched.  Augmenting
    paths are grown breadth-first; odd cycles are contracted by tracking a
    base vertex per node (standard blossom shrinking).
    """
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        if u != v:
            adj[u].append(v)
            adj[v].append(u)
    mate = [-1] * n
    p = [-1] * n
    base = list(range(n))

    def lca(a: int, b: int) -> int:
        used_path = [False] * n
        while True:
            a = base[a]
            used_path[a] = True
            if mate[a] == -1:
                break
            a = p[mate[a]]
        while True:
            b = base[b]
            if used_path[b]:
                return b
            b = p[mate[b]]

    def mark_path(v: int, b: int, child: int, blossom: list[bool]) -> None:
        while base[v] != b:
            blossom[base[v]] = True
            blossom[base[mate[v]]] = True
            p[v] = child
            child = mate[v]
            v = p[mate[v]]

    def find_path(root: int) -> int:
        used = [False] * n
        for i in range(n):
            p[i] = -1
            base[i] = i
        used[root] = True
        queue = [root]
        while queue:
            v = queue.pop(0)
            for to in adj[v]:
                if base[v] == base[to] or mate[v] == to:
                    continue
                if to == root or (mate[to] != -1 and p[mate[to]] != -1):
                    # Even-cycle edge: contract the blossom around the lca.
                    cur_base = lca(v, to)
                    blossom = [False] * n
                    mark_path(v, cur_base, to, blossom)
                    mark_path(to, cur_base, v, blossom)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = cur_base
                            if not used[i]:
                                used[i] = True
                                queue.append(i)
                elif p[to] == -1:
                    p[to] = v
                    if mate[to] == -1:
                        return to
                    used[mate[to]] = True
                    queue.append(mate[to])
        return -1

    for v in range(n):
        if mate[v] == -1:
            u = find_path(v)
            while u != -1:
                pv = p[u]
                ppv = mate[pv]
                mate[u] = pv
                mate[pv] = u
                u = ppv
    return mate


def _saturating_matching(cids, edges, mandatory):
    """Matching that covers every mandatory clause, or None.

    Works on a doubled graph: two copies of the clause graph plus a rung
    between the copies at each optional vertex.  That graph has a perfect
    matching exactly when the original has a matching saturating the
    mandatory vertices.
    """
    idx = {cid: i for i, cid in enumerate(cids)}
    k = len(cids)
    g_edges = []
    for a, b, _lit in edges:
        g_edges.append((idx[a], idx[b]))
        g_edges.append((idx[a] + k, idx[b] + k))
    for cid in cids:
        if cid not in mandatory:
            g_edges.append((idx[cid], idx[cid] + k))
    mate = maximum_matching(2 * k, g_edges)
    if any(m == -1 for m in mate):
        return None
    pairs = set()
    for a, b, _lit in edges:
        if mate[idx[a]] == idx[b]:
            pairs.add((a, b))
    return pairs


def solve_degree2(f: Formula, log: list[Record] | None = None) -> SolveResult:
    """Decide a formula whose variables all occur at most twice.

    No branching happens; the result's stats show zero nodes.  When ``log``
    is passed, earlier entries are kept and the model is reconstructed
    through the records appended here.
    """
    for v in f.occ:
        if f.degree(v) > 2:
            raise ValueError(f"variable {v} occurs {f.degree(v)} times")
    if log is None:
        log = []
    mark = len(log)
    stats = BranchStats()
    stats.endgames = 1
    g = GF.from_formula(f)
    if eliminate_11(g, log) is CONFLICT:
        return SolveResult(False, None, stats)
    cids, edges, mandatory = build_match_instance(g)
    matched = _saturating_matching(cids, edges, mandatory)
    if matched is None:
        return SolveResult(False, None, stats)
    true_lits: set[int] = set()
    covered = set()
    for a, b, lit in edges:
        if (a, b) in matched:
            true_lits.add(lit)
            covered.add(a)
            covered.add(b)
    for cid in cids:
        if cid in covered:
            continue
        singles = sorted((l for l in g.clauses[cid]
                          if len(g.occ[var_of(l)]) == 1),
                         key=lambda l: (var_of(l), 0 if l > 0 else 1))
        true_lits.add(singles[0])
    model: dict[int, bool] = {}
    for v in g.occ:
        lit = v if g.occ[v][0][1] > 0 else -v
        model[v] = (lit in true_lits) == (lit > 0)
    full = reconstruct(log[mark:], model)
    return SolveResult(True, full, stats)
