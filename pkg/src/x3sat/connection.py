"""Clause connectivity: shared-literal graph, components, cut validation."""

from __future__ import annotations

from dataclasses import dataclass, field

from .formula import Formula, var_of


class ConnectionGraph:
    """Clause-level graph; two clauses are adjacent when they share a literal.

    Edges are labelled with the shared literals.  On fully simplified
    formulas every edge carries exactly one label (two clauses never share
    two variables), which ``single_labelled`` reports.
    """

    def __init__(self, f: Formula):
        self.f = f
        self.adj: dict[int, dict[int, list[int]]] = {cid: {} for cid in f.clauses}
        by_lit: dict[int, list[int]] = {}
        for cid, lits in f.clauses.items():
            for lit in set(lits):
                by_lit.setdefault(lit, []).append(cid)
        for lit, cids in by_lit.items():
            for i in range(len(cids)):
                for j in range(i + 1, len(cids)):
                    a, b = cids[i], cids[j]
                    self.adj[a].setdefault(b, []).append(lit)
                    self.adj[b].setdefault(a, []).append(lit)

    def neighbours(self, cid: int) -> list[int]:
        return sorted(self.adj[cid])

    def labels(self, a: int, b: int) -> list[int]:
        return sorted(self.adj[a].get(b, []))

    def single_labelled(self) -> bool:
        return all(len(ls) == 1 for nb in self.adj.values() for ls in nb.values())

    def edge_count(self) -> int:
        return sum(len(nb) for nb in self.adj.values()) // 2


def components(f: Formula) -> list[Formula]:
    """Split ``f`` into variable-disjoint sub-formulas (clause ids kept).

    Ordered by (clause count, smallest clause id).  A formula whose clauses
    all touch transitively is returned as a single component.
    """
    cid_of_var: dict[int, list[int]] = {}
    for cid, lits in f.clauses.items():
        for lit in lits:
            cid_of_var.setdefault(var_of(lit), []).append(cid)
    parent: dict[int, int] = {cid: cid for cid in f.clauses}

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for cids in cid_of_var.values():
        for other in cids[1:]:
            ra, rb = find(cids[0]), find(other)
            if ra != rb:
                parent[rb] = ra
    groups: dict[int, list[int]] = {}
    for cid in f.clauses:
        groups.setdefault(find(cid), []).append(cid)
    out = []
    for cids in groups.values():
        sub = Formula()
        sub.n_declared = 0
        for cid in sorted(cids):
            sub.add_clause(list(f.clauses[cid]), cid)
        sub.next_id = f.next_id
        out.append(sub)
    out.sort(key=lambda g: (g.m, min(g.cids())))
    return out


@dataclass
class CutSplit:
    """A two-block split of a formula joined by one shared literal."""

    f1: Formula
    f2: Formula
    lit: int
    f1_cids: tuple[int, ...] = field(default_factory=tuple)


def verify_cut(f: Formula, f1_cids, lit: int) -> CutSplit | None:
    """Check that ``f1_cids`` versus the rest share only the literal ``lit``.

    Valid when both blocks are nonempty, the variable of ``lit`` is the sole
    shared variable, and it occurs with the same sign on both sides.  Returns
    the split or None.
    """
    f1_set = set(f1_cids)
    if not f1_set or not f1_set <= set(f.clauses):
        return None
    f2_cids = [cid for cid in f.clauses if cid not in f1_set]
    if not f2_cids:
        return None
    v = var_of(lit)
    lits1: set[int] = set()
    lits2: set[int] = set()
    vars1: set[int] = set()
    vars2: set[int] = set()
    for cid in f1_set:
        for l in f.clauses[cid]:
            vars1.add(var_of(l))
            if var_of(l) == v:
                lits1.add(l)
    for cid in f2_cids:
        for l in f.clauses[cid]:
            vars2.add(var_of(l))
            if var_of(l) == v:
                lits2.add(l)
    if vars1 & vars2 != {v}:
        return None
    if lits1 != {lit} or lits2 != {lit}:
        return None
    f1 = Formula()
    f1.n_declared = 0
    for cid in sorted(f1_set):
        f1.add_clause(list(f.clauses[cid]), cid)
    f1.next_id = f.next_id
    f2 = Formula()
    f2.n_declared = 0
    for cid in sorted(f2_cids):
        f2.add_clause(list(f.clauses[cid]), cid)
    f2.next_id = f.next_id
    return CutSplit(f1, f2, lit, tuple(sorted(f1_set)))


def bridge_edges(f: Formula) -> list[tuple[int, int, int]]:
    """Edges (cid_a, cid_b, shared_lit) of the clause graph whose removal
    disconnects it; useful for eyeballing near-decomposable instances."""
    g = ConnectionGraph(f)
    order: dict[int, int] = {}
    low: dict[int, int] = {}
    out = []
    counter = 0
    for root in sorted(g.adj):
        if root in order:
            continue
        # Iterative lowlink computation; (node, parent, neighbour iterator).
        stack = [(root, -1, iter(g.neighbours(root)))]
        order[root] = low[root] = counter
        counter += 1
        while stack:
            node, par, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt not in order:
                    order[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append((nxt, node, iter(g.neighbours(nxt))))
                    advanced = True
                    break
                if nxt != par:
                    low[node] = min(low[node], order[nxt])
            if advanced:
                continue
            stack.pop()
            if par != -1:
                low[par] = min(low[par], low[node])
                if low[node] > order[par]:
                    a, b = min(par, node), max(par, node)
                    out.append((a, b, min(g.labels(a, b))))
    return sorted(out)
