"""Shared-literal graph, variable components, cut checks, bridges."""

import random

from x3sat.connection import (ConnectionGraph, bridge_edges, components,
                              verify_cut)
from x3sat.formula import CONFLICT, Formula
from x3sat.generate import gen_random
from x3sat.simplify import reduce


def test_single_clause_graph():
    g = ConnectionGraph(Formula.from_clauses([[1, 2, 3]]))
    assert g.edge_count() == 0
    assert g.neighbours(1) == []
    assert g.single_labelled()


def test_edges_need_identical_literals():
    f = Formula.from_clauses([[1, 2, 3], [1, 4, 5], [-1, 6, 7]])
    g = ConnectionGraph(f)
    # 1 and -1 are different labels: clause 3 stays isolated
    assert g.neighbours(1) == [2]
    assert g.neighbours(3) == []
    assert g.labels(1, 2) == [1]
    assert g.edge_count() == 1 and g.single_labelled()


def test_double_label_detected():
    g = ConnectionGraph(Formula.from_clauses([[1, 2, 3], [1, 2, 4]]))
    assert g.labels(1, 2) == [1, 2]
    assert not g.single_labelled()


def test_components_split_and_ordering():
    f = Formula.from_clauses(
        [[10, 11, 12], [1, 2, 3], [-3, 4, 5], [20, 21, 22], [-22, 23, 24]]
    )
    parts = components(f)
    assert [p.cids() for p in parts] == [[1], [2, 3], [4, 5]]
    # clause ids and bodies are preserved verbatim
    assert parts[1].clauses == {2: [1, 2, 3], 3: [-3, 4, 5]}


def test_components_connect_through_variables_not_literals():
    f = Formula.from_clauses([[1, 2, 3], [-1, 4, 5]])
    assert len(components(f)) == 1
    assert len(components(Formula())) == 0


_GADGET = [
    [1, 2, 3], [1, 4, 5], [-1, 6, 7], [-2, -4, 8],
    [6, 9, 10], [9, 11, 12], [10, 13, 14], [11, 13, 15], [12, 14, 15],
]


def test_verify_cut_accepts_single_shared_literal():
    f = Formula.from_clauses(_GADGET)
    cut = verify_cut(f, (1, 2, 3, 4), 6)
    assert cut is not None
    assert cut.lit == 6
    assert cut.f1_cids == (1, 2, 3, 4)
    assert cut.f1.cids() == [1, 2, 3, 4]
    assert cut.f2.cids() == [5, 6, 7, 8, 9]
    assert cut.f1.clauses[3] == [-1, 6, 7]


def test_verify_cut_rejections():
    f = Formula.from_clauses(_GADGET)
    assert verify_cut(f, (1, 2, 3), 6) is None      # var 4 also crosses
    assert verify_cut(f, tuple(range(1, 10)), 6) is None  # no second block
    assert verify_cut(f, (), 6) is None
    assert verify_cut(f, (1, 2, 3, 4), 9) is None   # 9 is not the shared var
    # same variable but opposite signs across the cut
    g = Formula.from_clauses([[1, 2, 3], [-3, 4, 5]])
    assert verify_cut(g, (1,), 3) is None
    assert verify_cut(g, (1,), -3) is None


def test_bridges_on_chain_and_cycle():
    chain = Formula.from_clauses([[1, 2, 3], [3, 4, 5], [5, 6, 7]])
    assert bridge_edges(chain) == [(1, 2, 3), (2, 3, 5)]
    cycle = Formula.from_clauses([[1, 2, 3], [3, 4, 5], [5, 6, 1]])
    assert bridge_edges(cycle) == []
    # a cycle with one pendant clause: only the pendant edge is a bridge
    pend = Formula.from_clauses([[1, 2, 3], [3, 4, 5], [5, 6, 1], [6, 7, 8]])
    assert bridge_edges(pend) == [(3, 4, 6)]


def test_simplified_formulas_are_single_labelled():
    rng = random.Random(41)
    for _ in range(150):
        f = gen_random(
            rng.randint(4, 12), rng.randint(2, 14),
            seed=rng.randrange(1 << 30), neg_prob=0.3,
        )
        out = reduce(f, [])
        if out is CONFLICT:
            continue
        assert ConnectionGraph(out[0]).single_labelled()


def test_components_partition_random_instances():
    rng = random.Random(43)
    for _ in range(100):
        f = gen_random(
            rng.randint(6, 14), rng.randint(2, 10),
            seed=rng.randrange(1 << 30), neg_prob=0.25,
        )
        parts = components(f)
        seen = []
        vars_by_part = []
        for p in parts:
            seen.extend(p.cids())
            vars_by_part.append(set(p.vars()))
            for cid in p.cids():
                assert p.clauses[cid] == f.clauses[cid]
        assert sorted(seen) == f.cids()
        for i in range(len(vars_by_part)):
            for j in range(i + 1, len(vars_by_part)):
                assert not (vars_by_part[i] & vars_by_part[j])
