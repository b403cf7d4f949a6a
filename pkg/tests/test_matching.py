"""Degree-two endgame: clause merging, matching extraction, blossom search."""

import random
from itertools import combinations

import pytest

from x3sat.formula import (CONFLICT, Bind, Completion, Formula, Free,
                           evaluate_exact, reconstruct)
from x3sat.matching import (GF, build_match_instance, eliminate_11,
                            maximum_matching, solve_degree2)
from x3sat.oracle import brute_force


def test_opposite_pair_merges_into_one_clause():
    g = GF.from_formula(Formula.from_clauses([[1, 2, 3], [-1, 4, 5]]))
    log = []
    assert eliminate_11(g, log) is not CONFLICT
    assert g.clauses == {1: [2, 3, 4, 5]}
    assert log == [Completion(1, (2, 3))]
    # the merged variable revives as: true iff its positive-side partners
    # are all false
    assert reconstruct(list(log), {2: True, 3: False, 4: False, 5: False})[1] is False
    assert reconstruct(list(log), {2: False, 3: False, 4: True, 5: False})[1] is True


def test_duplicate_literal_is_forced_out():
    g = GF()
    g.add_clause([2, 2, 3])
    log = []
    assert eliminate_11(g, log) is not CONFLICT
    assert g.clauses == {}
    assert log == [Bind(2, False), Bind(3, True)]


def test_complementary_pair_zeroes_the_rest():
    g = GF()
    g.add_clause([1, -1, 2])
    g.add_clause([2, 4, 5])
    log = []
    assert eliminate_11(g, log) is not CONFLICT
    assert g.clauses == {2: [4, 5]}
    assert log == [Free(1, False), Bind(2, False)]


def test_merge_conflict_detected():
    # merging on var 3 gives [1,2,1,2]; forcing both out empties the clause
    g = GF.from_formula(Formula.from_clauses([[1, 2, 3], [1, 2, -3]]))
    assert eliminate_11(g, []) is CONFLICT


def test_match_instance_edges_and_mandatory():
    g = GF.from_formula(Formula.from_clauses([[1, 2, 3], [1, 4, 5], [2, 4, 6]]))
    cids, edges, mandatory = build_match_instance(g)
    assert cids == [1, 2, 3]
    assert edges == [(1, 2, 1), (1, 3, 2), (2, 3, 4)]
    assert mandatory == set()  # every clause still has a singleton
    g = GF.from_formula(
        Formula.from_clauses([[1, 2, 4], [1, 3, 5], [2, 3, 6], [4, 5, 6]])
    )
    cids, edges, mandatory = build_match_instance(g)
    assert edges == [(1, 2, 1), (1, 3, 2), (1, 4, 4), (2, 3, 3), (2, 4, 5), (3, 4, 6)]
    assert mandatory == {1, 2, 3, 4}


def test_match_instance_rejects_unmerged_variables():
    g = GF.from_formula(Formula.from_clauses([[1, 2, 3], [-1, 4, 5]]))
    with pytest.raises(ValueError):
        build_match_instance(g)


def _matching_size(mate):
    return sum(1 for v, u in enumerate(mate) if u >= 0 and v < u)


def _brute_max_matching(n, edges):
    best = 0
    for k in range(min(len(edges), n // 2), 0, -1):
        if k <= best:
            break
        for sub in combinations(edges, k):
            seen = set()
            ok = True
            for u, v in sub:
                if u in seen or v in seen:
                    ok = False
                    break
                seen.add(u)
                seen.add(v)
            if ok:
                best = max(best, k)
                break
    return best


def test_blossom_exhaustive_small_graphs():
    for n in range(2, 5):
        all_edges = list(combinations(range(n), 2))
        for bits in range(1 << len(all_edges)):
            edges = [e for i, e in enumerate(all_edges) if bits >> i & 1]
            mate = maximum_matching(n, edges)
            assert _matching_size(mate) == _brute_max_matching(n, edges)
            for v, u in enumerate(mate):
                if u >= 0:
                    assert mate[u] == v and (min(u, v), max(u, v)) in edges


def test_blossom_random_graphs():
    rng = random.Random(59)
    for _ in range(150):
        n = rng.randint(5, 8)
        pool = list(combinations(range(n), 2))
        edges = rng.sample(pool, rng.randint(0, len(pool)))
        assert _matching_size(maximum_matching(n, edges)) == _brute_max_matching(
            n, edges
        )


def test_degenerate_widths():
    assert solve_degree2(Formula.from_clauses([[1]])).model == {1: True}
    assert solve_degree2(Formula.from_clauses([[1, 2]])).model == {1: True, 2: False}


def test_unsat_by_conflict_and_by_matching():
    r = solve_degree2(Formula.from_clauses([[1, 2, 3], [1, 2, -3]]))
    assert not r.sat and r.model is None
    # here merging succeeds but no saturating matching exists
    f = Formula.from_clauses([[2, -3, -6], [-3, 5, 2], [1, 5, 4], [1, 4, 6]])
    r = solve_degree2(f)
    assert not r.sat
    assert r.stats.nodes == 0 and r.stats.endgames == 1
    assert not brute_force(f).sat


def test_rejects_higher_degrees():
    with pytest.raises(ValueError):
        solve_degree2(Formula.from_clauses([[1, 2, 3], [1, 4, 5], [-1, 6, 7]]))


def test_keeps_caller_log_prefix():
    f = Formula.from_clauses([[1, 2, 3], [-1, 4, 5]])
    log = [Bind(99, True)]
    r = solve_degree2(f, log)
    assert r.sat
    assert log[0] == Bind(99, True)
    assert 99 not in r.model
    assert evaluate_exact(f, r.model)


def _gen_deg2(rng, n, m):
    budget = {v: 2 for v in range(1, n + 1)}
    cls = []
    for _ in range(m):
        avail = [v for v, b in budget.items() if b > 0]
        if len(avail) < 3:
            break
        vs = rng.sample(avail, 3)
        for v in vs:
            budget[v] -= 1
        cls.append([v * rng.choice((1, -1)) for v in vs])
    return cls


def test_endgame_matches_oracle():
    rng = random.Random(61)
    solved = 0
    for _ in range(400):
        cls = _gen_deg2(rng, rng.randint(4, 12), rng.randint(2, 7))
        if not cls:
            continue
        f = Formula.from_clauses(cls)
        r = solve_degree2(f)
        assert r.stats.nodes == 0 and r.stats.endgames == 1
        assert r.sat == brute_force(f).sat
        if r.sat:
            assert evaluate_exact(f, r.model)
        solved += 1
    assert solved > 300
