import random

import pytest

from x3sat.formula import (CONFLICT, Alias, Bind, Completion, Formula, Free,
                           ParseError, assign_true, clause_key, evaluate_exact,
                           num_connected_clauses, parse, reconstruct,
                           serialize, substitute, var_of)


def test_clause_key_sorts_by_variable_then_sign():
    assert clause_key([3, -1, 2]) == ((1, 1), (2, 0), (3, 0))
    assert clause_key([-3, -3]) == ((3, 1), (3, 1))


def test_from_clauses_assigns_sequential_ids():
    f = Formula.from_clauses([[1, 2, 3], [-1, 4, 5]])
    assert f.cids() == [1, 2]
    assert f.m == 2 and f.n == 5
    assert f.clauses[2] == [-1, 4, 5]


def test_occurrence_index_counts_every_occurrence():
    f = Formula.from_clauses([[1, 1, 2]])
    assert f.degree(1) == 2
    assert f.polarity_counts(1) == (2, 0)
    assert f.polarity_counts(2) == (1, 0)
    assert f.is_singleton(2) and not f.is_singleton(1)


def test_add_clause_with_explicit_id():
    f = Formula()
    f.add_clause([1, 2], cid=7)
    assert f.cids() == [7]
    assert f.add_clause([2, 3]) == 8
    with pytest.raises(ValueError):
        f.add_clause([1], cid=7)


def test_width_limits():
    with pytest.raises(ValueError):
        Formula.from_clauses([[1, 2, 3, 4]])
    with pytest.raises(ValueError):
        Formula.from_clauses([[]])
    with pytest.raises(ValueError):
        Formula.from_clauses([[0, 1]])


def test_set_and_remove_keep_index_consistent():
    f = Formula.from_clauses([[1, 2, 3], [3, 4, 5]])
    f.set_clause(1, [-2, 6])
    f.remove_clause(2)
    assert f.vars() == [2, 6]
    f.check_index()


def test_remove_clause_with_repeated_variable():
    f = Formula.from_clauses([[1, 1, 2], [2, 3, 4]])
    f.remove_clause(1)
    assert f.vars() == [2, 3, 4]
    f.check_index()


def test_phi_is_max_degree():
    f = Formula.from_clauses([[1, 2, 3], [1, 4, 5], [-1, 6, 7], [2, 4, 6]])
    assert f.phi() == 3
    assert f.degree(2) == 2


# worked neighbourhood counts around a variable seen twice positive, once
# negative: the negative clause's variables are not in N(+x)
def test_num_connected_clauses_examples():
    f = Formula.from_clauses([[1, 2, 3], [1, 4, 5], [-1, 6, 7]])
    assert num_connected_clauses(f, 1) == 2
    g = Formula.from_clauses([[1, 2, 3], [1, 4, 5], [-1, 6, 7], [2, 8, 9]])
    assert num_connected_clauses(g, 1) == 3
    # co-occurring variables appearing nowhere else: only x's own clauses
    h = Formula.from_clauses([[1, 2, 3], [1, 4, 5], [6, 7, 8]])
    assert num_connected_clauses(h, 1) == 2


def test_num_connected_clauses_is_literal_specific():
    f = Formula.from_clauses([[1, 2, 3], [-1, 4, 5], [4, 6, 7]])
    # only clause 2 holds literal -1, its neighbours {4,5} reach clause 3
    assert num_connected_clauses(f, -1) == 2
    assert num_connected_clauses(f, 1) == 1


def test_evaluate_exact_counts_multiplicity():
    f = Formula.from_clauses([[1, 1, 2]])
    assert not evaluate_exact(f, {1: True, 2: False})
    assert evaluate_exact(f, {1: False, 2: True})
    with pytest.raises(ValueError):
        evaluate_exact(f, {1: True})


def test_substitute_literal_false_deletes_only_that_literal():
    f = Formula.from_clauses([[1, 2, 3], [-1, 4, 5]])
    log = []
    assert substitute(f, 1, False, log) is True
    assert f.clauses[1] == [2, 3]
    assert f.clauses[2] == [-1, 4, 5]  # the complements stay put
    assert log == [Bind(1, False)]


def test_substitute_emptying_a_clause_is_a_conflict():
    f = Formula.from_clauses([[1], [1, 2, 3]])
    assert substitute(f, 1, False, []) is CONFLICT


def test_substitute_literal_for_literal_rewrites_both_polarities():
    f = Formula.from_clauses([[1, 2, 3], [-2, 4, 5]])
    log = []
    assert substitute(f, 2, -6, log) is True
    assert f.clauses[1] == [1, -6, 3]
    assert f.clauses[2] == [6, 4, 5]
    assert log == [Alias(2, -6)]


def test_substitute_clause_replacement_keeps_id():
    f = Formula.from_clauses([[1, 2, 3]])
    assert substitute(f, 1, [4, 5], []) is True
    assert f.clauses[1] == [4, 5]


def test_parse_returns_defaults_for_declared_unused():
    f, seed = parse("c comment\np x3sat 5 1\n1 2 3 0\n")
    assert f.m == 1 and f.n_declared == 5
    assert seed == [Free(4), Free(5)]


def test_parse_cnf_header_needs_flag():
    text = "p cnf 3 1\n1 2 3 0\n"
    with pytest.raises(ParseError):
        parse(text)
    f, _ = parse(text, cnf_ok=True)
    assert f.m == 1


def test_parse_error_line_numbers():
    cases = [
        ("p x3sat 3\n", "line 1"),
        ("1 2 0\np x3sat 3 1\n", "line 1"),
        ("p x3sat 3 1\n1 2\n", "line 2"),
        ("p x3sat 3 1\n1 2 x 0\n", "line 2"),
        ("p x3sat 3 1\n1 2 3 4 0\n", "line 2"),
        ("p x3sat 3 1\n1 4 2 0\n", "line 2"),
        ("p x3sat 3 2\n1 2 3 0\n", "declares 2"),
        ("p x3sat 3 1\np x3sat 3 1\n1 2 3 0\n", "line 2"),
    ]
    for text, frag in cases:
        with pytest.raises(ParseError) as exc:
            parse(text)
        assert frag in str(exc.value), text


def test_serialize_round_trip():
    f = Formula.from_clauses([[1, -2, 3], [3, 4, 5]])
    g, _ = parse(serialize(f))
    assert g.clauses == f.clauses
    assert serialize(g) == serialize(f)


def test_reconstruct_replays_in_reverse():
    # the alias points at a variable that is bound later in the log
    log = [Alias(2, -1), Bind(1, True), Free(3)]
    model = reconstruct(log, {})
    assert model == {1: True, 2: False, 3: False}


def test_reconstruct_alias_overwrites():
    # a variable aliased to its own negation flips an existing guess
    model = reconstruct([Alias(2, -2)], {2: True})
    assert model == {2: False}


def test_reconstruct_completion():
    log = [Completion(4, (1, -2))]
    assert reconstruct(log, {1: False, 2: True}) == {1: False, 2: True, 4: True}
    assert reconstruct(log, {1: True, 2: True}) == {1: True, 2: True, 4: False}
    # completions may overwrite a value the model already carries
    assert reconstruct(log, {1: False, 2: True, 4: False})[4] is True


def test_free_keeps_existing_value():
    assert reconstruct([Free(5)], {5: True}) == {5: True}
    assert reconstruct([Free(5, default=True)], {}) == {5: True}


def test_assign_true_cascade_shrinks_but_does_not_rewrite():
    f = Formula.from_clauses([[1, 2, 3], [2, 4, 5], [4, 6, 7]])
    log = []
    assert assign_true(f, [1], log) is None
    # satisfied clause gone, false literal deleted, short clauses left alone
    assert f.clauses == {2: [4, 5], 3: [4, 6, 7]}
    assert {(r.var, r.value) for r in log} == {(1, True), (2, False), (3, False)}


def test_assign_true_conflicts():
    f = Formula.from_clauses([[1, 2, 3], [1, -2, 4]])
    assert assign_true(f, [1], []) is CONFLICT
    g = Formula.from_clauses([[1, 1, 2]])
    assert assign_true(g, [1], []) is CONFLICT
    h = Formula.from_clauses([[1, 2]])
    assert assign_true(h, [-1, -2], []) is CONFLICT


def test_assign_true_random_consistency():
    # models surviving assign_true must extend to full models and vice versa
    for t in range(300):
        rng = random.Random(t)
        n = rng.randint(3, 8)
        f = Formula.from_clauses(
            [[v if rng.random() < 0.75 else -v
              for v in rng.sample(range(1, n + 1), 3)]
             for _ in range(rng.randint(1, 6))])
        pick = rng.randint(1, n)
        lit = pick if rng.random() < 0.5 else -pick
        g = f.clone()
        log = []
        out = assign_true(g, [lit], log)
        if out is CONFLICT:
            continue
        g.check_index()
        for rec in log:
            for cid, lits in g.clauses.items():
                assert rec.var not in [var_of(l) for l in lits]
