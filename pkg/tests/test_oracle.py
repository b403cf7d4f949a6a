"""Checks for the exhaustive reference decider."""

import random

import pytest

from x3sat import Formula, brute_force, evaluate_exact
from x3sat.oracle import brute_force_py
from x3sat.generate import gen_random


def test_single_clause_sat_and_count():
    f = Formula.from_clauses([[1, 2, 3]])
    res = brute_force(f, count=True)
    assert res.sat
    assert res.n_models == 3
    # lowest assignment index wins: 0b001 sets variable 1 alone
    assert res.model == {1: True, 2: False, 3: False}


def test_first_model_in_counting_order():
    f = Formula.from_clauses([[-1, 2, 3]])
    res = brute_force(f)
    # the all-false assignment already satisfies the negated literal
    assert res.model == {1: False, 2: False, 3: False}


def test_unsat_pair():
    f = Formula.from_clauses([[1, 2, 3], [1, 2, -3]])
    res = brute_force(f, count=True)
    assert not res.sat
    assert res.model is None
    assert res.n_models == 0


def test_unsat_without_count_leaves_n_models_unset():
    f = Formula.from_clauses([[1, 2, 3], [1, 2, -3]])
    assert brute_force(f).n_models is None


def test_disjoint_clauses_multiply_counts():
    f = Formula.from_clauses([[1, 2, 3], [4, 5, 6]])
    assert brute_force(f, count=True).n_models == 9


def test_repeated_literal_forces_rest():
    # 2*x1 + x2 == 1 has the single solution x1=0, x2=1
    f = Formula.from_clauses([[1, 1, 2]])
    res = brute_force(f, count=True)
    assert res.sat and res.n_models == 1
    assert res.model == {1: False, 2: True}


def test_complementary_pair_in_clause():
    # x1 + (1-x1) + x2 == 1 pins x2 false, leaves x1 free
    f = Formula.from_clauses([[1, -1, 2]])
    assert brute_force(f, count=True).n_models == 2


def test_empty_formula_is_sat():
    res = brute_force(Formula(), count=True)
    assert res.sat
    assert res.model == {}
    assert res.n_models == 1


def test_var_limit_enforced():
    f = Formula.from_clauses([[i, i + 1, i + 2] for i in range(1, 30, 3)])
    with pytest.raises(ValueError):
        brute_force(f, var_limit=25)
    with pytest.raises(ValueError):
        brute_force_py(f, var_limit=16)


def test_models_actually_satisfy():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randint(3, 10)
        m = rng.randint(1, 12)
        f = gen_random(n, m, seed=rng.randrange(1 << 30), neg_prob=0.3)
        res = brute_force(f)
        if res.sat:
            assert evaluate_exact(f, res.model)


def test_numpy_and_python_paths_agree():
    rng = random.Random(11)
    for _ in range(150):
        n = rng.randint(3, 9)
        m = rng.randint(1, 10)
        f = gen_random(n, m, seed=rng.randrange(1 << 30), neg_prob=0.35)
        a = brute_force(f, count=True)
        b = brute_force_py(f, count=True)
        assert a.sat == b.sat
        assert a.n_models == b.n_models
        assert a.model == b.model
