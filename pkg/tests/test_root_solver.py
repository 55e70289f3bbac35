import itertools
import random

import pytest

from itroots.endo import Endofunction, iterate
from itroots.root_solver import (BudgetExceeded, RootQuery, find_root,
                                 has_root_up_to, naive_root_search,
                                 verify_root)
from test_endo import CONSTANT9, F19, G9

# Square root of F19: low block shifts down by 8, top 3-cycle halves.
G19 = Endofunction(tuple([16] * 8 + list(range(8)) + [18, 16, 17]))

# 6-point map with a single C1-certifiable point (no roots of any order).
SIX_POINT_NO_ROOT = Endofunction((5, 0, 0, 1, 2, 0))


def all_endofunctions(n):
    for table in itertools.product(range(n), repeat=n):
        yield Endofunction(table)


def test_verify_root_bundled_pairs():
    assert verify_root(CONSTANT9, G9, 2)
    assert verify_root(F19, G19, 2)
    assert verify_root(Endofunction.identity(3), Endofunction((1, 2, 0)), 3)


def test_verify_root_rejects_mismatch():
    with pytest.raises(ValueError):
        verify_root(CONSTANT9, Endofunction((0,)), 2)
    assert not verify_root(F19, G9 if False else Endofunction(tuple([0] * 19)), 2)


def test_find_root_identity():
    res = find_root(RootQuery(Endofunction.identity(5), 2))
    assert res.status == "found"
    assert res.witness == Endofunction.identity(5)  # lexicographically least


def test_find_root_constant9():
    res = find_root(RootQuery(CONSTANT9, 2))
    assert res.status == "found"
    assert verify_root(CONSTANT9, res.witness, 2)


def test_find_root_three_cycle_square():
    f = Endofunction((1, 2, 0))
    res = find_root(RootQuery(f, 2))
    assert res.status == "found"
    # the only square root is f's own square: g = f^2, since g^2 = f^4 = f
    assert res.witness == iterate(f, 2)
    assert verify_root(f, res.witness, 2)


def test_find_root_none_on_certified_map():
    for order in (2, 3, 4):
        res = find_root(RootQuery(SIX_POINT_NO_ROOT, order))
        assert res.status == "none", order


def test_six_point_no_root_against_naive():
    # independent exhaustive check of the frozen "none" expectation (6^6 tables)
    assert naive_root_search(SIX_POINT_NO_ROOT, 2) is None


def test_has_root_up_to_identity():
    reports = has_root_up_to(Endofunction.identity(3), 4)
    assert [r.status for r in reports] == ["found"] * 3
    assert [r.order for r in reports] == [2, 3, 4]


def test_has_root_up_to_f19():
    reports = has_root_up_to(F19, 2)
    assert reports[0].status == "found"
    assert verify_root(F19, reports[0].witness, 2)


def test_has_root_up_to_certified_map():
    reports = has_root_up_to(SIX_POINT_NO_ROOT, 4)
    assert [r.status for r in reports] == ["none"] * 3


def test_budget_exceeded_is_distinct():
    with pytest.raises(BudgetExceeded):
        find_root(RootQuery(SIX_POINT_NO_ROOT, 2, budget=3))
    reports = has_root_up_to(SIX_POINT_NO_ROOT, 3, budget=3)
    assert [r.status for r in reports] == ["budget-exceeded"] * 2


def test_witness_deterministic_and_lex_smallest():
    rng = random.Random(11)
    for _ in range(30):
        n = rng.randrange(1, 5)
        f = Endofunction(tuple(rng.randrange(n) for _ in range(n)))
        r1 = find_root(RootQuery(f, 2))
        r2 = find_root(RootQuery(f, 2))
        assert r1.witness == r2.witness and r1.status == r2.status
        if r1.status == "found":
            # lexicographic minimality against the full enumeration
            best = min((g.table for g in all_endofunctions(n)
                        if iterate(g, 2) == f), default=None)
            assert r1.witness.table == best


@pytest.mark.parametrize("n,order", [(1, 2), (2, 2), (3, 2), (3, 3), (4, 2)])
def test_completeness_exhaustive_small(n, order):
    for f in all_endofunctions(n):
        res = find_root(RootQuery(f, order))
        naive = naive_root_search(f, order)
        assert (res.status == "found") == (naive is not None), f.table
        if res.witness is not None:
            assert verify_root(f, res.witness, order)


def test_completeness_sampled_five_points():
    rng = random.Random(5)
    for _ in range(120):
        f = Endofunction(tuple(rng.randrange(5) for _ in range(5)))
        for order in (2, 3):
            res = find_root(RootQuery(f, order))
            naive = naive_root_search(f, order)
            assert (res.status == "found") == (naive is not None), (f.table, order)


def test_count_all_three_cycle():
    f = Endofunction((1, 2, 0))
    res = find_root(RootQuery(f, 2, mode="count-all"))
    assert res.count == 1
    # reference count over the full table space
    assert res.count == sum(1 for g in all_endofunctions(3)
                            if iterate(g, 2) == f)


def test_count_all_identity_two_points():
    res = find_root(RootQuery(Endofunction.identity(2), 2, mode="count-all"))
    # g^2 = id on 2 points: identity and the swap
    assert res.count == 2


def test_parallel_agrees_on_status():
    cases = [Endofunction.identity(4), SIX_POINT_NO_ROOT, CONSTANT9,
             Endofunction((1, 2, 0))]
    for f in cases:
        seq = find_root(RootQuery(f, 2))
        par = find_root(RootQuery(f, 2), parallel=True)
        assert seq.status == par.status
        if par.status == "found":
            assert verify_root(f, par.witness, 2)


def test_query_validation():
    with pytest.raises(ValueError):
        RootQuery(CONSTANT9, 1)
    with pytest.raises(ValueError):
        RootQuery(CONSTANT9, 2, budget=0)
    with pytest.raises(ValueError):
        RootQuery(CONSTANT9, 2, mode="everything")
