import random

import pytest
from hypothesis import given, strategies as st

from itroots.endo import (Endofunction, EndoFormatError, decompose, fiber,
                          fiber2, fiber_sizes, from_json_dict, iterate,
                          to_json_dict)

# Small reference fixtures used across the test suite.
# 9-point constant map onto the last point (labels x_-8 .. x_0).
CONSTANT9 = Endofunction((8,) * 9,
                         labels=tuple(f"x_{j}" for j in range(-8, 1)))
# A square root of it: x_j -> x_{j+4} on the low half, else x_0.
G9 = Endofunction((4, 5, 6, 7, 8, 8, 8, 8, 8))

# 19-point map with a 3-cycle at the top (labels x_-16 .. x_2).
F19 = Endofunction(tuple([18] * 8 + [16] * 8 + [17, 18, 16]),
                   labels=tuple(f"x_{j}" for j in range(-16, 3)))


def tables(max_n=8):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.integers(0, n - 1), min_size=n, max_size=n))


def test_validation():
    with pytest.raises(ValueError):
        Endofunction(())
    with pytest.raises(ValueError):
        Endofunction((0, 3))
    with pytest.raises(ValueError):
        Endofunction((0,), labels=("a", "b"))


def test_iterate_identity():
    ident = Endofunction.identity(5)
    assert iterate(ident, 7) == ident
    assert iterate(ident, 0) == ident


def test_iterate_three_cycle():
    f = Endofunction((1, 2, 0))
    assert iterate(f, 3) == Endofunction.identity(3)
    assert iterate(f, 0) == Endofunction.identity(3)


def test_iterate_square_root_gives_constant_map():
    assert iterate(G9, 2) == CONSTANT9


def test_fiber_constant_map():
    assert list(fiber(CONSTANT9, 8)) == list(range(9))
    assert list(fiber(CONSTANT9, 3)) == []


def test_fiber_identity():
    assert list(fiber(Endofunction.identity(5), 3)) == [3]


def test_fiber_19_point_map():
    # independently re-derived from the table
    x2 = 18
    expected = [y for y in range(19) if F19.table[y] == x2]
    assert list(fiber(F19, x2)) == expected
    assert len(expected) == 9
    assert expected == list(range(8)) + [17]


def test_fiber2_19_point_map():
    # f^-2(x_0) equals f^-1(x_2): composed by hand from the case list
    x0 = 16
    got = list(fiber2(F19, x0))
    assert got == list(fiber(F19, 18))
    assert len(got) == 9


def test_fiber2_identity():
    assert list(fiber2(Endofunction.identity(3), 0)) == [0]


def test_fiber2_truncated_ray_map():
    # x-ray kept at indices -12..2, y-ray at -6..2; tops made self-loops.
    f = _truncated_double_ray()
    x0 = 12
    assert list(fiber2(f, x0)) == list(range(8))  # x_-12 .. x_-5
    assert len(fiber2(f, x0)) == 8


def _truncated_double_ray() -> Endofunction:
    # x_j at index j+12 for -12 <= j <= 2, y_j at index 15 + (j+6) for -6 <= j <= 2
    xi = {j: j + 12 for j in range(-12, 3)}
    yi = {j: 15 + j + 6 for j in range(-6, 3)}
    t = [0] * 24
    for j in range(-12, 3):
        if j in (-12, -11):
            t[xi[j]] = xi[-4]
        elif j in (-10, -9):
            t[xi[j]] = xi[-3]
        elif j in (-8, -7):
            t[xi[j]] = xi[-2]
        elif j in (-6, -5):
            t[xi[j]] = xi[-1]
        elif -4 <= j <= -1:
            t[xi[j]] = xi[0]
        elif j < 2:
            t[xi[j]] = xi[j + 1]
        else:
            t[xi[j]] = xi[j]  # truncated top: self-loop, outside checked orbits
    for j in range(-6, 3):
        if j in (-6, -5):
            t[yi[j]] = yi[-2]
        elif j in (-4, -3):
            t[yi[j]] = yi[-1]
        elif j in (-2, -1):
            t[yi[j]] = yi[0]
        elif j < 2:
            t[yi[j]] = yi[j + 1]
        else:
            t[yi[j]] = yi[j]
    return Endofunction(tuple(t))


def test_fiber_out_of_range():
    with pytest.raises(ValueError):
        fiber(CONSTANT9, 9)
    with pytest.raises(ValueError):
        fiber2(CONSTANT9, -1)


def test_decompose_identity():
    dec = decompose(Endofunction.identity(4))
    assert sorted(dec.cycle_lengths) == [1, 1, 1, 1]
    assert dec.depth == (0, 0, 0, 0)


def test_decompose_three_cycle():
    dec = decompose(Endofunction((1, 2, 0)))
    assert dec.cycle_lengths == (3,)


def test_decompose_constant_map():
    dec = decompose(CONSTANT9)
    assert dec.cycle_lengths == (1,)
    assert dec.cycles[0] == (8,)
    assert sorted(dec.depth) == [0] + [1] * 8


def test_decompose_recomposition_random():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randrange(1, 40)
        f = Endofunction(tuple(rng.randrange(n) for _ in range(n)))
        dec = decompose(f)
        cycle_nodes = {x for c in dec.cycles for x in c}
        cycle_of = {x: c for c in dec.cycles for x in c}
        for x in range(n):
            y = x
            for _ in range(dec.depth[x]):
                y = f.table[y]
            assert y in cycle_nodes
            # walking a further full cycle length stays on the cycle
            z = y
            for _ in range(len(cycle_of[y])):
                z = f.table[z]
            assert z == y
            # depth is minimal: one step short must stay off-cycle
            if dec.depth[x] > 0:
                w = x
                for _ in range(dec.depth[x] - 1):
                    w = f.table[w]
                assert w not in cycle_nodes


def test_decompose_large_iterative():
    rng = random.Random(3)
    n = 200_000
    f = Endofunction(tuple(rng.randrange(n) for _ in range(n)))
    dec = decompose(f)
    assert sum(dec.cycle_lengths) == sum(1 for d in dec.depth if d == 0)


@given(tables())
def test_fiber_membership_matches_table(table):
    f = Endofunction(tuple(table))
    for x in range(f.size):
        fb = fiber(f, x)
        for y in range(f.size):
            assert (y in fb) == (f.table[y] == x)


@given(tables())
def test_fiber2_is_union_of_fibers(table):
    f = Endofunction(tuple(table))
    for x in range(f.size):
        union = sorted({y for m in fiber(f, x) for y in fiber(f, m)})
        assert list(fiber2(f, x)) == union


@given(tables())
def test_fiber_sizes_sum_to_n(table):
    f = Endofunction(tuple(table))
    assert sum(fiber_sizes(f)) == f.size
    assert sum(len(fiber(f, x)) for x in range(f.size)) == f.size


@given(tables(max_n=6), st.integers(0, 4), st.integers(0, 4))
def test_iterate_is_additive(table, a, b):
    f = Endofunction(tuple(table))
    lhs = iterate(f, a + b)
    rhs = iterate(f, a)
    for _ in range(b):
        rhs = f.compose(rhs)
    assert lhs == rhs


def test_json_round_trip():
    doc = to_json_dict(CONSTANT9)
    assert doc["n"] == 9 and len(doc["labels"]) == 9
    back = from_json_dict(doc)
    assert back == CONSTANT9 and back.labels == CONSTANT9.labels


@pytest.mark.parametrize("doc,field", [
    ({"map": [0]}, "n"),
    ({"n": 2}, "map"),
    ({"n": 2, "map": [0, 5]}, "map"),
    ({"n": 0, "map": []}, "n"),
    ({"n": 1, "map": [0], "labels": ["a", "b"]}, "labels"),
])
def test_json_errors_name_field(doc, field):
    with pytest.raises(EndoFormatError) as exc:
        from_json_dict(doc)
    assert exc.value.field == field
