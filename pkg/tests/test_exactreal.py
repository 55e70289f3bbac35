import math
from fractions import Fraction as Fr

import pytest
from hypothesis import given, strategies as st

from itroots.exactreal import ComparableReal, _chord_enclosure


def test_exact_anchor_values():
    assert ComparableReal(0) == 0
    assert ComparableReal(Fr(1, 6)) == 1
    assert ComparableReal(Fr(1, 2)) == 2
    assert not ComparableReal(Fr(1, 6)) < 1
    assert not ComparableReal(Fr(1, 6)) > 1
    assert ComparableReal(Fr(1, 6)) <= 1
    assert ComparableReal(Fr(1, 6)) >= 1


def test_strict_comparisons_against_rationals():
    x = ComparableReal(Fr(1, 8))  # 2*sin(pi/8) = 0.7653...
    assert x < 1
    assert x > Fr(3, 4)
    assert x < Fr(766, 1000)
    assert x > Fr(765, 1000)


def test_monotone_in_angular_distance():
    xs = [ComparableReal(Fr(k, 20)) for k in range(0, 11)]
    for a, b in zip(xs, xs[1:]):
        assert a < b
        assert b > a
        assert not a == b


def test_domain_validation():
    with pytest.raises(ValueError):
        ComparableReal(Fr(3, 4))
    with pytest.raises(ValueError):
        ComparableReal(Fr(-1, 4))


@given(st.integers(0, 500), st.integers(1, 500))
def test_enclosure_soundness(num, den):
    d = Fr(num, den)
    if d > Fr(1, 2):
        d = Fr(1, 2) - d / 2 / 500  # fold back into range
    lo, hi = _chord_enclosure(d, 64)
    true = 2 * math.sin(math.pi * float(d))
    assert float(lo) <= true + 1e-12
    assert float(hi) >= true - 1e-12
    assert hi - lo < Fr(1, 2**40)


@given(st.integers(0, 1000), st.integers(1, 64), st.integers(0, 4000))
def test_comparison_agrees_with_float(num, den, qnum):
    d = Fr(num % (den * 2 + 1), 2 * (den * 2 + 1))  # rational in [0, 1/2]
    q = Fr(qnum, 2000)
    x = ComparableReal(d)
    got = x.compare(q)
    approx = 2 * math.sin(math.pi * float(d)) - float(q)
    if abs(approx) > 1e-9:
        assert got == (1 if approx > 0 else -1)
    else:
        exact = x.exact_value()
        if exact is not None:
            assert got == (exact > q) - (exact < q)


def test_sandwich_shortcut_tight_cases():
    # values just inside/outside the rational sandwich still decide correctly
    d = Fr(1, 1000)
    x = ComparableReal(d)
    assert x > Fr(4, 1000)              # 4d lower bound is strict
    assert x < Fr(710, 113) * d         # upper bound is strict
    assert x < Fr(629, 100000)          # 2*pi*d = 0.00628318...
    assert x > Fr(628, 100000)


def test_refinement_is_memoized():
    x = ComparableReal(Fr(1, 7))
    x.compare(Fr(78, 100))
    prec_after = x._prec
    x.compare(Fr(78, 100))
    assert x._prec == prec_after


def test_float_projection():
    assert abs(float(ComparableReal(Fr(1, 8))) - 2 * math.sin(math.pi / 8)) < 1e-12


def test_equality_with_irrational_value_is_false():
    # 2*sin(pi/5) is irrational, so no rational can equal it
    assert not (ComparableReal(Fr(1, 5)) == Fr(19, 10))
    assert ComparableReal(Fr(1, 5)) != Fr(19, 10)
