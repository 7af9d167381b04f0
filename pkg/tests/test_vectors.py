from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gmspace.vectors import (FinVector, Interval, format_vector, is_block, norm_infty, norm_one, pair,
                             parse_vector, restrict, show_rational, vsum)

coords = st.dictionaries(st.integers(1, 30), st.fractions(-5, 5, max_denominator=7), max_size=8)


def test_zeros_are_dropped_and_support_sorted():
    v = FinVector({5: 1, 2: Fraction(1, 2), 3: 0})
    assert v.support == (2, 5)
    assert v.range() == Interval(2, 5)
    assert len(v) == 2


def test_zero_vector():
    z = FinVector.zero()
    assert not z and z.range() is None
    assert vsum([]) == z


def test_bad_index_rejected():
    with pytest.raises(ValueError):
        FinVector({0: 1})


def test_pair_and_norms():
    f = parse_vector("1:1/2,3:-1")
    x = parse_vector("1:2,2:5,3:1")
    assert pair(f, x) == 0
    assert norm_one(x) == 8 and norm_infty(x) == 5


def test_restrict_interval():
    x = parse_vector("1:1,2:2,3:3,4:4")
    assert restrict(x, Interval(2, 3)) == parse_vector("2:2,3:3")
    assert not restrict(x, None)  # None is the empty interval


def test_is_block_ignores_order_of_ties():
    a, b = parse_vector("1:1,2:1"), parse_vector("3:1")
    assert is_block([a, b])
    assert not is_block([b, a])
    assert not is_block([a, parse_vector("2:1")])


def test_text_round_trip():
    v = parse_vector("3:-2/6,1:4")
    assert format_vector(v) == "1:4/1,3:-1/3"
    assert parse_vector(format_vector(v)) == v
    assert show_rational(Fraction(4)) == "4"


def test_interval_ops():
    E = Interval(3, 5)
    assert E.scale(2) == Interval(6, 10)
    assert E.intersect(Interval(5, 9)) == Interval(5, 5)
    assert E.intersect(Interval(6, 9)) is None
    with pytest.raises(ValueError):
        Interval(4, 2)


@given(coords, coords)
def test_addition_is_pointwise(a, b):
    u, v = FinVector(a), FinVector(b)
    w = u + v
    for i in set(a) | set(b):
        assert w[i] == a.get(i, 0) + b.get(i, 0)
    assert u - u == FinVector.zero()


@given(coords)
def test_sandwich_of_simple_norms(a):
    v = FinVector(a)
    assert norm_infty(v) <= norm_one(v)
    assert hash(v) == hash(FinVector(dict(v.items())))
