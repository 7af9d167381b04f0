
import pytest
from hypothesis import given, strategies as st

from gmspace.certificates import Terminal, Weighted, flatten
from gmspace.schedule import compact
from gmspace.spread import (apply_R, apply_S, lambda_canonical_lift, lambda_member, lambda_power_lift,
                            r_certificate, r_interval_image)
from gmspace.vectors import FinVector, Interval, is_block, pair, parse_vector

nonzero = st.dictionaries(st.integers(1, 40), st.fractions(-4, 4, max_denominator=5), min_size=1, max_size=6) \
    .map(FinVector).filter(bool)


def test_S_and_R_basics():
    assert apply_S(FinVector.unit(3)) == FinVector.unit(6)
    assert apply_R(parse_vector("1:1,2:3,4:5")) == parse_vector("1:3,2:5")
    assert not apply_R(parse_vector("1:1,3:1"))


def test_r_interval_image():
    assert r_interval_image(Interval(3, 9)) == Interval(2, 4)
    assert r_interval_image(Interval(5, 5)) is None
    assert r_interval_image(Interval(8, 8), 3) == Interval(1, 1)


@given(nonzero, nonzero)
def test_R_is_adjoint_of_S(f, x):
    assert pair(apply_R(f), x) == pair(f, apply_S(x))


@given(nonzero, st.integers(0, 4))
def test_R_inverts_S(x, k):
    assert apply_R(apply_S(x, k), k) == x


@given(nonzero, st.integers(0, 4))
def test_canonical_lift_is_member(f, k):
    assert lambda_member(lambda_power_lift(f, k), f, k)


def test_lambda_membership_cases():
    f = parse_vector("2:1,3:1")
    assert lambda_member(parse_vector("4:1,5:7,6:1"), f, 1)
    assert not lambda_member(parse_vector("4:1,6:1,7:1"), f, 1)  # range too long
    assert not lambda_member(parse_vector("4:1,6:2"), f, 1)
    assert lambda_member(f, f, 0)
    with pytest.raises(ValueError):
        lambda_member(f, FinVector.zero(), 1)
    assert lambda_canonical_lift(f) == parse_vector("4:1,6:1")


@given(nonzero, nonzero)
def test_lifts_preserve_blocks(f, g):
    g = g.map_indices(lambda i: i + f.max_supp())
    for k in range(1, 4):
        assert is_block([lambda_power_lift(f, k), lambda_power_lift(g, k)])


def test_r_certificate_matches_functional_R():
    S = compact()
    c = Weighted(1, 2, Interval(1, 7), (Terminal(1, 2), Weighted(1, 1, Interval(3, 7), (Terminal(1, 4), Terminal(-1, 7)))))
    r = r_certificate(c)
    assert flatten(r, S) == apply_R(flatten(c, S))
    assert r_certificate(Terminal(1, 3)) is None


def test_r_certificate_special_tags():
    lam = Weighted(1, 1, Interval(4, 8), (Terminal(1, 4), Terminal(1, 8)), "lambda_special", 1, "J")
    assert r_certificate(lam).tag == "lambda_special" and r_certificate(lam).k == 0
    assert r_certificate(lam, 2).tag == "r_special" and r_certificate(lam, 2).k == 1
    rs = Weighted(1, 1, Interval(4, 8), (Terminal(1, 4), Terminal(1, 8)), "r_special", 1, "J")
    assert r_certificate(rs).k == 2
