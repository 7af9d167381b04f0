from fractions import Fraction

import pytest

from gmspace import certificates as C
from gmspace.certificates import Terminal, Weighted, evaluate_certificate, flatten, verify_certificate_structure
from gmspace.schedule import compact
from gmspace.vectors import FinVector, Interval, parse_vector

S = compact()


def regular(j, lo, hi, *kids):
    return Weighted(1, j, Interval(lo, hi), tuple(kids))


def test_flatten_regular_node():
    c = regular(1, 1, 4, Terminal(1, 1), Terminal(-1, 3))
    assert flatten(c, S) == parse_vector("1:1/2,3:-1/2")


def test_restriction_applies_top_down():
    c = Weighted(1, 1, Interval(2, 4), (regular(1, 1, 4, Terminal(1, 1), Terminal(1, 3)),))
    assert flatten(c, S) == parse_vector("3:1/4")


def test_evaluate_on_vector():
    c = regular(1, 1, 4, *(Terminal(1, i) for i in range(1, 5)))
    assert evaluate_certificate(c, parse_vector("1:1,2:1,3:1,4:1"), S) == 2


def test_arity_violation_reported_with_path():
    c = regular(1, 1, 5, *(Terminal(1, i) for i in range(1, 6)))
    ok, problems = verify_certificate_structure(c, S)
    assert not ok and problems[0].startswith("arity") and problems[0].endswith("at node root")


def test_overlapping_children_fail_blockness():
    c = regular(2, 1, 3, Terminal(1, 2), Terminal(1, 2))
    ok, problems = verify_certificate_structure(c, S)
    assert not ok and "blockness" in problems[0]
    with pytest.raises(C.CertificateError, match="blockness"):
        evaluate_certificate(c, FinVector.unit(2), S)


def test_nested_problem_path():
    bad = regular(1, 1, 9, Terminal(1, 1), Terminal(3, 2))
    ok, problems = verify_certificate_structure(regular(2, 1, 9, bad), S)
    assert problems == ["sign: 3 at node root.0.1"]


def test_json_round_trip_is_stable():
    c = Weighted(-1, 1, Interval(1, 8), (Terminal(1, 1), Terminal(1, 8)), C.R_SPECIAL, 2, "J1-1")
    text = C.dumps(c)
    assert C.loads(text) == c
    assert C.dumps(C.loads(text)) == text
    assert '"tag":"r_special(2)"' in text


def test_unknown_kind_rejected():
    with pytest.raises(C.CertificateError):
        C.from_obj({"kind": "leaf"})


def test_depth_and_negation():
    c = regular(2, 1, 9, regular(1, 1, 4, Terminal(1, 1)), Terminal(1, 9))
    assert c.depth == 2
    assert sorted(C.leaf_depths(c)) == [1, 2]
    assert flatten(C.negate(c), S) == -flatten(c, S)


def test_restrict_certificate():
    c = regular(1, 1, 6, Terminal(1, 1), Terminal(1, 6))
    r = C.restrict_certificate(c, Interval(4, 9))
    assert flatten(r, S) == FinVector({6: Fraction(1, 2)})
    assert C.restrict_certificate(Terminal(1, 3), Interval(4, 9)) is None
