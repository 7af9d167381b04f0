from fractions import Fraction

import pytest

from gmspace.certificates import flatten
from gmspace.norming import (CapacityError, Caps, ConformingInfeasible, KContext, build_j_special,
                             build_lambda_special, check_K1, check_K2, check_K3, check_tree_property,
                             generate_K, lift_certificate_canonical, verify_special)
from gmspace.schedule import compact, conforming
from gmspace.spread import apply_R
from gmspace.vectors import FinVector, parse_vector


def test_terminals_and_regular_members(ctx):
    assert ctx.contains(FinVector.unit(5, -1))
    assert ctx.contains(parse_vector("1:1/4,3:-1/4"))  # m_2 = 4, two terminal children
    assert not ctx.contains(parse_vector("1:1/2,3:1/2"))  # m_1 is reserved for special functionals
    assert ctx.generation_of(parse_vector("1:1/16,2:1/16,9:1/4")) == 2


def test_arity_bound(ctx):
    six = FinVector({i: Fraction(1, 4) for i in range(1, 7)})
    seven = FinVector({i: Fraction(1, 4) for i in range(1, 8)})
    assert ctx.contains(six, gen=1)
    assert not ctx.contains(seven, gen=1)


def test_special_sequence_structure(ctx):
    seq = build_j_special(ctx, 1, 4, start=1)
    assert seq.weights == (2, 2, 4, 4)
    assert seq.members[1] == seq.members[0].map_indices(lambda i: i << seq.ks[0])
    assert [p for p in verify_special(seq, ctx) if not p.startswith("caveat")] == []
    assert ctx.registry.lookup(seq.members[:2]) == 4


def test_special_functionals_are_members(special_ctx):
    seq = special_ctx.sequences["J1-1"]
    total = (seq.members[0] + seq.members[1]).scale(Fraction(1, 2))
    cert = special_ctx.analysis(total)
    assert cert is not None and cert.tag == "r_special"
    assert flatten(cert, special_ctx.schedule) == total
    assert special_ctx.contains(apply_R(total))
    assert special_ctx.contains(total.map_indices(lambda i: 2 * i))


def test_odd_length_and_overlong_rejected(ctx):
    with pytest.raises(ValueError):
        build_j_special(ctx, 1, 3)
    with pytest.raises(CapacityError):
        build_j_special(ctx, 1, 6)


def test_conforming_mode_limits():
    # seed index is 6 (m_6 = 2^3125 > 9 n_1^2); one pair fits, sigma for a second does not
    ctx = KContext(conforming(), caps=Caps(2, 8, 8))
    seq = build_j_special(ctx, 1, 2)
    assert seq.weights == (6, 6)
    with pytest.raises(ConformingInfeasible):
        build_j_special(ctx, 1, 4)
    with pytest.raises(ConformingInfeasible):
        build_j_special(KContext(conforming(), caps=Caps(2, 8, 4)), 1, 2)


def test_lambda_special_sequence(special_ctx):
    model = special_ctx.sequences["J1-2"]
    lifted = build_lambda_special(model, 2, special_ctx)
    assert verify_special(lifted, special_ctx) == []
    assert lifted.members[3] == model.members[3].map_indices(lambda i: 4 * i)


def test_lift_certificate_inverts_R(special_ctx):
    for f in [parse_vector("3:1/4,4:-1/4"), parse_vector("1:1/8,2:1/8")]:
        cert = special_ctx.analysis(f)
        h = flatten(special_ctx.lift_certificate(cert), special_ctx.schedule)
        assert apply_R(h) == f
        assert h.range() == f.range().scale(2)
        assert special_ctx.contains(h)


def test_canonical_lift_refuses_r_special():
    from gmspace.certificates import Terminal, Weighted
    from gmspace.vectors import Interval
    node = Weighted(1, 1, Interval(1, 2), (Terminal(1, 1),), "r_special", 1, "x")
    with pytest.raises(ValueError):
        lift_certificate_canonical(node)


def test_exhaustive_small_context_passes_checks():
    ctx = generate_K(compact(), Caps(1, 4, 2))
    assert ctx.exhaustive and len(ctx.records) == 88
    for check in (check_K1, check_K2, check_K3):
        rep = check(ctx)
        assert rep.passed and rep.checked == 88


def test_planted_functional_fails_closure():
    ctx = generate_K(compact(), Caps(1, 4, 2))
    ctx.plant(FinVector({2: Fraction(1, 3)}), 2)
    assert not check_K2(ctx).passed
    assert not check_K3(ctx).passed
    assert not check_K1(ctx).passed


def test_sampled_context_with_specials():
    ctx = KContext(compact(), caps=Caps(2, 8, 4))
    build_j_special(ctx, 1, 2, start=1)
    generate_K(ctx.schedule, ctx.caps, ctx=ctx, budget=500, sample=80, seed=3)
    assert not ctx.exhaustive
    assert any(r.formation != "regular" and r.weight == 1 for r in ctx.records)
    for check in (check_K1, check_K2, check_K3):
        assert check(ctx).passed


def test_tree_property_compact(special_ctx):
    rep = check_tree_property(special_ctx)
    assert rep.passed
