from fractions import Fraction

import pytest

from gmspace.certificates import Terminal, evaluate_certificate, flatten
from gmspace.constructions import (build_dependent_sequence, check_basic_inequality, complementation_witness,
                                   d5_scan, find_l1_average, lift_regular, make_ss_witness,
                                   make_stable_exact_pair, norming_certificate, unit_basis, verify_av_est,
                                   verify_exact_pair, verify_l1_average, verify_ris)
from gmspace.norming import CapacityError, Caps, KContext
from gmspace.schedule import desk
from gmspace.vectors import FinVector, norm_infty, pair, vsum


def test_unit_basis_after():
    b = unit_basis(3)
    assert b.after(1, 2) == [FinVector.unit(3), FinVector.unit(4)]
    assert b.after(10, 1) == [FinVector.unit(10)]


def test_norming_certificate_singleton(ctx):
    assert norming_certificate(FinVector.unit(5, -3), ctx) == (3, Terminal(-1, 5))


def test_l1_average_on_desk(desk_ctx):
    wit = find_l1_average(unit_basis(), 2, 2, Fraction(1, 2), desk_ctx)
    assert wit.ok
    assert wit.bracket.lower == 1
    assert norm_infty(wit.x) < Fraction(1, 2)
    assert vsum(wit.parts).scale(Fraction(1, 2)) == wit.x


def test_l1_average_rejects_bad_parts(desk_ctx):
    parts = [FinVector.unit(2), FinVector.unit(1)]
    wit = verify_l1_average(vsum(parts).scale(Fraction(1, 2)), parts, 2, desk_ctx)
    assert "parts are not a block sequence" in wit.problems


def test_l1_average_capacity(desk_ctx):
    with pytest.raises(CapacityError):
        find_l1_average(unit_basis(), 2, 2, Fraction(1, 10**6), desk_ctx, max_chunk=2)


def test_av_est_passes_and_planted_violator(ctx):
    x = FinVector({i: Fraction(1, 4) for i in range(1, 9)})
    rep = verify_av_est(x, 3, ctx)
    assert rep.passed and rep.caveats
    ctx.plant(FinVector({i: 1 for i in range(1, 9)}), 1)
    bad = verify_av_est(x, 3, ctx)
    assert not bad.passed
    assert any(not r["ok"] for r in bad.rows)


def test_gap_witness(ctx):
    w = make_ss_witness(1, unit_basis(), ctx)
    m, n = ctx.schedule.m(2), ctx.schedule.n(2)
    assert w.lower == 1
    assert w.sup == Fraction(m, n)
    assert evaluate_certificate(w.certificate, w.x, ctx.schedule) == 1
    assert ctx.validate_certificate(w.certificate) == []


def test_ris_needs_positive_eps(ctx):
    xs = [FinVector.unit(1), FinVector.unit(2)]
    assert not verify_ris(xs, 3, 0, [1, 2], ctx).ok
    single = verify_ris([FinVector.unit(1, Fraction(1, 10))], 3, Fraction(1, 2), [1], ctx)
    assert single.ok, single.problems


def test_ris_structure_checks(ctx):
    xs = [FinVector.unit(2), FinVector.unit(1)]
    w = verify_ris(xs, 3, 1, [2, 1], ctx)
    assert "weight indices are not strictly increasing" in w.problems
    assert "vectors are not a block sequence" in w.problems


def test_basic_inequality_report(ctx):
    xs = [FinVector.unit(i, Fraction(1, 10)) for i in range(1, 5)]
    rep = check_basic_inequality(xs, 1, 1, ctx)
    assert rep["within_2C_over_m"]
    with pytest.raises(ValueError):
        check_basic_inequality([FinVector.unit(i) for i in range(1, 20)], 1, 1, ctx)


def test_lift_regular():
    assert lift_regular(Terminal(1, 3), 2) == Terminal(1, 12)


def test_exact_pair_on_desk(desk_ctx):
    wit = make_stable_exact_pair(2, unit_basis(), desk_ctx, k_cap=2)
    assert wit.stable, wit.problems
    assert pair(wit.f, wit.x) == 1
    assert wit.f.range() == wit.x.range()
    assert norm_infty(wit.x) < Fraction(1, desk_ctx.schedule.m(2))
    assert all(b.lower >= 1 and b.upper <= 6 for b in wit.brackets)


def test_exact_pair_rejects_odd_index(desk_ctx):
    with pytest.raises(ValueError):
        make_stable_exact_pair(1, unit_basis(), desk_ctx)


def test_exact_pair_detects_wrong_weight(desk_ctx):
    wit = make_stable_exact_pair(2, unit_basis(), desk_ctx, k_cap=0)
    bad = verify_exact_pair(wit.x.scale(2), wit.cert, 2, desk_ctx, k_cap=0)
    assert not bad.stable
    assert any(p.startswith("(3)") for p in bad.problems)


@pytest.fixture(scope="module")
def dependent():
    ctx = KContext(desk(), caps=Caps(3, 16, 8))
    return ctx, build_dependent_sequence(1, ctx, k_cap=1)


def test_dependent_sequence(dependent):
    ctx, dep = dependent
    assert len(dep.xs) == ctx.schedule.n(1)
    assert dep.ok, {k: v.to_dict() for k, v in dep.clauses.items() if not v.passed}
    for x, f in zip(dep.xs, dep.fs):
        assert pair(f, x) == 1
    assert d5_scan(dep).passed
    # (D1) and (D6) hold only as mode caveats at this scale
    assert dep.clauses["D1"].caveats


def test_complementation_witness(dependent):
    ctx, dep = dependent
    wit = complementation_witness(dep, ctx)
    assert wit.plus_value >= 1
    assert wit.plus_bracket.lower >= wit.plus_value
    assert wit.minus_bracket.lower <= wit.minus_bracket.upper
    m = ctx.schedule.m(1)
    assert wit.reference == Fraction(240, m * m)
    assert wit.reference_y_minus_z == Fraction(240, m)
    assert wit.ratio == wit.minus_bracket.upper / wit.plus_bracket.lower
    assert flatten(wit.plus_certificate, ctx.schedule).range() is not None
