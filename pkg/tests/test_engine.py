import json
import random
from fractions import Fraction

import pytest

from gmspace.acceptance import derived_even_schedule, random_rational
from gmspace.certificates import Terminal, evaluate_certificate, flatten
from gmspace.engine import (gm_norm_bracket, gm_norm_lower, isometry_check, transfer_certificate_R,
                            transfer_certificate_S, weight_profile)
from gmspace.mixed_tsirelson import mt_norm_exact
from gmspace.norming import Caps, KContext
from gmspace.schedule import compact
from gmspace.spread import apply_R, apply_S
from gmspace.vectors import FinVector, norm_infty, norm_one, parse_vector


def test_unit_vector(ctx):
    assert gm_norm_lower(FinVector.unit(3), ctx) == (1, Terminal(1, 3))


def test_regular_weights_are_even_indices(ctx):
    # m_2 = 4 is the first regular weight, so four ones give 1 and eight give 3/2
    assert gm_norm_lower(parse_vector("1:1,2:1,3:1,4:1"), ctx)[0] == 1
    assert gm_norm_lower(FinVector({i: 1 for i in range(1, 9)}), ctx)[0] == Fraction(3, 2)


def test_k0_only_context_gives_sup_norm():
    ctx0 = KContext(compact(), caps=Caps(1, 16, 8))
    x = parse_vector("1:3,2:-1,5:2")
    assert gm_norm_lower(x, ctx0, depth=0)[0] == norm_infty(x)


def test_matches_mixed_tsirelson_without_specials(ctx):
    rng = random.Random(2)
    even = derived_even_schedule(ctx.schedule)
    for _ in range(80):
        x = random_rational(rng, 12)
        assert gm_norm_lower(x, ctx, depth=12)[0] == mt_norm_exact(x, even).value


def test_bracket_formula_and_json(ctx):
    x = parse_vector("1:1,2:1")
    br = gm_norm_bracket(x, ctx, 6)
    assert br.lower == 1 and br.upper == 1 + Fraction(2, 64)
    d = json.loads(br.to_json())
    assert set(d) >= {"lower", "upper", "depthCap", "caveats", "certificate"}
    assert any("registry-relative" in c for c in br.caveats)
    # clamp to |x|_1
    assert gm_norm_bracket(FinVector.unit(1), ctx, 3).upper == 1


def test_lower_bound_monotone_in_depth(special_ctx):
    rng = random.Random(7)
    for _ in range(20):
        x = random_rational(rng, 12)
        vals = [gm_norm_lower(x, special_ctx, d)[0] for d in range(0, 4)]
        assert vals == sorted(vals)
        assert norm_infty(x) <= vals[-1] <= norm_one(x)


def test_certificate_evaluates_to_value(special_ctx):
    rng = random.Random(9)
    for _ in range(30):
        x = random_rational(rng, 14)
        v, cert = gm_norm_lower(x, special_ctx)
        assert abs(evaluate_certificate(cert, x, special_ctx.schedule)) == v
        assert special_ctx.validate_certificate(cert) == []


def test_special_atoms_can_win():
    # a vector matched to a special functional's sign pattern across many members
    from gmspace.norming import build_j_special
    ctx = KContext(compact(), caps=Caps(1, 16, 8))
    seq = build_j_special(ctx, 1, 4, start=1)
    phi = (seq.members[0] + seq.members[1] + seq.members[2] + seq.members[3]).scale(Fraction(1, 2))
    x = FinVector({i: (1 if a > 0 else -1) for i, a in phi.items()})
    v, cert = gm_norm_lower(x, ctx, depth=2)
    assert v >= sum(abs(a) for _, a in phi.items())
    assert ctx.validate_certificate(cert) == []


def test_transfer_terminal():
    assert transfer_certificate_R(Terminal(1, 2)) == Terminal(1, 1)
    assert transfer_certificate_R(Terminal(1, 3)) is None


def test_transfer_round_trip(special_ctx):
    x = parse_vector("1:1,2:-2,3:1/2,5:3")
    v, cert = gm_norm_lower(x, special_ctx)
    up = transfer_certificate_S(cert, special_ctx)
    f = flatten(cert, special_ctx.schedule)
    assert apply_R(flatten(up, special_ctx.schedule)) == f
    assert evaluate_certificate(up, apply_S(x), special_ctx.schedule) == evaluate_certificate(cert, x, special_ctx.schedule)


def test_isometry_reports(special_ctx):
    rng = random.Random(4)
    for _ in range(25):
        rep = isometry_check(random_rational(rng), special_ctx, sweep_specials=True)
        assert rep.passed, rep.problems
        assert rep.value_x == rep.value_Sx
    assert isometry_check(FinVector.unit(1), special_ctx).value_Sx == 1


def test_weight_profile_includes_planted(ctx):
    x = parse_vector("1:1,2:1")
    base = weight_profile(x, ctx)
    ctx.plant(parse_vector("1:5,2:5"), 2)
    assert weight_profile(x, ctx)[2] == 10 > base.get(2, 0)


def test_zero_vector_rejected(ctx):
    with pytest.raises(ValueError):
        gm_norm_lower(FinVector.zero(), ctx)
