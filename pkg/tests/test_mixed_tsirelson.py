import random
from fractions import Fraction

import pytest

from gmspace.certificates import evaluate_certificate, verify_certificate_structure
from gmspace.mixed_tsirelson import ResourceError, effective_j_bound, mt_norm_exact, mt_norm_oracle
from gmspace.schedule import ParameterSchedule, compact
from gmspace.vectors import FinVector, norm_infty, norm_one, parse_vector


def test_four_unit_vectors():
    s = ParameterSchedule(m_table=(2, 4), n_table=(4, 6))
    x = parse_vector("1:1,2:1,3:1,4:1")
    res = mt_norm_exact(x, s)
    assert res.value == 2 and res.effective_j == 2
    assert mt_norm_oracle(x, s, 4) == 2


def test_single_coordinate():
    res = mt_norm_exact(parse_vector("7:-3/2"), compact())
    assert res.value == Fraction(3, 2)
    assert res.certificate.sign == -1


def test_certificate_reproduces_value():
    rng = random.Random(5)
    s = compact()
    for _ in range(50):
        x = FinVector({i: Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for i in rng.sample(range(1, 15), 8)})
        if not x:
            continue
        res = mt_norm_exact(x, s)
        assert verify_certificate_structure(res.certificate, s)[0]
        assert abs(evaluate_certificate(res.certificate, x, s)) == res.value
        assert norm_infty(x) <= res.value <= norm_one(x)


def test_dp_matches_brute_force():
    rng = random.Random(11)
    s = compact()
    for _ in range(60):
        x = FinVector({i: rng.choice([-2, -1, 1, 2]) for i in rng.sample(range(1, 9), rng.randint(1, 7))})
        assert mt_norm_exact(x, s).value == mt_norm_oracle(x, s, len(x))


def test_gaps_do_not_matter():
    s = compact()
    assert mt_norm_exact(parse_vector("1:1,2:1,3:1,4:1"), s).value == \
        mt_norm_exact(parse_vector("2:1,5:1,9:1,30:1"), s).value


def test_effective_bound_and_limits():
    assert effective_j_bound(parse_vector("1:1"), compact()) == 0
    with pytest.raises(ValueError):
        mt_norm_exact(FinVector.zero(), compact())
    with pytest.raises(ResourceError):
        mt_norm_oracle(FinVector({i: 1 for i in range(1, 14)}), compact(), 2)
