import pytest

from gmspace.schedule import CONFORMING, ParameterSchedule, ScheduleError, compact, conforming, desk, preset


def test_compact_table_and_doubling():
    s = compact()
    assert [s.m(j) for j in range(1, 6)] == [2, 4, 8, 16, 32]
    assert [s.n(j) for j in range(1, 6)] == [4, 6, 8, 16, 32]


def test_desk_square_law():
    s = desk()
    assert [s.m(j) for j in range(1, 7)] == [2, 4, 6, 8, 10, 12]
    assert [s.n(j) for j in range(1, 7)] == [4, 18, 38, 66, 102, 146]
    assert all(s.n(j) > s.m(j) ** 2 for j in range(2, 10))


def test_conforming_growth_law():
    s = conforming()
    assert s.m(1) == 2 and s.m(2) == 32 and s.m(3) == 2 ** 25
    assert s.n(1) == 4
    assert s.n(2) == 20 ** 15


def test_conforming_beyond_materialisable():
    s = conforming()
    with pytest.raises(ScheduleError):
        s.m(12)
    assert s.allows_arity(5, 10 ** 9)


def test_validation_rejects_decreasing_tables():
    with pytest.raises(ScheduleError):
        ParameterSchedule(m_table=(4, 2), n_table=(4, 6))
    with pytest.raises(ScheduleError):
        ParameterSchedule(m_table=(2, 4), n_table=(1, 6))


def test_dict_round_trip():
    s = desk()
    assert ParameterSchedule.from_dict(s.to_dict()).m(5) == s.m(5)
    assert preset("conforming").mode == CONFORMING
    assert ParameterSchedule.from_dict({"preset": "desk"}).n(2) == 18


def test_index_zero_rejected():
    with pytest.raises(ScheduleError):
        compact().m(0)
