from fractions import Fraction

import pytest

from gmspace.norming import Caps, KContext, build_j_special
from gmspace.schedule import compact, desk
from gmspace.vectors import FinVector


def vec(text_or_map) -> FinVector:
    if isinstance(text_or_map, dict):
        return FinVector({i: Fraction(a) for i, a in text_or_map.items()})
    from gmspace.vectors import parse_vector
    return parse_vector(text_or_map)


@pytest.fixture
def sched():
    return compact()


@pytest.fixture
def ctx():
    return KContext(compact(), caps=Caps(3, 16, 8))


@pytest.fixture
def special_ctx():
    c = KContext(compact(), caps=Caps(3, 16, 8))
    build_j_special(c, 1, 2, start=1)
    build_j_special(c, 1, 4, start=3)
    return c


@pytest.fixture
def desk_ctx():
    return KContext(desk(), caps=Caps(3, 16, 8))
