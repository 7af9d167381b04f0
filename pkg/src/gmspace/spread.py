"""The spread ``S`` (``e_i -> e_2i``), its adjoint ``R`` and the restricted inverse ``Lambda``."""
from __future__ import annotations

from typing import Optional

from .certificates import LAMBDA_SPECIAL, R_SPECIAL, Certificate, Terminal, Weighted
from .vectors import FinVector, Interval


def apply_S(x: FinVector, k: int = 1) -> FinVector:
    if k < 0:
        raise ValueError("negative power")
    if k == 0:
        return x
    f = 1 << k
    return x.map_indices(lambda i: f * i)


def apply_R(f: FinVector, k: int = 1) -> FinVector:
    """``(R f)_i = f_{2i}``; odd coordinates are dropped, an all-odd input maps to zero."""
    if k < 0:
        raise ValueError("negative power")
    if k == 0:
        return f
    step = 1 << k
    return FinVector([(i >> k, a) for i, a in f.items() if i % step == 0])


def r_interval_image(E: Interval, k: int = 1) -> Optional[Interval]:
    """``{i : 2^k i in E}``, or ``None`` when no such ``i`` exists."""
    step = 1 << k
    lo = -(-E.lo // step)
    hi = E.hi // step
    if lo > hi:
        return None
    return Interval(lo, hi)


def lambda_member(g: FinVector, f: FinVector, k: int) -> bool:
    """``g`` in ``Lambda^k(f)``: ``R^k g = f`` and ``range(g) = 2^k range(f)``."""
    if not f:
        raise ValueError("Lambda is only used on nonzero functionals")
    if k < 0:
        raise ValueError("negative power")
    if k == 0:
        return g == f
    if not g or apply_R(g, k) != f:
        return False
    return g.range() == f.range().scale(1 << k)


def lambda_canonical_lift(f: FinVector) -> FinVector:
    """The index-doubling member of ``Lambda(f)`` (no odd coordinates)."""
    if not f:
        raise ValueError("Lambda is only used on nonzero functionals")
    return apply_S(f)


def lambda_power_lift(f: FinVector, k: int) -> FinVector:
    if k < 0:
        raise ValueError("negative power")
    return apply_S(f, k)


def r_certificate(c: Certificate, k: int = 1) -> Optional[Certificate]:
    """Apply ``R^k`` node by node; ``None`` stands for the zero functional.

    Weighted nodes keep their weight, restrictions map through
    :func:`r_interval_image`, zero children are dropped.
    """
    if k == 0:
        return c
    if isinstance(c, Terminal):
        step = 1 << k
        return Terminal(c.sign, c.i >> k) if c.i % step == 0 else None
    E = r_interval_image(c.E, k)
    if E is None:
        return None
    kids = tuple(ch for ch in (r_certificate(ch, k) for ch in c.children) if ch is not None)
    if not kids:
        return None
    tag, power = c.tag, c.k
    if tag == R_SPECIAL:
        power += k
    elif tag == LAMBDA_SPECIAL:
        if power >= k:
            power -= k
        else:
            tag, power = R_SPECIAL, k - power
    return Weighted(c.sign, c.j, E, kids, tag, power, c.seq)
