"""Exact norms in the mixed Tsirelson space ``T[(A_{n_j}, 1/m_j)]``.

Two independent routes: :func:`mt_norm_exact` is an interval-partition dynamic
program that also returns a certificate, :func:`mt_norm_oracle` maximises over
all trees of bounded depth on arbitrary (gapped) block subsets.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple

from .certificates import Certificate, Terminal, Weighted
from .schedule import ParameterSchedule
from .vectors import FinVector, Interval, norm_infty, norm_one


class ResourceError(RuntimeError):
    """A computation would exceed its declared budget."""


@dataclass(frozen=True)
class NormResult:
    value: Fraction
    certificate: Certificate
    effective_j: int


def effective_j_bound(x: FinVector, sched: ParameterSchedule) -> int:
    """Smallest ``J`` with ``m_{J+1} > |x|_1 / |x|_inf``.

    A weighted functional of weight ``1/m_j`` gives at most ``|x|_1 / m_j``,
    so indices past ``J`` never beat the best single coordinate.
    """
    if not x:
        raise ValueError("zero vector has no effective weight bound")
    ratio = norm_one(x) / norm_infty(x)
    J = 0
    while not sched.m(J + 1) > ratio:
        J += 1
    return J


def mt_norm_exact(x: FinVector, sched: ParameterSchedule) -> NormResult:
    if not x:
        raise ValueError("norm of the zero vector needs no certificate")
    J = effective_j_bound(x, sched)
    idx = x.support
    vals = [abs(a) for _, a in x.items()]
    signs = [1 if a > 0 else -1 for _, a in x.items()]
    s = len(idx)
    weights = [(j, Fraction(1, sched.m(j)), sched.n(j)) for j in range(1, J + 1)]

    # best[(a, b)] = (value, choice); choice is ("leaf", p) or ("w", j, cuts)
    best: Dict[Tuple[int, int], Tuple[Fraction, tuple]] = {}
    # parts[(a, b, d)] = (value, cuts) for partitions of [a, b] into at most d pieces
    parts: Dict[Tuple[int, int, int], Tuple[Fraction, Tuple[int, ...]]] = {}

    def partition(a: int, b: int, d: int) -> Tuple[Fraction, Tuple[int, ...]]:
        key = (a, b, d)
        if key in parts:
            return parts[key]
        top = (best[(a, b)][0], ())
        if d > 1:
            for c in range(a, b):
                tail, cuts = partition(c + 1, b, d - 1)
                v = best[(a, c)][0] + tail
                if v > top[0]:
                    top = (v, (c,) + cuts)
        parts[key] = top
        return top

    for length in range(1, s + 1):
        for a in range(0, s - length + 1):
            b = a + length - 1
            p = max(range(a, b + 1), key=lambda q: (vals[q], -q))
            top: Tuple[Fraction, tuple] = (vals[p], ("leaf", p))
            for j, w, nj in weights:
                if length < 2 or nj < 2:
                    continue
                for c in range(a, b):
                    tail, cuts = partition(c + 1, b, nj - 1)
                    v = w * (best[(a, c)][0] + tail)
                    if v > top[0]:
                        top = (v, ("w", j, (c,) + cuts))
            best[(a, b)] = top

    def build(a: int, b: int) -> Certificate:
        _, choice = best[(a, b)]
        if choice[0] == "leaf":
            p = choice[1]
            return Terminal(signs[p], idx[p])
        _, j, cuts = choice
        bounds: List[Tuple[int, int]] = []
        lo = a
        for c in cuts:
            bounds.append((lo, c))
            lo = c + 1
        bounds.append((lo, b))
        kids = tuple(build(u, v) for u, v in bounds)
        return Weighted(1, j, Interval(idx[a], idx[b]), kids)

    return NormResult(best[(0, s - 1)][0], build(0, s - 1), J)


def mt_norm_oracle(x: FinVector, sched: ParameterSchedule, depth_cap: int, budget: int = 5_000_000) -> Fraction:
    """Brute-force maximum of ``|f(x)|`` over trees of depth ``<= depth_cap``.

    Children of a node may be any increasing sequence of nonempty subsets of
    the parent's coordinates (gaps allowed), with at most ``n_j`` children.
    Exact once ``depth_cap >= |supp x|``.
    """
    if not x:
        return Fraction(0)
    vals = [abs(a) for _, a in x.items()]
    s = len(vals)
    if s > 12:
        raise ResourceError(f"oracle limited to 12 support points, got {s}")
    ratio = norm_one(x) / norm_infty(x)
    js = []
    j = 1
    while True:
        js.append((j, Fraction(1, sched.m(j)), sched.n(j)))
        if sched.m(j) > ratio:
            break
        j += 1
    counter = [0]

    def tick() -> None:
        counter[0] += 1
        if counter[0] > budget:
            raise ResourceError("oracle budget exhausted")

    @lru_cache(maxsize=None)
    def best(mask: int, depth: int) -> Fraction:
        v = max(vals[p] for p in range(s) if mask >> p & 1)
        if depth == 0 or mask & (mask - 1) == 0:
            return v
        for _, w, nj in js:
            v = max(v, w * chain(mask, depth - 1, nj))
        return v

    @lru_cache(maxsize=None)
    def chain(mask: int, depth: int, k: int) -> Fraction:
        # best sum over block sequences of at most k nonempty submasks
        top = Fraction(0)
        sub = mask
        while sub:
            tick()
            hb = sub.bit_length()
            rest = mask & ~((1 << hb) - 1)
            v = best(sub, depth)
            if k > 1 and rest:
                v += chain(rest, depth, k - 1)
            if v > top:
                top = v
            sub = (sub - 1) & mask
        return top

    return best((1 << s) - 1, depth_cap)
