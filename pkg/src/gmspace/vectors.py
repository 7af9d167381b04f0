"""Finitely supported rational sequences and integer intervals.

Vectors and functionals share one representation; which role a value plays is
decided by the caller.  Coordinates are 1-based.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Tuple, Union

Number = Union[int, Fraction]


@dataclass(frozen=True, order=True)
class Interval:
    """Closed integer interval ``[lo, hi]`` with ``1 <= lo <= hi``."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo < 1 or self.hi < self.lo:
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    def __contains__(self, i: object) -> bool:
        return isinstance(i, int) and self.lo <= i <= self.hi

    def scale(self, k: int) -> "Interval":
        return Interval(k * self.lo, k * self.hi)

    def intersect(self, other: "Interval") -> Optional["Interval"]:
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return Interval(lo, hi) if lo <= hi else None

    def to_list(self) -> list:
        return [self.lo, self.hi]

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


class FinVector:
    """Immutable finitely supported sequence of exact rationals.

    Zero coordinates are never stored, so ``support`` is the key set.
    """

    __slots__ = ("_items", "_map", "_hash")

    def __init__(self, coords: Union[Mapping[int, Number], Iterable[Tuple[int, Number]], None] = None):
        if coords is None:
            pairs: Iterable = ()
        elif isinstance(coords, Mapping):
            pairs = coords.items()
        else:
            pairs = coords
        acc: dict = {}
        for i, a in pairs:
            if not isinstance(i, int) or isinstance(i, bool) or i < 1:
                raise ValueError(f"coordinate index must be a positive integer, got {i!r}")
            acc[i] = acc.get(i, 0) + Fraction(a)
        self._map = {i: a for i, a in acc.items() if a != 0}
        self._items = tuple(sorted(self._map.items()))
        self._hash = hash(self._items)

    @classmethod
    def unit(cls, i: int, a: Number = 1) -> "FinVector":
        return cls({i: a})

    @classmethod
    def zero(cls) -> "FinVector":
        return cls()

    # mapping-ish access
    def __getitem__(self, i: int) -> Fraction:
        return self._map.get(i, Fraction(0))

    def items(self) -> Tuple[Tuple[int, Fraction], ...]:
        return self._items

    def __iter__(self) -> Iterator[Tuple[int, Fraction]]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __bool__(self) -> bool:
        return bool(self._items)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FinVector) and self._items == other._items

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"FinVector({format_vector(self)!r})"

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(i for i, _ in self._items)

    def range(self) -> Optional[Interval]:
        if not self._items:
            return None
        return Interval(self._items[0][0], self._items[-1][0])

    def min_supp(self) -> int:
        return self._items[0][0]

    def max_supp(self) -> int:
        return self._items[-1][0]

    # linear structure
    def __add__(self, other: "FinVector") -> "FinVector":
        return FinVector(list(self._items) + list(other._items))

    def __neg__(self) -> "FinVector":
        return FinVector({i: -a for i, a in self._items})

    def __sub__(self, other: "FinVector") -> "FinVector":
        return self + (-other)

    def scale(self, c: Number) -> "FinVector":
        c = Fraction(c)
        return FinVector({i: c * a for i, a in self._items})

    __rmul__ = scale

    def map_indices(self, fn) -> "FinVector":
        return FinVector([(fn(i), a) for i, a in self._items])


def vsum(vectors: Iterable[FinVector]) -> FinVector:
    pairs = []
    for v in vectors:
        pairs.extend(v.items())
    return FinVector(pairs)


def restrict(v: FinVector, E: Optional[Interval]) -> FinVector:
    """Keep the coordinates of ``v`` inside ``E`` (``None`` means the empty set)."""
    if E is None:
        return FinVector()
    return FinVector([(i, a) for i, a in v.items() if E.lo <= i <= E.hi])


def pair(f: FinVector, x: FinVector) -> Fraction:
    if len(f) > len(x):
        f, x = x, f
    return sum((a * x[i] for i, a in f.items()), Fraction(0))


def norm_one(x: FinVector) -> Fraction:
    return sum((abs(a) for _, a in x.items()), Fraction(0))


def norm_infty(x: FinVector) -> Fraction:
    return max((abs(a) for _, a in x.items()), default=Fraction(0))


def is_block(vectors: Iterable[FinVector]) -> bool:
    """True iff the nonzero members have strictly increasing supports (zeros are skipped)."""
    last = 0
    for v in vectors:
        if not v:
            continue
        if v.min_supp() <= last:
            return False
        last = v.max_supp()
    return True


def parse_vector(text: str) -> FinVector:
    """Parse ``"i:num/den,..."``; an empty string is the zero vector."""
    text = text.strip()
    if not text:
        return FinVector()
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        idx, sep, val = chunk.partition(":")
        if not sep:
            raise ValueError(f"expected 'index:value', got {chunk!r}")
        pairs.append((int(idx), Fraction(val.strip())))
    return FinVector(pairs)


def format_rational(a: Fraction) -> str:
    return f"{a.numerator}/{a.denominator}"


def show_rational(a: Fraction) -> str:
    """Human form: integers without a denominator."""
    return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text)


def format_vector(v: FinVector) -> str:
    return ",".join(f"{i}:{format_rational(a)}" for i, a in v.items())
