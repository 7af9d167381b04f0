"""Canonical keys for functional sequences and the persistent sigma coding."""
from __future__ import annotations

import hashlib
import math
from collections import OrderedDict
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence, Union

from filelock import FileLock

from .schedule import CONFORMING, COMPACT
from .vectors import FinVector, is_block, norm_infty, vsum


def canonical_serialize(seq: Sequence[FinVector]) -> bytes:
    """Length-prefixed encoding of a functional sequence, independent of how it was built.

    ``[e_1^*]`` encodes as ``b"S1;F1:1:1/1;"``: ``S<count>;`` then, per
    functional, ``F<support size>:`` followed by ``index:num/den`` entries in
    increasing index order and a closing ``;``.
    """
    parts = [f"S{len(seq)};"]
    for f in seq:
        body = ",".join(f"{i}:{a.numerator}/{a.denominator}" for i, a in f.items())
        parts.append(f"F{len(f)}:{body};")
    return "".join(parts).encode("ascii")


def parse_serialization(data: bytes) -> list:
    text = data.decode("ascii")
    head, _, rest = text.partition(";")
    count = int(head[1:])
    out = []
    for _ in range(count):
        chunk, _, rest = rest.partition(";")
        size, _, body = chunk[1:].partition(":")
        pairs = []
        if body:
            for entry in body.split(","):
                i, _, val = entry.partition(":")
                pairs.append((int(i), Fraction(val)))
        if len(pairs) != int(size):
            raise ValueError("corrupt serialization")
        out.append(FinVector(pairs))
    return out


class SigmaError(ValueError):
    pass


class SigmaRegistry:
    """Injective map from block sequences of rational functionals into ``4N``."""

    def __init__(self, mode: str = COMPACT):
        if mode not in (CONFORMING, COMPACT):
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        self.entries: "OrderedDict[bytes, int]" = OrderedDict()
        self._used: set = set()

    def __len__(self) -> int:
        return len(self.entries)

    def lookup(self, seq: Sequence[FinVector]) -> Optional[int]:
        return self.entries.get(canonical_serialize(seq))

    @staticmethod
    def growth_bound(seq: Sequence[FinVector]) -> int:
        """Least integer ``>= 4 max supp(f_d) / |f_1 + ... + f_d|_inf``."""
        ratio = Fraction(4 * seq[-1].max_supp()) / norm_infty(vsum(seq))
        return math.ceil(ratio)

    def assign(self, seq: Sequence[FinVector]) -> int:
        if not seq or any(not f for f in seq):
            raise SigmaError("sigma is defined on sequences of nonzero functionals")
        if not is_block(seq):
            raise SigmaError("sigma needs a block sequence")
        key = canonical_serialize(seq)
        if key in self.entries:
            return self.entries[key]
        floor = self.growth_bound(seq) if self.mode == CONFORMING else 4
        value = 4 * max(1, -(-floor // 4))
        while value in self._used:
            value += 4
        self.entries[key] = value
        self._used.add(value)
        return value

    def is_injective(self) -> bool:
        return len(set(self.entries.values())) == len(self.entries)

    # -- persistence --------------------------------------------------------
    def dumps(self) -> str:
        lines = []
        for key, value in self.entries.items():
            digest = hashlib.sha256(key).hexdigest()
            lines.append(f"{digest}\t{key.decode('ascii')}\t{value}\n")
        return "".join(lines)

    def save(self, path: Union[str, Path]) -> None:
        path = Path(path)
        with FileLock(str(path) + ".lock"):
            tmp = path.with_suffix(path.suffix + ".tmp")
            tmp.write_text(f"# mode\t{self.mode}\n" + self.dumps(), encoding="ascii")
            tmp.replace(path)

    @classmethod
    def loads(cls, text: str, mode: Optional[str] = None) -> "SigmaRegistry":
        reg = cls(mode or COMPACT)
        for line in text.splitlines():
            if not line.strip():
                continue
            if line.startswith("# mode\t"):
                if mode is None:
                    reg.mode = line.split("\t", 1)[1].strip()
                continue
            digest, ser, value = line.split("\t")
            key = ser.encode("ascii")
            if hashlib.sha256(key).hexdigest() != digest:
                raise SigmaError(f"hash mismatch for registry entry {ser[:40]}...")
            v = int(value)
            if v in reg._used or v % 4:
                raise SigmaError(f"registry entry {v} breaks injectivity or 4N")
            reg.entries[key] = v
            reg._used.add(v)
        return reg

    @classmethod
    def load(cls, path: Union[str, Path], mode: Optional[str] = None) -> "SigmaRegistry":
        path = Path(path)
        if not path.exists():
            return cls(mode or COMPACT)
        with FileLock(str(path) + ".lock"):
            return cls.loads(path.read_text(encoding="ascii"), mode)
