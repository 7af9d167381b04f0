"""Weight/arity schedules ``(m_j)`` and ``(n_j)``."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Tuple

CONFORMING = "conforming"
COMPACT = "compact"

# bit-length above which an n_j is treated as not materialisable
_MAX_BITS = 1 << 20


class ScheduleError(ValueError):
    pass


@dataclass(frozen=True)
class ParameterSchedule:
    """Either the closed-form growth law or a finite table plus extension law.

    Extension laws for compact tables:

    * ``double``: ``m_{j+1} = 2 m_j``, ``n_{j+1} = 2 n_j``
    * ``square``: ``m_{j+1} = m_j + 2``, ``n_{j+1} = m_{j+1}**2 + 2``
    """

    mode: str = COMPACT
    m_table: Tuple[int, ...] = (2, 4, 8)
    n_table: Tuple[int, ...] = (4, 6, 8)
    extension: str = "double"
    name: str = "compact"
    _cache: Dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self) -> None:
        if self.mode not in (CONFORMING, COMPACT):
            raise ScheduleError(f"unknown mode {self.mode!r}")
        if self.mode == COMPACT:
            if not self.m_table or len(self.m_table) != len(self.n_table):
                raise ScheduleError("compact schedule needs equal-length nonempty m and n tables")
            if self.extension not in ("double", "square"):
                raise ScheduleError(f"unknown extension law {self.extension!r}")
            self.validate(len(self.m_table) + 4)

    # -- values -----------------------------------------------------------
    def m(self, j: int) -> int:
        if j < 1:
            raise ScheduleError(f"weight index must be >= 1, got {j}")
        key = ("m", j)
        if key not in self._cache:
            self._cache[key] = self._compute_m(j)
        return self._cache[key]

    def n(self, j: int) -> int:
        if j < 1:
            raise ScheduleError(f"weight index must be >= 1, got {j}")
        key = ("n", j)
        if key not in self._cache:
            self._cache[key] = self._compute_n(j)
        return self._cache[key]

    def _compute_m(self, j: int) -> int:
        if self.mode == CONFORMING:
            e = 5 ** (j - 1)
            if e > _MAX_BITS:
                raise ScheduleError(f"m_{j} = 2^(5^{j - 1}) is not materialisable")
            return 1 << e
        t = len(self.m_table)
        if j <= t:
            return self.m_table[j - 1]
        prev = self.m(j - 1)
        return 2 * prev if self.extension == "double" else prev + 2

    def _compute_n(self, j: int) -> int:
        if self.mode == CONFORMING:
            if j == 1:
                return 4
            prev = self.n(j - 1)
            s = 3 * 5 ** (j - 1)  # log2(m_j^3)
            if s * (5 * prev).bit_length() > _MAX_BITS:
                raise ScheduleError(f"n_{j} is not materialisable")
            return (5 * prev) ** s
        t = len(self.n_table)
        if j <= t:
            return self.n_table[j - 1]
        if self.extension == "double":
            return 2 * self.n(j - 1)
        return self.m(j) ** 2 + 2

    def allows_arity(self, j: int, d: int) -> bool:
        """``d <= n_j``, also when ``n_j`` is too large to write down."""
        try:
            return d <= self.n(j)
        except ScheduleError:
            # such an n_j exceeds 2**(2**20), larger than any arity we can hold
            return True

    def validate(self, upto: int) -> None:
        prev_m = prev_n = 0
        for j in range(1, upto + 1):
            mj, nj = self.m(j), self.n(j)
            if mj % 2 or nj % 2:
                raise ScheduleError(f"m_{j}, n_{j} must be even")
            if mj <= prev_m or nj <= prev_n:
                raise ScheduleError(f"schedule not strictly increasing at j={j}")
            # compact tables may have m_j == n_j
            if mj > nj or (self.mode == CONFORMING and mj == nj):
                raise ScheduleError(f"m_{j}={mj} exceeds n_{j}={nj}")
            prev_m, prev_n = mj, nj
        if self.m(1) < 2:
            raise ScheduleError("m_1 must be at least 2")

    # -- config round trip -------------------------------------------------
    def to_dict(self) -> dict:
        if self.mode == CONFORMING:
            return {"mode": CONFORMING, "name": self.name}
        return {
            "mode": COMPACT,
            "name": self.name,
            "m": list(self.m_table),
            "n": list(self.n_table),
            "extension": self.extension,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ParameterSchedule":
        if "preset" in d:
            return preset(d["preset"])
        if d.get("mode") == CONFORMING:
            return conforming()
        return cls(
            mode=COMPACT,
            m_table=tuple(int(v) for v in d["m"]),
            n_table=tuple(int(v) for v in d["n"]),
            extension=d.get("extension", "double"),
            name=d.get("name", "custom"),
        )


def conforming() -> ParameterSchedule:
    return ParameterSchedule(mode=CONFORMING, m_table=(), n_table=(), name="conforming")


def compact() -> ParameterSchedule:
    return ParameterSchedule()


def desk() -> ParameterSchedule:
    """Compact table where ``n_j > m_j**2`` from ``j = 2`` on, so exact pairs fit at desk scale."""
    return ParameterSchedule(m_table=(2, 4), n_table=(4, 18), extension="square", name="desk")


PRESETS = {"compact": compact, "desk": desk, "conforming": conforming}


def preset(name: str) -> ParameterSchedule:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ScheduleError(f"unknown schedule preset {name!r}") from None
