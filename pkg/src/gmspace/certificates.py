"""Tree-analysis certificates: the proof objects behind every norm lower bound."""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from .schedule import ParameterSchedule
from .vectors import FinVector, Interval, is_block, pair, restrict, vsum

REGULAR = "regular"
R_SPECIAL = "r_special"
LAMBDA_SPECIAL = "lambda_special"
TAGS = (REGULAR, R_SPECIAL, LAMBDA_SPECIAL)


class CertificateError(ValueError):
    """A certificate failed structural validation; ``path`` names the node."""

    def __init__(self, message: str, path: str = "root"):
        super().__init__(f"{message} at node {path}")
        self.path = path


@dataclass(frozen=True)
class Terminal:
    sign: int
    i: int

    @property
    def depth(self) -> int:
        return 0


@dataclass(frozen=True)
class Weighted:
    """``sign * m_j^{-1} * E(sum of children)``.

    ``tag`` is one of :data:`TAGS`; special nodes also carry the power ``k``
    (R-power for r_special, lift power for lambda_special) and the id of the
    special sequence they come from.
    """

    sign: int
    j: int
    E: Interval
    children: Tuple["Certificate", ...]
    tag: str = REGULAR
    k: int = 0
    seq: Optional[str] = None

    @property
    def depth(self) -> int:
        return 1 + max((c.depth for c in self.children), default=0)

    @property
    def special(self) -> bool:
        return self.tag != REGULAR


Certificate = Union[Terminal, Weighted]


def flatten(c: Certificate, sched: ParameterSchedule) -> FinVector:
    """The functional a certificate denotes; restrictions are applied top-down."""
    if isinstance(c, Terminal):
        return FinVector.unit(c.i, c.sign)
    inner = restrict(vsum(flatten(ch, sched) for ch in c.children), c.E)
    return inner.scale(Fraction(c.sign, sched.m(c.j)))


def verify_certificate_structure(c: Certificate, sched: ParameterSchedule) -> Tuple[bool, List[str]]:
    """Check signs, arity, leaf shape and blockness at every node."""
    problems: List[str] = []
    _verify(c, sched, "root", problems)
    return (not problems, problems)


def _verify(c: Certificate, sched: ParameterSchedule, path: str, out: List[str]) -> None:
    if c.sign not in (1, -1):
        out.append(f"sign: {c.sign!r} at node {path}")
    if isinstance(c, Terminal):
        if not isinstance(c.i, int) or c.i < 1:
            out.append(f"leaf index: {c.i!r} at node {path}")
        return
    if not isinstance(c, Weighted):
        out.append(f"node type: {type(c).__name__} at node {path}")
        return
    if c.tag not in TAGS:
        out.append(f"tag: {c.tag!r} at node {path}")
    if c.j < 1:
        out.append(f"weight index: {c.j} at node {path}")
        return
    if not c.children:
        out.append(f"empty: weighted node without children at node {path}")
    if not sched.allows_arity(c.j, len(c.children)):
        out.append(f"arity: {len(c.children)} children exceed n_{c.j}={sched.n(c.j)} at node {path}")
    ok_children = True
    for idx, ch in enumerate(c.children):
        before = len(out)
        _verify(ch, sched, f"{path}.{idx}", out)
        ok_children = ok_children and len(out) == before
    if ok_children and c.children:
        parts = [restrict(flatten(ch, sched), c.E) for ch in c.children]
        if not is_block(parts):
            out.append(f"blockness: children overlap at node {path}")


def evaluate_certificate(c: Certificate, x: FinVector, sched: ParameterSchedule) -> Fraction:
    ok, problems = verify_certificate_structure(c, sched)
    if not ok:
        first = problems[0]
        raise CertificateError(first.rsplit(" at node ", 1)[0], first.rsplit(" at node ", 1)[-1])
    return pair(flatten(c, sched), x)


def restrict_certificate(c: Certificate, E: Interval) -> Optional[Certificate]:
    """Push a restriction into the root; ``None`` when nothing survives."""
    if isinstance(c, Terminal):
        return c if c.i in E else None
    F = c.E.intersect(E)
    if F is None:
        return None
    return Weighted(c.sign, c.j, F, c.children, c.tag, c.k, c.seq)


def negate(c: Certificate) -> Certificate:
    if isinstance(c, Terminal):
        return Terminal(-c.sign, c.i)
    return Weighted(-c.sign, c.j, c.E, c.children, c.tag, c.k, c.seq)


def leaf_depths(c: Certificate, d: int = 0):
    if isinstance(c, Terminal):
        yield d
    else:
        for ch in c.children:
            yield from leaf_depths(ch, d + 1)


# -- serialization -----------------------------------------------------------

def _tag_text(c: Weighted) -> str:
    return REGULAR if c.tag == REGULAR else f"{c.tag}({c.k})"


def to_obj(c: Certificate) -> dict:
    if isinstance(c, Terminal):
        return {"kind": "terminal", "sign": c.sign, "i": c.i}
    obj = {
        "kind": "weighted",
        "sign": c.sign,
        "j": c.j,
        "tag": _tag_text(c),
        "E": c.E.to_list(),
        "children": [to_obj(ch) for ch in c.children],
    }
    if c.seq is not None:
        obj["seq"] = c.seq
    return obj


def from_obj(obj: dict) -> Certificate:
    kind = obj.get("kind")
    if kind == "terminal":
        return Terminal(int(obj["sign"]), int(obj["i"]))
    if kind != "weighted":
        raise CertificateError(f"unknown node kind {kind!r}")
    tag_text = obj.get("tag", REGULAR)
    if tag_text == REGULAR:
        tag, k = REGULAR, 0
    else:
        name, _, rest = tag_text.partition("(")
        if name not in TAGS or not rest.endswith(")"):
            raise CertificateError(f"unknown tag {tag_text!r}")
        tag, k = name, int(rest[:-1])
    lo, hi = obj["E"]
    return Weighted(
        int(obj["sign"]),
        int(obj["j"]),
        Interval(int(lo), int(hi)),
        tuple(from_obj(ch) for ch in obj["children"]),
        tag,
        k,
        obj.get("seq"),
    )


def dumps(c: Certificate) -> str:
    return json.dumps(to_obj(c), sort_keys=True, separators=(",", ":"))


def loads(text: str) -> Certificate:
    return from_obj(json.loads(text))
