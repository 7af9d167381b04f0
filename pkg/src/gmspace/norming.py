"""Special sequences and the inductive norming set ``K`` at finite caps.

The context never stores ``K`` itself.  Membership is decided on demand:
``+-e_i^*`` are terminal, regular members are found by splitting ``m_w f``
into consecutive support runs that are members one generation down, and
special members are matched against the functional families generated by the
registered special sequences (``R^k`` images and canonical ``Lambda^k``
lifts, any sign, any interval restriction).
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .certificates import (
    LAMBDA_SPECIAL,
    R_SPECIAL,
    REGULAR,
    Certificate,
    Terminal,
    Weighted,
    flatten,
    verify_certificate_structure,
)
from .registry import SigmaRegistry, canonical_serialize
from .schedule import CONFORMING, ParameterSchedule
from .spread import apply_R, apply_S, lambda_member, r_certificate
from .vectors import FinVector, Interval, is_block, restrict, vsum


class CapacityError(RuntimeError):
    """A construction needs more than the context's caps allow."""


class ConformingInfeasible(CapacityError):
    """The growth conditions of the conforming schedule cannot be met inside the caps; use compact mode."""


@dataclass(frozen=True)
class Caps:
    generation: int = 3
    support: int = 16
    weight_index: int = 8

    def __post_init__(self) -> None:
        if self.generation < 0 or self.support < 1 or self.weight_index < 1:
            raise ValueError("caps must be positive")


@dataclass
class SpecialSequence:
    id: str
    j: int
    members: Tuple[FinVector, ...]
    weights: Tuple[int, ...]
    ks: Tuple[int, ...]
    certificates: Tuple[Certificate, ...] = ()
    generation: int = 0
    kind: str = "j_special"
    model: Optional[str] = None
    model_k: int = 0

    @property
    def weight_index(self) -> int:
        return 2 * self.j - 1

    @property
    def d(self) -> int:
        return len(self.members) // 2


@dataclass(frozen=True)
class FamilyMember:
    """One unrestricted special functional ``m^{-1} R^k(sum)`` or ``m^{-1} sum Lambda^k``."""

    seq: str
    tag: str
    k: int
    weight_index: int
    functional: FinVector
    generation: int


@dataclass
class Record:
    functional: FinVector
    weight: int  # 0 for terminals and planted members without a weight
    generation: int
    formation: str


@dataclass
class CheckReport:
    name: str
    passed: bool
    checked: int
    violations: List[str] = field(default_factory=list)
    caveats: List[str] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name}: {status} ({self.checked} checked, {len(self.violations)} violations)"


def lift_certificate_canonical(c: Certificate, k: int = 1) -> Certificate:
    """Certificate of ``S^k`` applied to the functional (pure index doubling)."""
    if k == 0:
        return c
    f = 1 << k
    if isinstance(c, Terminal):
        return Terminal(c.sign, f * c.i)
    if c.tag == R_SPECIAL:
        raise ValueError("S does not map R-special nodes to R-special nodes; lift is undefined")
    return Weighted(c.sign, c.j, c.E.scale(f), tuple(lift_certificate_canonical(ch, k) for ch in c.children),
                    c.tag, c.k + k if c.tag == LAMBDA_SPECIAL else c.k, c.seq)


class KContext:
    def __init__(self, schedule: ParameterSchedule, registry: Optional[SigmaRegistry] = None,
                 caps: Caps = Caps()):
        self.schedule = schedule
        self.registry = registry if registry is not None else SigmaRegistry(schedule.mode)
        self.caps = caps
        self.sequences: Dict[str, SpecialSequence] = {}
        self.planted: List[Tuple[FinVector, int]] = []
        self.records: List[Record] = []
        self.exhaustive = False
        self.caveats: List[str] = []
        self._memo: Dict[tuple, Optional[Certificate]] = {}
        self._cursor = 1

    @property
    def mode(self) -> str:
        return self.schedule.mode

    def regular_weights(self) -> List[int]:
        return list(range(2, self.caps.weight_index + 1, 2))

    def _reset_memo(self) -> None:
        self._memo.clear()

    def next_free(self) -> int:
        return self._cursor

    def reserve(self, upto: int) -> None:
        self._cursor = max(self._cursor, upto + 1)

    # -- special families ---------------------------------------------------
    def base_sequences(self) -> List[SpecialSequence]:
        return [s for s in self.sequences.values() if s.kind == "j_special"]

    def family(self, lo: int = 1, hi: Optional[int] = None, gen: Optional[int] = None) -> Iterator[FamilyMember]:
        """Special functionals whose range meets ``[lo, hi]``, in a fixed order."""
        for seq in self.base_sequences():
            if gen is not None and seq.generation + 1 > gen:
                continue
            w = Fraction(1, self.schedule.m(seq.weight_index))
            total = vsum(seq.members).scale(w)
            k = 0
            while True:
                phi = apply_R(total, k)
                if not phi:
                    break
                if hi is None or (phi.min_supp() <= hi and phi.max_supp() >= lo):
                    yield FamilyMember(seq.id, R_SPECIAL, k, seq.weight_index, phi, seq.generation + 1)
                k += 1
            k = 1
            while hi is not None and (total.min_supp() << k) <= hi:
                phi = apply_S(total, k)
                if phi.max_supp() >= lo:
                    yield FamilyMember(seq.id, LAMBDA_SPECIAL, k, seq.weight_index, phi, seq.generation + 1)
                k += 1

    def family_member(self, seq_id: str, tag: str, k: int) -> FamilyMember:
        seq = self.sequences[seq_id]
        w = Fraction(1, self.schedule.m(seq.weight_index))
        total = vsum(seq.members).scale(w)
        phi = apply_R(total, k) if tag == R_SPECIAL else apply_S(total, k)
        return FamilyMember(seq_id, tag, k, seq.weight_index, phi, seq.generation + 1)

    def family_children(self, seq_id: str, tag: str, k: int) -> Tuple[Certificate, ...]:
        seq = self.sequences[seq_id]
        if tag == R_SPECIAL:
            kids = (r_certificate(c, k) for c in seq.certificates)
            return tuple(c for c in kids if c is not None)
        return tuple(lift_certificate_canonical(c, k) for c in seq.certificates)

    def special_certificate(self, fm: FamilyMember, sign: int, E: Interval) -> Certificate:
        return Weighted(sign, fm.weight_index, E, self.family_children(fm.seq, fm.tag, fm.k), fm.tag, fm.k, fm.seq)

    # -- membership -----------------------------------------------------------
    def analysis(self, f: FinVector, gen: Optional[int] = None, weight: Optional[int] = None,
                 plain: bool = False) -> Optional[Certificate]:
        """A tree-analysis of ``f`` inside ``K_gen`` (top weight index ``weight`` if given).

        ``plain`` restricts the search to trees without special nodes.
        """
        gen = self.caps.generation if gen is None else gen
        if not f:
            return None
        key = (f, gen, weight, plain)
        if key in self._memo:
            return self._memo[key]
        cert = self._analysis(f, gen, weight, plain)
        self._memo[key] = cert
        return cert

    def _analysis(self, f: FinVector, gen: int, weight: Optional[int], plain: bool) -> Optional[Certificate]:
        items = f.items()
        if weight is None and len(items) == 1 and abs(items[0][1]) == 1:
            return Terminal(1 if items[0][1] > 0 else -1, items[0][0])
        if gen == 0:
            return None
        if gen > 1:
            below = self.analysis(f, gen - 1, weight, plain)
            if below is not None:
                return below
        E = f.range()
        for fm in ([] if plain else self.family(E.lo, E.hi, gen)):
            if weight is not None and fm.weight_index != weight:
                continue
            piece = restrict(fm.functional, E)
            if piece == f:
                return self.special_certificate(fm, 1, E)
            if piece == -f:
                return self.special_certificate(fm, -1, E)
        for w in self.regular_weights():
            if weight is not None and w != weight:
                continue
            cert = self._regular(f, gen, w, plain)
            if cert is not None:
                return cert
        return None

    def _regular(self, f: FinVector, gen: int, w: int, plain: bool) -> Optional[Certificate]:
        g = f.scale(self.schedule.m(w))
        idx = g.support
        s = len(idx)
        # reach[q]: fewest member pieces covering support positions [0, q)
        reach: List[Optional[Tuple[int, int]]] = [None] * (s + 1)
        reach[0] = (0, -1)
        for q in range(1, s + 1):
            for p in range(q):
                if reach[p] is None:
                    continue
                if reach[q] is not None and reach[p][0] + 1 >= reach[q][0]:
                    continue
                piece = restrict(g, Interval(idx[p], idx[q - 1]))
                if self.analysis(piece, gen - 1, None, plain) is not None:
                    reach[q] = (reach[p][0] + 1, p)
        if reach[s] is None or not self.schedule.allows_arity(w, reach[s][0]):
            return None
        bounds = []
        q = s
        while q > 0:
            p = reach[q][1]
            bounds.append((p, q))
            q = p
        bounds.reverse()
        kids = tuple(self.analysis(restrict(g, Interval(idx[p], idx[q - 1])), gen - 1, None, plain) for p, q in bounds)
        return Weighted(1, w, f.range(), kids)

    def contains(self, f: FinVector, gen: Optional[int] = None, weight: Optional[int] = None) -> bool:
        if any(f == p and (weight is None or weight == wp) for p, wp in self.planted):
            return True
        return self.analysis(f, gen, weight) is not None

    def generation_of(self, f: FinVector, weight: Optional[int] = None, plain: bool = False) -> Optional[int]:
        for g in range(0, self.caps.generation + 1):
            if self.analysis(f, g, weight, plain) is not None:
                return g
        return None

    def plant(self, f: FinVector, weight: int = 0) -> None:
        """Test hook: declare ``f`` a member without any formation behind it."""
        self.planted.append((f, weight))
        self.records.append(Record(f, weight, 1, "planted"))

    # -- certificate semantics --------------------------------------------------
    def validate_certificate(self, c: Certificate) -> List[str]:
        ok, problems = verify_certificate_structure(c, self.schedule)
        if not ok:
            return problems
        out: List[str] = []
        self._validate(c, "root", out)
        return out

    def _validate(self, c: Certificate, path: str, out: List[str]) -> None:
        if isinstance(c, Terminal):
            return
        if c.tag == REGULAR:
            if c.j % 2 or c.j > self.caps.weight_index:
                out.append(f"regular weight index {c.j} not an allowed even index at node {path}")
        else:
            if c.seq not in self.sequences:
                out.append(f"unknown special sequence {c.seq!r} at node {path}")
                return
            fm = self.family_member(c.seq, c.tag, c.k)
            if fm.weight_index != c.j:
                out.append(f"special weight index {c.j} != {fm.weight_index} at node {path}")
            expected = restrict(fm.functional, c.E).scale(c.sign)
            if flatten(c, self.schedule) != expected:
                out.append(f"special node does not match its family functional at node {path}")
        for i, ch in enumerate(c.children):
            self._validate(ch, f"{path}.{i}", out)

    # -- lifting (the K subset R(K) construction) ------------------------------
    def lift_certificate(self, c: Certificate) -> Certificate:
        """A member ``h`` with ``R h = f`` and ``range(h) = 2 range(f)``, built per formation."""
        if isinstance(c, Terminal):
            return Terminal(c.sign, 2 * c.i)
        f = flatten(c, self.schedule)
        if not f:
            raise CapacityError("cannot lift a certificate of the zero functional")
        E = f.range().scale(2)
        if c.tag == REGULAR:
            return Weighted(c.sign, c.j, E, tuple(self.lift_certificate(ch) for ch in c.children))
        if c.seq not in self.sequences:
            raise CapacityError(f"special node refers to unknown sequence {c.seq!r}")
        if c.tag == R_SPECIAL and c.k >= 1:
            fm = self.family_member(c.seq, R_SPECIAL, c.k - 1)
        else:
            k = c.k + 1 if c.tag == LAMBDA_SPECIAL else 1
            fm = self.family_member(c.seq, LAMBDA_SPECIAL, k)
        return self.special_certificate(fm, c.sign, E)

    # -- sequences --------------------------------------------------------------
    def register(self, seq: SpecialSequence, check: bool = True) -> SpecialSequence:
        if seq.id in self.sequences:
            raise ValueError(f"sequence id {seq.id!r} already registered")
        if check:
            certs = []
            gens = []
            # members need special-free analyses so that canonical lifts stay valid
            for f, w in zip(seq.members, seq.weights):
                g = self.generation_of(f, w, plain=True)
                if g is None:
                    raise CapacityError(f"member {canonical_serialize([f])[:60]!r} with weight {w} "
                                        "has no special-free analysis within caps")
                certs.append(self.analysis(f, g, w, plain=True))
                gens.append(g)
            seq.certificates = tuple(certs)
            seq.generation = max(gens)
        self.sequences[seq.id] = seq
        self.reserve(max(f.max_supp() for f in seq.members))
        self._reset_memo()
        return seq

    def fresh_id(self, prefix: str) -> str:
        for n in itertools.count(1):
            sid = f"{prefix}{n}"
            if sid not in self.sequences:
                return sid
        raise AssertionError  # pragma: no cover

    # -- corpus -----------------------------------------------------------------
    def corpus(self) -> List[Record]:
        return self.records


# ---------------------------------------------------------------------------
# special sequence builders and verifiers

def smallest_seed_index(j: int, sched: ParameterSchedule) -> int:
    """Smallest ``4l - 2`` with ``m_{4l-2} > 9 n_{2j-1}^2`` (compact mode: ``l = 1``)."""
    if sched.mode != CONFORMING:
        return 2
    bound = 9 * sched.n(2 * j - 1) ** 2
    l = 1
    while sched.m(4 * l - 2) <= bound:
        l += 1
    return 4 * l - 2


def minimal_lift_power(f: FinVector) -> int:
    k = 1
    while (f.min_supp() << k) <= f.max_supp():
        k += 1
    return k


def build_j_special(ctx: KContext, j: int, length: int, seed_index: Optional[int] = None,
                    start: Optional[int] = None, bodies: Optional[Sequence[FinVector]] = None,
                    seq_id: Optional[str] = None) -> SpecialSequence:
    """Build and register a j-special sequence ``f_1 < ... < f_length``.

    Odd members are regular functionals ``m_w^{-1} body``; by default the body
    is ``e_c^* + e_{c+1}^*`` at the next free coordinate ``c``.  Even members
    are the smallest canonical lifts that stay to the right.
    """
    sched = ctx.schedule
    if length < 2 or length % 2:
        raise ValueError("special sequences have even positive length")
    if not sched.allows_arity(2 * j - 1, length):
        raise CapacityError(f"length {length} exceeds n_{2 * j - 1}")
    d = length // 2
    seed = smallest_seed_index(j, sched) if seed_index is None else seed_index
    if seed % 4 != 2:
        raise ValueError(f"seed weight index must be 2 mod 4, got {seed}")
    if seed > ctx.caps.weight_index:
        msg = f"seed weight index {seed} exceeds weight cap {ctx.caps.weight_index}"
        if sched.mode == CONFORMING:
            raise ConformingInfeasible(msg + "; use compact mode")
        raise CapacityError(msg)
    cursor = ctx.next_free() if start is None else start
    members: List[FinVector] = []
    weights: List[int] = []
    ks: List[int] = []
    w = seed
    for i in range(d):
        if i > 0:
            w = ctx.registry.assign(members)
            if w > ctx.caps.weight_index:
                shown = str(w) if w < 10 ** 12 else f"with {len(str(w))} digits"
                msg = f"sigma assigned weight index {shown} beyond weight cap {ctx.caps.weight_index}"
                if sched.mode == CONFORMING:
                    raise ConformingInfeasible(msg)
                raise CapacityError(msg)
        if bodies is not None:
            body = bodies[i]
        else:
            body = FinVector({cursor: 1, cursor + 1: 1})
        odd = body.scale(Fraction(1, sched.m(w)))
        if members and odd.min_supp() <= members[-1].max_supp():
            raise ValueError("odd member body overlaps the previous member")
        k = minimal_lift_power(odd)
        even = apply_S(odd, k)
        members += [odd, even]
        weights += [w, w]
        ks.append(k)
        cursor = even.max_supp() + 1
    seq = SpecialSequence(seq_id or ctx.fresh_id(f"J{j}-"), j, tuple(members), tuple(weights), tuple(ks))
    ctx.register(seq)
    problems = verify_special(seq, ctx)
    hard = [p for p in problems if not p.startswith("caveat")]
    if hard:
        del ctx.sequences[seq.id]
        raise ValueError("; ".join(hard))
    return seq


def verify_special(seq: SpecialSequence, ctx: KContext) -> List[str]:
    """Problems with (S1)-(S3) or membership; entries starting with ``caveat`` are mode notes."""
    sched = ctx.schedule
    out: List[str] = []
    f = seq.members
    if len(f) % 2 or not f:
        out.append("length is not even")
        return out
    if not sched.allows_arity(seq.weight_index, len(f)):
        out.append(f"length {len(f)} exceeds n_{seq.weight_index}")
    if not is_block(f) or any(not v for v in f):
        out.append("members are not a block sequence of nonzero functionals")
    if seq.kind == "lambda_special":
        return out + _verify_lambda(seq, ctx)
    w0 = seq.weights[0]
    if w0 % 4 != 2:
        out.append(f"(S1) seed weight index {w0} is not of the form 4l-2")
    elif sched.m(w0) <= 9 * sched.n(seq.weight_index) ** 2:
        msg = f"(S1) m_{w0}={sched.m(w0)} <= 9 n_{seq.weight_index}^2"
        out.append(("caveat: " if sched.mode != CONFORMING else "") + msg)
    for i in range(1, seq.d):
        expect = ctx.registry.lookup(f[: 2 * i])
        if expect is None or seq.weights[2 * i] != expect:
            out.append(f"(S2) weight of member {2 * i + 1} is not m_sigma")
    for i in range(seq.d):
        if not lambda_member(f[2 * i + 1], f[2 * i], seq.ks[i]) or seq.ks[i] < 1:
            out.append(f"(S3) member {2 * i + 2} is not in Lambda^{seq.ks[i]} of member {2 * i + 1}")
        if seq.weights[2 * i + 1] != seq.weights[2 * i]:
            out.append(f"(S3) weights of members {2 * i + 1}, {2 * i + 2} differ")
    for n, (v, w) in enumerate(zip(f, seq.weights), 1):
        if not ctx.contains(v, weight=w):
            out.append(f"member {n} is not in K with weight index {w}")
    return out


def build_lambda_special(model: SpecialSequence, k: int, ctx: KContext) -> SpecialSequence:
    """Canonical k-fold lift of a registered j-special sequence."""
    if model.id not in ctx.sequences:
        raise KeyError(f"model {model.id!r} is not registered")
    if k == 0:
        return model
    members = tuple(apply_S(f, k) for f in model.members)
    seq = SpecialSequence(f"{model.id}^L{k}", model.j, members, model.weights, model.ks,
                          tuple(lift_certificate_canonical(c, k) for c in model.certificates),
                          model.generation, "lambda_special", model.id, k)
    if seq.id not in ctx.sequences:
        ctx.sequences[seq.id] = seq
    problems = verify_special(seq, ctx)
    if problems:
        raise ValueError("; ".join(problems))
    return seq


def _verify_lambda(seq: SpecialSequence, ctx: KContext) -> List[str]:
    out = []
    model = ctx.sequences.get(seq.model or "")
    if model is None:
        return ["model sequence not registered"]
    k = seq.model_k
    if len(model.members) != len(seq.members):
        return ["length differs from model"]
    for i, (g, f) in enumerate(zip(seq.members, model.members)):
        if seq.weights[i] != model.weights[i]:
            out.append(f"(L1) weight of member {i + 1} differs from model")
        if not lambda_member(g, f, k):
            out.append(f"(L2/L3) member {i + 1} not in Lambda^{k} of the model member")
    for i in range(seq.d):
        if not lambda_member(seq.members[2 * i + 1], seq.members[2 * i], model.ks[i]):
            out.append(f"(L3) member {2 * i + 2} not in Lambda^{model.ks[i]} of member {2 * i + 1}")
    for n, (v, w) in enumerate(zip(seq.members, seq.weights), 1):
        if not ctx.contains(v, weight=w):
            out.append(f"member {n} is not in K with weight index {w}")
    return out


def check_tree_property(ctx: KContext, sequences: Optional[Sequence[SpecialSequence]] = None) -> CheckReport:
    """Weight disjointness after the first disagreement of two special sequences."""
    seqs = list(sequences) if sequences is not None else ctx.base_sequences()
    rep = CheckReport("tree-property", True, 0)
    for F, H in itertools.combinations(seqs, 2):
        for A, B in ((F, H), (H, F)):
            d, a = A.d, B.d
            r = next((i for i in range(1, min(d, a) + 1) if A.members[2 * i - 2] != B.members[2 * i - 2]), None)
            if r is None:
                continue
            pairs = [(s, i) for s in range(2 * r + 1, 2 * a + 1) for i in range(1, 2 * d + 1)]
            pairs += [(s, i) for s in (2 * r - 1, 2 * r) for i in range(2 * r + 1, 2 * d + 1)]
            for s, i in pairs:
                rep.checked += 1
                if A.weights[i - 1] == B.weights[s - 1]:
                    msg = f"{A.id}[{i}] and {B.id}[{s}] share weight index {A.weights[i - 1]}"
                    if ctx.mode == CONFORMING:
                        rep.violations.append(msg)
                    else:
                        rep.caveats.append("compact-mode collision: " + msg)
    rep.passed = not rep.violations
    return rep


# ---------------------------------------------------------------------------
# generating K and checking (K1)-(K3)

def generate_K(schedule: ParameterSchedule, caps: Caps, registry: Optional[SigmaRegistry] = None,
               budget: int = 20_000, sample: int = 300, seed: int = 0,
               ctx: Optional[KContext] = None) -> KContext:
    """Context plus an explicit member list.

    The list is all of ``K`` within the caps when that fits in ``budget``
    records; otherwise it is ``K_0``, every special family member, and a
    seeded sample of random formations, and ``exhaustive`` is False.
    """
    if ctx is None:
        ctx = KContext(schedule, registry, caps)
    ctx.records = []
    ok = _enumerate(ctx, budget)
    ctx.exhaustive = ok
    if not ok:
        ctx.records = []
        _sample(ctx, sample, random.Random(seed))
        ctx.caveats.append(f"explicit K exceeds {budget} records; checks run on a seeded sample")
    return ctx


def _enumerate(ctx: KContext, budget: int) -> bool:
    sched, caps = ctx.schedule, ctx.caps
    seen: Dict[Tuple[FinVector, int], Record] = {}

    def add(f: FinVector, w: int, g: int, how: str) -> bool:
        key = (f, w)
        if key not in seen:
            seen[key] = Record(f, w, g, how)
        return len(seen) <= budget

    for i in range(1, caps.support + 1):
        add(FinVector.unit(i), 0, 0, "terminal")
        add(FinVector.unit(i, -1), 0, 0, "terminal")
    for g in range(1, caps.generation + 1):
        prev = [r.functional for r in seen.values()]
        prev = sorted(set(prev), key=lambda v: (v.min_supp(), v.max_supp(), v.items()))
        for w in ctx.regular_weights():
            scale = Fraction(1, sched.m(w))
            limit = min(sched.n(w), caps.support) if _safe_n(sched, w) else caps.support
            for blocks in _block_sequences(prev, limit):
                if not add(vsum(blocks).scale(scale), w, g, "regular"):
                    return False
        for fm in ctx.family(1, caps.support, g):
            if fm.functional.max_supp() > caps.support and fm.functional.min_supp() > caps.support:
                continue
            sup = [i for i in fm.functional.support if i <= caps.support]
            for a, b in itertools.combinations_with_replacement(sup, 2):
                piece = restrict(fm.functional, Interval(a, b))
                if piece.max_supp() > caps.support:
                    continue
                for sgn in (1, -1):
                    if not add(piece.scale(sgn), fm.weight_index, g, fm.tag):
                        return False
    ctx.records = sorted(seen.values(), key=lambda r: (r.generation, canonical_serialize([r.functional]), r.weight))
    return True


def _safe_n(sched: ParameterSchedule, w: int) -> bool:
    try:
        sched.n(w)
        return True
    except Exception:
        return False


def _block_sequences(members: List[FinVector], limit: int) -> Iterator[List[FinVector]]:
    def rec(start_after: int, chosen: List[FinVector]) -> Iterator[List[FinVector]]:
        if chosen:
            yield list(chosen)
        if len(chosen) == limit:
            return
        for f in members:
            if f.min_supp() > start_after:
                chosen.append(f)
                yield from rec(f.max_supp(), chosen)
                chosen.pop()

    yield from rec(0, [])


def _sample(ctx: KContext, count: int, rng: random.Random) -> None:
    sched, caps = ctx.schedule, ctx.caps
    recs: Dict[Tuple[FinVector, int], Record] = {}
    for i in range(1, caps.support + 1):
        for s in (1, -1):
            recs[(FinVector.unit(i, s), 0)] = Record(FinVector.unit(i, s), 0, 0, "terminal")
    for fm in ctx.family(1, caps.support, caps.generation):
        sup = [i for i in fm.functional.support if i <= caps.support]
        if not sup:
            continue
        for a, b in [(sup[0], sup[-1])] + [tuple(sorted(rng.sample(sup, 2))) for _ in range(2) if len(sup) > 1]:
            piece = restrict(fm.functional, Interval(a, b)).scale(rng.choice((1, -1)))
            recs.setdefault((piece, fm.weight_index), Record(piece, fm.weight_index, fm.generation, fm.tag))
    layers: Dict[int, List[Record]] = {}
    for r in recs.values():
        layers.setdefault(r.generation, []).append(r)
    per_gen = max(1, count // max(1, caps.generation))
    weights = ctx.regular_weights()
    for g in range(1, caps.generation + 1):
        pool = [r for gg in range(g) for r in layers.get(gg, [])]
        pool = [r for r in pool if r.formation != "planted"]
        made: List[Record] = []
        tries = 0
        while len(made) < per_gen and tries < 50 * per_gen:
            tries += 1
            w = rng.choice(weights)
            cap = min(sched.n(w), 6)
            blocks: List[FinVector] = []
            pos = rng.randint(0, 3)
            for _ in range(rng.randint(1, cap)):
                cands = [r.functional for r in pool if r.functional.min_supp() > pos
                         and r.functional.max_supp() <= caps.support]
                if not cands:
                    break
                cands.sort(key=lambda v: v.min_supp())
                f = rng.choice(cands[: max(1, len(cands) // 3)])
                blocks.append(f)
                pos = f.max_supp() + rng.randint(0, 1)
            if not blocks:
                continue
            f = vsum(blocks).scale(Fraction(1, sched.m(w)))
            if rng.random() < 0.3 and len(f) > 1:
                a, b = sorted(rng.sample(list(f.support), 2))
                f = restrict(f, Interval(a, b))
            f = f.scale(rng.choice((1, -1)))
            key = (f, w)
            if key in recs:
                continue
            rec = Record(f, w, g, "regular")
            recs[key] = rec
            made.append(rec)
        layers.setdefault(g, []).extend(made)
    ctx.records = sorted(recs.values(), key=lambda r: (r.generation, canonical_serialize([r.functional]), r.weight))


def _intervals(f: FinVector) -> Iterator[Interval]:
    sup = f.support
    for a in range(len(sup)):
        for b in range(a, len(sup)):
            yield Interval(sup[a], sup[b])


def _fmt(f: FinVector) -> str:
    return canonical_serialize([f]).decode("ascii")


def check_K1(ctx: KContext) -> CheckReport:
    rep = CheckReport("K1", True, 0, caveats=list(ctx.caveats))
    for r in ctx.records:
        rep.checked += 1
        f = r.functional
        if not ctx.contains(-f):
            rep.violations.append(f"not symmetric: {_fmt(f)}")
            continue
        for E in _intervals(f):
            piece = restrict(f, E)
            if not ctx.contains(piece):
                rep.violations.append(f"restriction to {E} missing: {_fmt(f)}")
                break
    rep.passed = not rep.violations
    return rep


def check_K2(ctx: KContext) -> CheckReport:
    rep = CheckReport("K2", True, 0, caveats=list(ctx.caveats))
    for r in ctx.records:
        rep.checked += 1
        f = r.functional
        cert = ctx.analysis(f, weight=r.weight or None)
        if cert is None:
            rep.violations.append(f"no tree-analysis: {_fmt(f)}")
            continue
        if flatten(cert, ctx.schedule) != f:
            rep.violations.append(f"analysis does not reconstruct: {_fmt(f)}")
            continue
        problems = ctx.validate_certificate(cert)
        if problems:
            rep.violations.append(f"invalid analysis ({problems[0]}): {_fmt(f)}")
            continue
        for node in _nodes(cert):
            if not ctx.contains(flatten(node, ctx.schedule)):
                rep.violations.append(f"analysis node outside K: {_fmt(f)}")
                break
    rep.passed = not rep.violations
    return rep


def _nodes(c: Certificate) -> Iterator[Certificate]:
    yield c
    if isinstance(c, Weighted):
        for ch in c.children:
            yield from _nodes(ch)


def check_K3(ctx: KContext) -> CheckReport:
    rep = CheckReport("K3", True, 0, caveats=list(ctx.caveats))
    for r in ctx.records:
        rep.checked += 1
        f = r.functional
        Rf = apply_R(f)
        if Rf and not ctx.contains(Rf):
            rep.violations.append(f"forward: R f not in K for {_fmt(f)}")
        cert = ctx.analysis(f, weight=r.weight or None)
        if cert is None:
            rep.violations.append(f"backward: no formation to lift for {_fmt(f)}")
            continue
        try:
            h = ctx.lift_certificate(cert)
        except CapacityError as exc:
            rep.violations.append(f"backward: {exc} for {_fmt(f)}")
            continue
        hf = flatten(h, ctx.schedule)
        if apply_R(hf) != f:
            rep.violations.append(f"backward: R h != f for {_fmt(f)}")
        elif hf.range() != f.range().scale(2):
            rep.violations.append(f"backward: lift not in Lambda(f) for {_fmt(f)}")
        elif not ctx.contains(hf):
            rep.violations.append(f"backward: lift outside K for {_fmt(f)}")
    rep.passed = not rep.violations
    return rep
