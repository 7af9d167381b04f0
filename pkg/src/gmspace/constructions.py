"""Executable building blocks of the uncomplementedness argument.

Every builder returns a witness object and every witness has a verifier.
Clauses that quantify over all of ``K`` are checked against the context
(registered special sequences, regular weights up to the weight cap) and say
so in their caveats.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .certificates import R_SPECIAL, Certificate, Terminal, Weighted, evaluate_certificate, flatten, to_obj
from .engine import NormBracket, gm_norm_bracket, gm_norm_lower, weight_profile
from .norming import CapacityError, KContext, SpecialSequence, smallest_seed_index, verify_special
from .schedule import CONFORMING
from .spread import apply_R, apply_S
from .vectors import FinVector, Interval, format_vector, is_block, norm_infty, pair, show_rational, vsum



def unit_basis(start: int = 1) -> "BlockBasis":
    return BlockBasis(start=start)


@dataclass
class BlockBasis:
    """A normalized block family; the unit vector basis unless ``vectors`` is given."""

    vectors: Optional[List[FinVector]] = None
    start: int = 1

    def after(self, lo: int, count: int) -> List[FinVector]:
        """The first ``count`` members with ``min supp >= lo``."""
        if self.vectors is None:
            first = max(lo, self.start)
            return [FinVector.unit(i) for i in range(first, first + count)]
        out = [v for v in self.vectors if v.min_supp() >= lo][:count]
        if len(out) < count:
            raise CapacityError(f"block basis has fewer than {count} vectors past {lo}")
        return out


def norming_certificate(v: FinVector, ctx: KContext, depth: int = 3) -> Tuple[Fraction, Certificate]:
    """Certificate ``f`` with ``f(v) = lower(|v|)``; restricted to ``range(v)``."""
    if len(v) == 1:
        (i, a), = v.items()
        return abs(a), Terminal(1 if a > 0 else -1, i)
    return gm_norm_lower(v, ctx, depth)


# -- l1 averages ------------------------------------------------------------------

@dataclass
class L1AverageWitness:
    x: FinVector
    parts: List[FinVector]
    C: Fraction
    N: int
    bracket: NormBracket
    part_uppers: List[Fraction]
    problems: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems

    def to_dict(self) -> dict:
        return {
            "x": format_vector(self.x),
            "N": self.N,
            "C": show_rational(self.C),
            "bracket": self.bracket.to_dict(),
            "part_uppers": [show_rational(u) for u in self.part_uppers],
            "problems": self.problems,
        }


def verify_l1_average(x: FinVector, parts: Sequence[FinVector], C: Fraction, ctx: KContext,
                      depth: int = 3) -> L1AverageWitness:
    N = len(parts)
    problems = []
    if not is_block(parts):
        problems.append("parts are not a block sequence")
    if vsum(parts).scale(Fraction(1, N)) != x:
        problems.append("x is not the average of its parts")
    br = gm_norm_bracket(x, ctx, depth)
    if br.lower != 1:
        problems.append(f"lower bound of |x| is {br.lower}, not 1")
    ups = [gm_norm_bracket(p, ctx, depth).upper for p in parts]
    for n, u in enumerate(ups, 1):
        if u > C:
            problems.append(f"part {n} has upper bound {u} > C")
    return L1AverageWitness(x, list(parts), Fraction(C), N, br, ups, problems)


def find_l1_average(basis: BlockBasis, N: int, C: Fraction, eps: Fraction, ctx: KContext,
                    depth: int = 3, max_chunk: int = 64, start: int = 1) -> L1AverageWitness:
    """Flat chunks of ``L`` consecutive basis vectors, ``L = 1, 2, ...``.

    The sum of ``N`` chunks is normalised by its certified lower bound; the
    first ``L`` whose chunks pass the upper-bracket test and whose sup norm
    is below ``eps`` wins.
    """
    if N < 1:
        raise ValueError("N must be positive")
    C, eps = Fraction(C), Fraction(eps)
    for L in range(1, max_chunk + 1):
        vecs = basis.after(start, N * L)
        chunks = [vsum(vecs[n * L:(n + 1) * L]) for n in range(N)]
        v = vsum(chunks)
        low = gm_norm_lower(v, ctx, depth)[0]
        if norm_infty(v) / low >= eps:
            continue
        parts = [c.scale(Fraction(N) / low) for c in chunks]
        x = v.scale(1 / low)
        wit = verify_l1_average(x, parts, C, ctx, depth)
        if wit.ok:
            return wit
    raise CapacityError(f"no {C}-l1^{N} average with sup norm < {eps} among chunks up to {max_chunk}")


@dataclass
class ClauseReport:
    name: str
    passed: bool
    rows: List[dict] = field(default_factory=list)
    caveats: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "rows": self.rows, "caveats": self.caveats}


def _context_caveat(ctx: KContext) -> str:
    return (f"checked over weights up to index {ctx.caps.weight_index}, generation {ctx.caps.generation}, "
            f"{len(ctx.base_sequences())} registered special sequences")


def verify_av_est(x: FinVector, j: int, ctx: KContext, depth: int = 3) -> ClauseReport:
    """``|f(x)| <= 3 w(f)`` for weighted ``f`` with ``w(f) > 1/m_j``."""
    sched = ctx.schedule
    rep = ClauseReport("av-est", True, caveats=[_context_caveat(ctx)])
    for w, val in sorted(weight_profile(x, ctx, depth).items()):
        if sched.m(w) >= sched.m(j):
            continue
        bound = Fraction(3, sched.m(w))
        ok = val <= bound
        rep.rows.append({"weight_index": w, "value": show_rational(val), "bound": show_rational(bound), "margin": show_rational(bound - val), "ok": ok})
        rep.passed &= ok
    return rep


# -- strict singularity gap vector -------------------------------------------------

@dataclass
class GapWitness:
    x: FinVector
    certificate: Certificate
    lower: Fraction
    sup: Fraction
    ratio: Fraction

    def to_dict(self) -> dict:
        return {"x": format_vector(self.x), "lower": show_rational(self.lower), "sup": show_rational(self.sup),
                "ratio": show_rational(self.ratio), "certificate": to_obj(self.certificate)}


def _weighted_average(j_w: int, xs: List[FinVector], certs: List[Certificate], ctx: KContext
                      ) -> Tuple[FinVector, Certificate]:
    sched = ctx.schedule
    x = vsum(xs).scale(Fraction(sched.m(j_w), len(xs)))
    E = Interval(xs[0].min_supp(), xs[-1].max_supp())
    return x, Weighted(1, j_w, E, tuple(certs))


def make_ss_witness(j: int, basis: BlockBasis, ctx: KContext, start: int = 1, depth: int = 3) -> GapWitness:
    """``x = m_{2j}/n_{2j} (x_1 + ... + x_{n_{2j}})`` normed by ``m_{2j}^{-1}(f_1 + ... + f_{n_{2j}})``."""
    sched = ctx.schedule
    w = 2 * j
    n = sched.n(w)
    if n < 2:
        raise ValueError("the gap vector needs a block sequence of length at least 2")
    xs, certs = [], []
    for v in basis.after(start, n):
        low, c = norming_certificate(v, ctx, depth)
        xs.append(v.scale(1 / low))
        certs.append(c)
    x, cert = _weighted_average(w, xs, certs, ctx)
    value = evaluate_certificate(cert, x, sched)
    sup = norm_infty(x)
    return GapWitness(x, cert, value, sup, sup / value)


# -- RIS and the basic inequality ---------------------------------------------------

@dataclass
class RISWitness:
    xs: List[FinVector]
    C: Fraction
    eps: Fraction
    js: List[int]
    checkedGeneration: int
    problems: List[str]
    caveats: List[str]
    k_checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.problems

    def to_dict(self) -> dict:
        return {"xs": [format_vector(v) for v in self.xs], "C": show_rational(self.C), "eps": show_rational(self.eps),
                "js": self.js, "checkedGeneration": self.checkedGeneration, "kChecked": self.k_checked,
                "ok": self.ok, "problems": self.problems, "caveats": self.caveats}


def _ris_problems(xs: Sequence[FinVector], C: Fraction, eps: Fraction, js: Sequence[int],
                  ctx: KContext, depth: int, tag: str) -> List[str]:
    sched = ctx.schedule
    out = []
    for i, v in enumerate(xs):
        br = gm_norm_bracket(v, ctx, depth)
        if br.upper > C:
            out.append(f"{tag}(1) |x_{i + 1}| upper bound {br.upper} > C")
        if not norm_infty(v) < eps:
            out.append(f"{tag}(1) |x_{i + 1}|_inf = {norm_infty(v)} >= eps")
        if i + 1 < len(xs) and not Fraction(2 * len(v), sched.m(js[i + 1])) < eps:
            out.append(f"{tag}(2) 2 #supp(x_{i + 1}) / m_j{i + 2} >= eps")
        for w, val in weight_profile(v, ctx, depth).items():
            if sched.m(w) < sched.m(js[i]) and val > C / sched.m(w):
                out.append(f"{tag}(3) weight index {w} gives {val} > C w(f) on x_{i + 1}")
    return out


def verify_ris(xs: Sequence[FinVector], C: Fraction, eps: Fraction, js: Sequence[int], ctx: KContext,
               depth: int = 3, k_cap: int = 0) -> RISWitness:
    C, eps = Fraction(C), Fraction(eps)
    problems = []
    if len(js) != len(xs):
        problems.append("need one weight index per vector")
    elif any(a >= b for a, b in zip(js, js[1:])):
        problems.append("weight indices are not strictly increasing")
    if not is_block(xs):
        problems.append("vectors are not a block sequence")
    if not problems:
        for k in range(k_cap + 1):
            problems += _ris_problems([apply_S(v, k) for v in xs], C, eps, js, ctx, depth,
                                      "" if k == 0 else f"S^{k}: ")
    return RISWitness(list(xs), C, eps, list(js), depth, problems, [_context_caveat(ctx)], k_cap)


def check_basic_inequality(xs: Sequence[FinVector], j: int, C: Fraction, ctx: KContext, depth: int = 3) -> dict:
    """Bracket of ``|n_j^{-1} sum x_i|`` next to the bounds ``2C/m_j`` and ``4C/m_j^2``.

    Only the bracket itself is asserted; the bounds are reported.
    """
    sched = ctx.schedule
    C = Fraction(C)
    if len(xs) > sched.n(2 * j - 1):
        raise ValueError(f"at most n_{2 * j - 1} vectors allowed")
    v = vsum(xs).scale(Fraction(1, sched.n(j)))
    br = gm_norm_bracket(v, ctx, depth)
    assert br.lower <= br.upper
    b1 = 2 * C / sched.m(j)
    b2 = 4 * C / sched.m(j) ** 2
    return {"bracket": br.to_dict(with_certificate=False), "bound_2C_over_m": show_rational(b1),
            "bound_4C_over_m2": show_rational(b2), "within_2C_over_m": br.upper <= b1,
            "lower_exceeds_2C_over_m": br.lower > b1}


# -- exact pairs -----------------------------------------------------------------------

@dataclass
class ExactPairWitness:
    x: FinVector
    f: FinVector
    cert: Certificate
    j: int
    stable: bool
    kChecked: int
    problems: List[str] = field(default_factory=list)
    caveats: List[str] = field(default_factory=list)
    brackets: List[NormBracket] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"x": format_vector(self.x), "f": format_vector(self.f), "j": self.j, "stable": self.stable,
                "kChecked": self.kChecked, "problems": self.problems, "caveats": self.caveats,
                "brackets": [b.to_dict(with_certificate=False) for b in self.brackets],
                "certificate": to_obj(self.cert)}


def exact_pair_problems(x: FinVector, f: FinVector, cert: Optional[Certificate], j: int, ctx: KContext,
                        depth: int = 3) -> Tuple[List[str], NormBracket]:
    sched = ctx.schedule
    m = sched.m(j)
    out = []
    if cert is None or isinstance(cert, Terminal) or cert.j != j:
        out.append(f"(1) f is not weighted with weight 1/m_{j}")
    elif flatten(cert, sched) != f:
        out.append("(1) certificate does not describe f")
    elif ctx.validate_certificate(cert):
        out.append("(1) f is not certified as a member of K")
    br = gm_norm_bracket(x, ctx, depth)
    if br.lower < 1:
        out.append(f"(2) lower bound {br.lower} < 1")
    if br.upper > 6:
        out.append(f"(2) upper bound {br.upper} > 6")
    if not norm_infty(x) < Fraction(1, m):
        out.append(f"(2) |x|_inf = {norm_infty(x)} >= 1/m_{j}")
    if pair(f, x) != 1:
        out.append(f"(3) f(x) = {pair(f, x)}")
    if f.range() != x.range():
        out.append("(3) range(f) != range(x)")
    for w, val in sorted(weight_profile(x, ctx, depth).items()):
        if w == j:
            continue
        bound = 9 * max(Fraction(1, m), Fraction(1, sched.m(w)))
        if val > bound:
            out.append(f"(4) weight index {w} gives {val} > {bound}")
    return out, br


def lift_regular(cert: Certificate, k: int) -> Certificate:
    """Canonical ``Lambda^k`` lift of a special-free certificate."""
    if isinstance(cert, Terminal):
        return Terminal(cert.sign, cert.i << k)
    if cert.tag != "regular":
        raise ValueError("canonical lifts here are for special-free certificates")
    return Weighted(cert.sign, cert.j, cert.E.scale(1 << k), tuple(lift_regular(c, k) for c in cert.children))


def verify_exact_pair(x: FinVector, cert: Certificate, j: int, ctx: KContext, k_cap: int = 3,
                      depth: int = 3) -> ExactPairWitness:
    """Def. of j-exact pairs for ``(S^k x, S^k f)``, ``k <= k_cap``.

    ``g(S^k x) = (R^k g)(x)`` and the range of ``S^k x`` depend only on
    ``R^k g = f``, so the canonical lift stands for every ``g`` in
    ``Lambda^k(f)`` of the same weight as far as clause (3) goes; clauses (2)
    and (4) only involve the vector.
    """
    f = flatten(cert, ctx.schedule)
    problems, brackets = [], []
    for k in range(k_cap + 1):
        xk, ck = apply_S(x, k), lift_regular(cert, k)
        probs, br = exact_pair_problems(xk, flatten(ck, ctx.schedule), ck, j, ctx, depth)
        problems += [p if k == 0 else f"S^{k}: {p}" for p in probs]
        brackets.append(br)
    caveats = [_context_caveat(ctx), f"stability checked for k <= {k_cap}"]
    return ExactPairWitness(x, f, cert, j, not problems, k_cap, problems, caveats, brackets)


def make_stable_exact_pair(j: int, basis: BlockBasis, ctx: KContext, start: int = 1, k_cap: int = 3,
                           depth: int = 3) -> ExactPairWitness:
    """``x = m_j/n_j (x_1 + ... + x_{n_j})`` and ``f = m_j^{-1}(f_1 + ... + f_{n_j})`` for even ``j``."""
    if j % 2:
        raise ValueError("exact pairs are built on even weight indices")
    sched = ctx.schedule
    n = sched.n(j)
    xs, certs = [], []
    for v in basis.after(start, n):
        low, c = norming_certificate(v, ctx, depth)
        xs.append(v.scale(1 / low))
        certs.append(c)
    x, cert = _weighted_average(j, xs, certs, ctx)
    return verify_exact_pair(x, cert, j, ctx, k_cap, depth)


# -- dependent sequences --------------------------------------------------------------

def _min_power_past(v: FinVector, after: int) -> int:
    k = 1
    while (v.min_supp() << k) <= after:
        k += 1
    return k


def _bits_covering(hi: int) -> int:
    s = 1
    while (1 << s) < hi:
        s += 1
    return s


@dataclass
class DependentSequence:
    j: int
    xs: List[FinVector]
    certs: List[Certificate]
    js: List[int]
    ks: List[int]
    ss: List[int]
    special: SpecialSequence
    clauses: Dict[str, ClauseReport] = field(default_factory=dict)

    @property
    def fs(self) -> List[FinVector]:
        return list(self.special.members)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.clauses.values())

    def to_dict(self) -> dict:
        return {
            "j": self.j, "js": self.js, "ks": self.ks, "ss": self.ss, "special": self.special.id,
            "pairs": [{"x": format_vector(x), "f": format_vector(f)} for x, f in zip(self.xs, self.fs)],
            "clauses": {k: v.to_dict() for k, v in self.clauses.items()},
        }


def build_dependent_sequence(j: int, ctx: KContext, zbasis: Optional[BlockBasis] = None, start: int = 2,
                             k_cap: int = 3, depth: int = 3, verify: bool = True) -> DependentSequence:
    sched = ctx.schedule
    zbasis = zbasis or unit_basis(start)
    length = sched.n(2 * j - 1)
    if length % 2:
        raise ValueError(f"n_{2 * j - 1} must be even")
    if sched.mode == CONFORMING and j == 1 and length > 2:
        raise CapacityError("conforming schedule: sigma weights beyond the first pair are not materialisable; use compact")
    j1 = smallest_seed_index(j, sched)
    if j1 > ctx.caps.weight_index:
        raise CapacityError(f"seed weight index {j1} exceeds weight cap {ctx.caps.weight_index}")
    xs: List[FinVector] = []
    certs: List[Certificate] = []
    fs: List[FinVector] = []
    js, ks, ss = [], [], []
    lo = max(start, 2)
    for i in range(length // 2):
        if i == 0:
            ji = j1
        else:
            ji = ctx.registry.assign(fs)
            if ji > ctx.caps.weight_index:
                raise CapacityError(f"sigma assigned weight index {ji} beyond weight cap {ctx.caps.weight_index}")
        pair_ = make_stable_exact_pair(ji, zbasis, ctx, lo, k_cap=0, depth=depth)
        x_odd, c_odd = pair_.x, pair_.cert
        if i == 0:
            s = _bits_covering(x_odd.max_supp())
            k = _min_power_past(x_odd, x_odd.max_supp())
        else:
            s = _bits_covering(x_odd.max_supp())
            k = max(ks[-1] + ss[-1] + s + 1, _min_power_past(x_odd, x_odd.max_supp()))
        c_even = lift_regular(c_odd, k)
        xs += [x_odd, apply_S(x_odd, k)]
        certs += [c_odd, c_even]
        fs += [flatten(c_odd, sched), flatten(c_even, sched)]
        js.append(ji)
        ks.append(k)
        ss.append(s)
        lo = xs[-1].max_supp() + 1
    seq = SpecialSequence(ctx.fresh_id(f"D{j}-"), j, tuple(fs), tuple(w for w in js for _ in (0, 1)), tuple(ks))
    ctx.register(seq)
    dep = DependentSequence(j, xs, certs, js, ks, ss, seq)
    if verify:
        dep.clauses = verify_dependent_sequence(dep, ctx, k_cap, depth)
    return dep


def d5_scan(dep: DependentSequence) -> ClauseReport:
    """Direct check of (D5) for every ``k`` that can matter.

    A member of ``Lambda^k(f)`` is free off the multiples of ``2^k`` inside
    ``2^k range(f)``, so some member acts nonzero on ``x`` exactly when the
    canonical lift does or ``x`` has a support point there that is not a
    multiple of ``2^k``.  Past ``k = max(k_i + s_i)`` every range misses.
    """
    fs, xs = dep.fs, dep.xs
    d = len(xs) // 2
    top = max(k + s for k, s in zip(dep.ks, dep.ss)) + 1
    rep = ClauseReport("D5", True)
    for k in range(top + 1):
        lam, rk = [], []
        for i in range(d):
            f, x = fs[2 * i], xs[2 * i + 1]
            E = f.range().scale(1 << k)
            hit = pair(apply_S(f, k), x) != 0 or any(p in E and p % (1 << k) for p in x.support)
            if hit:
                lam.append(i + 1)
            if pair(apply_R(fs[2 * i + 1], k), xs[2 * i]) != 0:
                rk.append(i + 1)
        ok = len(lam) <= 1 and len(rk) <= 1
        rep.rows.append({"k": k, "lambda_hits": lam, "r_hits": rk, "ok": ok})
        rep.passed &= ok
    return rep


def verify_dependent_sequence(dep: DependentSequence, ctx: KContext, k_cap: int = 3,
                              depth: int = 3) -> Dict[str, ClauseReport]:
    sched = ctx.schedule
    j = dep.j
    d = len(dep.xs) // 2
    n_odd = sched.n(2 * j - 1)
    m_odd = sched.m(2 * j - 1)
    out: Dict[str, ClauseReport] = {}
    compact = sched.mode != CONFORMING

    ok = sched.m(dep.js[0]) > 9 * n_odd ** 2
    out["D1"] = ClauseReport("D1", ok or compact, [{"m_j1": sched.m(dep.js[0]), "9n^2": 9 * n_odd ** 2, "holds": ok}],
                             [] if ok else ["compact schedule: m_j1 > 9 n_{2j-1}^2 fails (mode caveat)"])

    problems = verify_special(dep.special, ctx)
    hard = [p for p in problems if not p.startswith("caveat")]
    rows = [{"length": len(dep.fs), "weights": list(dep.special.weights), "ks": dep.ks}]
    for i in range(d):
        if dep.special.weights[2 * i] != dep.js[i]:
            hard.append(f"weight of f_{2 * i + 1} is not 1/m_j{i + 1}")
    out["D2"] = ClauseReport("D2", not hard, rows + [{"problem": p} for p in hard],
                             [p for p in problems if p.startswith("caveat")])

    d3 = [apply_S(dep.xs[2 * i], dep.ks[i]) == dep.xs[2 * i + 1] for i in range(d)]
    out["D3"] = ClauseReport("D3", all(d3), [{"i": i + 1, "ok": v} for i, v in enumerate(d3)])

    rows, good = [], True
    cavs = []
    for n, (x, c) in enumerate(zip(dep.xs, dep.certs), 1):
        w = dep.js[(n - 1) // 2]
        wit = verify_exact_pair(x, c, w, ctx, k_cap if n % 2 else 0, depth)
        rows.append({"pair": n, "j": w, "ok": wit.stable, "problems": wit.problems,
                     "lower": show_rational(wit.brackets[0].lower), "upper": show_rational(wit.brackets[0].upper)})
        good &= wit.stable
        cavs = cavs or wit.caveats[:1]
    cavs.append(f"stability checked for k <= {k_cap} on the Z-side pairs")
    out["D4"] = ClauseReport("D4", good, rows, cavs)

    out["D5"] = d5_scan(dep)

    rows, good = [], True
    for i in range(d):
        x = dep.xs[2 * i]
        r1 = x.min_supp() >= 2 and x.max_supp() <= (1 << dep.ss[i])
        r2 = i + 1 >= d or dep.ks[i] + dep.ss[i] < dep.ks[i + 1] - dep.ss[i + 1]
        rows.append({"i": i + 1, "k": dep.ks[i], "s": dep.ss[i], "range_ok": r1, "spacing_ok": r2})
        good &= r1 and r2
    out["D7"] = ClauseReport("D7", good, rows)

    rows, good = [], True
    for i in range(d - 1):
        lhs = Fraction(4 * len(dep.xs[2 * i]), sched.m(dep.js[i + 1]))
        rhs = Fraction(1, m_odd ** 2)
        rows.append({"i": i + 1, "lhs": show_rational(lhs), "rhs": show_rational(rhs), "holds": lhs < rhs})
        good &= lhs < rhs
    cav = [] if good else ["(D6) follows from (D1) and sigma growth; both fail at compact schedules (mode caveat)"]
    out["D6"] = ClauseReport("D6", good or compact, rows, cav)
    return out


# -- complementation witness ---------------------------------------------------------

@dataclass
class ComplementationWitness:
    y: FinVector
    z: FinVector
    plus_certificate: Certificate
    plus_value: Fraction
    plus_bracket: NormBracket
    minus_bracket: NormBracket
    ratio: Fraction
    reference: Fraction
    reference_y_minus_z: Fraction
    caveats: List[str]

    def to_dict(self) -> dict:
        return {
            "plus_certificate_value": show_rational(self.plus_value),
            "plus_bracket": self.plus_bracket.to_dict(with_certificate=False),
            "minus_bracket": self.minus_bracket.to_dict(with_certificate=False),
            "ratio_upper_minus_over_lower_plus": show_rational(self.ratio),
            "reference_240_over_m2": show_rational(self.reference),
            "reference_240_over_m_for_y_minus_z": show_rational(self.reference_y_minus_z),
            "caveats": self.caveats,
            "plus_certificate": to_obj(self.plus_certificate),
        }


def complementation_witness(dep: DependentSequence, ctx: KContext, depth: int = 3) -> ComplementationWitness:
    sched = ctx.schedule
    j = dep.j
    m, n = sched.m(2 * j - 1), sched.n(2 * j - 1)
    scale = Fraction(m, n)
    y = vsum(dep.xs[1::2]).scale(scale)
    z = vsum(dep.xs[0::2]).scale(scale)
    seq = dep.special
    E = Interval(seq.members[0].min_supp(), seq.members[-1].max_supp())
    cert = Weighted(1, 2 * j - 1, E, seq.certificates, R_SPECIAL, 0, seq.id)
    problems = ctx.validate_certificate(cert)
    assert not problems, problems
    value = evaluate_certificate(cert, y + z, sched)
    assert value >= 1, f"|y+z| certificate gives {value}"
    plus = gm_norm_bracket(y + z, ctx, depth)
    assert plus.lower >= value
    minus = gm_norm_bracket(y - z, ctx, depth)
    caveats = list(minus.caveats)
    if sched.mode != CONFORMING:
        caveats.append("the 240/m^2 estimate needs the growth conditions; reported, not asserted")
    return ComplementationWitness(y, z, cert, value, plus, minus, minus.upper / plus.lower,
                                  Fraction(240, m * m), Fraction(240, m), caveats)
