"""Certified lower bounds and brackets for the norm induced by a :class:`KContext`.

The solver is an interval dynamic program over the support positions of
``x``.  ``V_g[a, b]`` is the largest ``|f(E x)|`` for ``f`` of generation at
most ``g`` and ``E`` the positions ``a..b``; it is the maximum of the best
single coordinate, the best special atom (a restricted special functional of
generation ``<= g``) and, for every regular weight ``w``, ``P_w / m_w`` where
``P_w`` is the best split of ``a..b`` into at most ``n_w`` runs scored by
``V_{g-1}``.  All values are held as integers at one common scale so that
numpy does the heavy lifting without rounding.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from .certificates import Certificate, Terminal, Weighted, evaluate_certificate, flatten, to_obj
from .norming import KContext
from .spread import apply_S, r_certificate
from .vectors import FinVector, Interval, norm_one, pair, restrict, show_rational

_INT64_LIMIT = 1 << 62


@dataclass
class NormBracket:
    lower: Fraction
    lowerCert: Certificate
    upper: Fraction
    depthCap: int
    caveats: List[str] = field(default_factory=list)
    stable: bool = False  # V_D == V_{D-1}: exact relative to the registry and caps

    def to_dict(self, with_certificate: bool = True) -> dict:
        out = {
            "lower": show_rational(self.lower),
            "upper": show_rational(self.upper),
            "depthCap": self.depthCap,
            "caveats": list(self.caveats),
            "stable": self.stable,
        }
        if with_certificate:
            out["certificate"] = to_obj(self.lowerCert)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))



class _Solver:
    def __init__(self, x: FinVector, ctx: KContext, depth: int):
        if depth < 0:
            raise ValueError("depth must be nonnegative")
        self.x, self.ctx, self.depth = x, ctx, depth
        sched = ctx.schedule
        self.idx = x.support
        self.vals = [a for _, a in x.items()]
        s = self.s = len(self.idx)
        self.weights = [w for w in ctx.regular_weights() if sched.m(w) < s and sched.n(w) >= 2]
        self.family = [fm for fm in ctx.family(self.idx[0], self.idx[-1]) if fm.generation <= depth]
        # terms t_p = phi(idx_p) x_p of each special atom
        self.terms = []
        for fm in self.family:
            t = [fm.functional[i] * a for i, a in zip(self.idx, self.vals)]
            if any(t):
                self.terms.append((fm, t))
        dens = [a.denominator for a in self.vals] + [q.denominator for _, t in self.terms for q in t]
        s0 = math.lcm(*dens) if dens else 1
        lm = math.lcm(*(sched.m(w) for w in self.weights)) if self.weights else 1
        self.scale = s0 * lm ** depth
        top = self.scale * norm_one(x)
        self.dtype = np.int64 if top < _INT64_LIMIT else object
        self._build()

    def _mat(self) -> np.ndarray:
        return np.zeros((self.s, self.s), dtype=self.dtype)

    def _int(self, q: Fraction) -> int:
        v = q * self.scale
        assert v.denominator == 1
        return int(v)

    def _sub_max(self, t: List[Fraction]) -> np.ndarray:
        """``out[a, b]`` = largest ``|sum t[a'..b']|`` over ``a <= a' <= b' <= b``."""
        s = self.s
        c = np.zeros(s + 1, dtype=self.dtype)
        c[1:] = np.cumsum(np.array([self._int(q) for q in t], dtype=self.dtype))
        m = np.abs(c[None, 1:] - c[:s, None])
        out = np.where(np.triu(np.ones((s, s), dtype=bool)), m, 0).astype(self.dtype)
        for length in range(2, s + 1):
            a = np.arange(0, s - length + 1)
            b = a + length - 1
            out[a, b] = np.maximum(out[a, b], np.maximum(out[a + 1, b], out[a, b - 1]))
        return out

    def _build(self) -> None:
        s = self.s
        leaf = self._mat()
        absval = np.array([self._int(abs(a)) for a in self.vals], dtype=self.dtype)
        for a in range(s):
            leaf[a, a:] = np.maximum.accumulate(absval[a:])
        self.leaf = leaf
        self.atoms: Dict[int, np.ndarray] = {}  # special atoms available from generation g
        self.atom_by_weight: Dict[int, np.ndarray] = {}
        for fm, t in self.terms:
            sub = self._sub_max(t)
            g = fm.generation
            self.atoms[g] = np.maximum(self.atoms[g], sub) if g in self.atoms else sub
            w = fm.weight_index
            self.atom_by_weight[w] = np.maximum(self.atom_by_weight[w], sub) if w in self.atom_by_weight else sub
        self.V: List[np.ndarray] = [leaf]
        self.P: List[Dict[int, np.ndarray]] = [{}]
        spec = self._mat()
        self.stable = False
        for g in range(1, self.depth + 1):
            prev = self.V[-1]
            if g in self.atoms:
                spec = np.maximum(spec, self.atoms[g])
            cur = np.maximum(prev, spec)
            parts = {}
            for w in self.weights:
                P = self._partition(prev, self.ctx.schedule.n(w))
                parts[w] = P
                cur = np.maximum(cur, P // self.ctx.schedule.m(w))
            self.V.append(cur)
            self.P.append(parts)
            if np.array_equal(cur, prev) and not any(k > g for k in self.atoms):
                self.stable = True
                break
        self.top_gen = len(self.V) - 1

    def _partition(self, V: np.ndarray, d: int) -> np.ndarray:
        """Best sum of ``V`` over splits of ``a..b`` into at most ``d`` runs."""
        s = self.s
        P = V.copy()
        for _ in range(min(d, s) - 1):
            nxt = P.copy()
            for c in range(s - 1):
                cand = V[: c + 1, c, None] + P[None, c + 1, c + 1:]
                nxt[: c + 1, c + 1:] = np.maximum(nxt[: c + 1, c + 1:], cand)
            if np.array_equal(nxt, P):
                break
            P = nxt
        return np.triu(P)

    def value(self, a: int = 0, b: Optional[int] = None) -> Fraction:
        b = self.s - 1 if b is None else b
        return Fraction(int(self.V[-1][a, b]), self.scale)

    # -- certificates -----------------------------------------------------
    def certificate(self) -> Certificate:
        return self._trace(self.top_gen, 0, self.s - 1)

    def _trace(self, g: int, a: int, b: int) -> Certificate:
        target = self.V[g][a, b]
        while g > 0 and self.V[g - 1][a, b] == target:
            g -= 1
        if self.leaf[a, b] == target:
            p = max(range(a, b + 1), key=lambda q: (abs(self.vals[q]), -q))
            return Terminal(1 if self.vals[p] > 0 else -1, self.idx[p])
        for fm, t in self.terms:
            if fm.generation > g:
                continue
            hit = self._atom_hit(t, a, b, target)
            if hit is not None:
                lo, hi, sign = hit
                return self.ctx.special_certificate(fm, sign, Interval(self.idx[lo], self.idx[hi]))
        for w in self.weights:
            P = self.P[g].get(w)
            if P is None or P[a, b] // self.ctx.schedule.m(w) != target:
                continue
            runs = self._split(self.V[g - 1], a, b, self.ctx.schedule.n(w), P[a, b])
            kids = tuple(self._trace(g - 1, u, v) for u, v in runs if self.V[g - 1][u, v] != 0)
            return Weighted(1, w, Interval(self.idx[a], self.idx[b]), kids)
        raise AssertionError("trace failed to reproduce a DP value")

    def _atom_hit(self, t: List[Fraction], a: int, b: int, target) -> Optional[Tuple[int, int, int]]:
        for lo in range(a, b + 1):
            acc = Fraction(0)
            for hi in range(lo, b + 1):
                acc += t[hi]
                if acc and self._int(abs(acc)) == target:
                    return lo, hi, 1 if acc > 0 else -1
        return None

    @staticmethod
    def _split(V: np.ndarray, a: int, b: int, d: int, goal) -> List[Tuple[int, int]]:
        # best[k][q]: best sum covering a..q-1 with k runs
        n = b - a + 1
        best: List[Dict[int, Tuple[object, int]]] = [{0: (0, -1)}]
        for k in range(1, min(d, n) + 1):
            row = {}
            for q in range(1, n + 1):
                top = None
                for p, (v, _) in best[k - 1].items():
                    if p >= q:
                        continue
                    cand = v + V[a + p, a + q - 1]
                    if top is None or cand > top[0]:
                        top = (cand, p)
                if top is not None:
                    row[q] = top
            best.append(row)
            if n in row and row[n][0] == goal:
                runs = []
                q, kk = n, k
                while q > 0:
                    p = best[kk][q][1]
                    runs.append((a + p, a + q - 1))
                    q, kk = p, kk - 1
                return runs[::-1]
        raise AssertionError("partition trace failed")

    def weight_profile(self) -> Dict[int, Fraction]:
        """Largest ``|f(x)|`` over members whose top weight index is ``w``."""
        out: Dict[int, Fraction] = {}
        last = self.P[-1] if len(self.P) > 1 else {}
        for w, P in last.items():
            out[w] = Fraction(int(P[0, self.s - 1]), self.scale) / self.ctx.schedule.m(w)
        for w, M in self.atom_by_weight.items():
            out[w] = max(out.get(w, Fraction(0)), Fraction(int(M[0, self.s - 1]), self.scale))
        return out


def _solve(x: FinVector, ctx: KContext, depth: Optional[int]) -> _Solver:
    if not x:
        raise ValueError("norm of the zero vector needs no certificate")
    return _Solver(x, ctx, ctx.caps.generation if depth is None else depth)


def gm_norm_lower(x: FinVector, ctx: KContext, depth: Optional[int] = None) -> Tuple[Fraction, Certificate]:
    """Best ``|f(x)|`` over members of generation ``<= depth`` with a tree-analysis certificate."""
    solver = _solve(x, ctx, depth)
    value = solver.value()
    cert = solver.certificate()
    check = evaluate_certificate(cert, x, ctx.schedule)
    assert abs(check) == value, (check, value)
    return value, cert


def _caveats(ctx: KContext, solver: _Solver, depth: int) -> List[str]:
    out = ["registry-relative: special functionals range over the registered special sequences only"]
    if ctx.caps.weight_index < 2 * solver.s:
        last = max(ctx.regular_weights(), default=0)
        if last and ctx.schedule.m(last) < solver.s:
            out.append(f"weight-cap: regular weights beyond index {last} were not enumerated")
    if ctx.planted:
        out.append("planted functionals are excluded from the lower bound")
    if ctx.mode != "conforming":
        out.append(f"compact schedule {ctx.schedule.name!r}: growth conditions of the construction do not hold")
    if solver.stable:
        out.append(f"fixpoint reached at generation {solver.top_gen}: lower bound is the registry-relative norm")
    return out


def gm_norm_bracket(x: FinVector, ctx: KContext, depth: int) -> NormBracket:
    solver = _solve(x, ctx, depth)
    lower = solver.value()
    cert = solver.certificate()
    assert abs(evaluate_certificate(cert, x, ctx.schedule)) == lower
    l1 = norm_one(x)
    upper = min(lower + l1 / (1 << depth), l1)
    return NormBracket(lower, cert, upper, depth, _caveats(ctx, solver, depth), solver.stable)


def weight_profile(x: FinVector, ctx: KContext, depth: Optional[int] = None) -> Dict[int, Fraction]:
    """Per top weight index, the best value of a weighted member on ``x``.

    Planted functionals are included so that negative controls reach the
    clause checks that consume this profile.
    """
    if not x:
        return {}
    prof = _solve(x, ctx, depth).weight_profile()
    for f, w in ctx.planted:
        if w:
            prof[w] = max(prof.get(w, Fraction(0)), abs(pair(f, x)))
    return prof


# -- isometry -------------------------------------------------------------------

def transfer_certificate_S(cert: Certificate, ctx: KContext) -> Certificate:
    """A member ``g`` with ``R g`` equal to the certified functional; same value on ``Sx``."""
    return ctx.lift_certificate(cert)


def transfer_certificate_R(cert: Certificate) -> Optional[Certificate]:
    """Node-wise ``R``; ``None`` is the zero functional."""
    return r_certificate(cert, 1)


@dataclass
class IsometryReport:
    x: FinVector
    value_x: Fraction
    value_Sx: Fraction
    cert_x: Certificate
    cert_Sx: Certificate
    lifted: Certificate
    pulled: Optional[Certificate]
    problems: List[str]
    special_transfers: int = 0

    @property
    def passed(self) -> bool:
        return not self.problems

    def to_dict(self) -> dict:
        return {
            "x": str(self.x),
            "norm_x": show_rational(self.value_x),
            "norm_Sx": show_rational(self.value_Sx),
            "passed": self.passed,
            "problems": self.problems,
            "lifted": to_obj(self.lifted),
            "pulled": to_obj(self.pulled) if self.pulled is not None else None,
        }


def isometry_check(x: FinVector, ctx: KContext, depth: Optional[int] = None,
                   sweep_specials: bool = False) -> IsometryReport:
    """Equal norms of ``x`` and ``Sx`` with certificates transferred both ways.

    With ``sweep_specials`` every special functional of the context, restricted
    to ``range(x)``, is also lifted and pulled back, since the optimal
    certificates of small vectors are rarely special.
    """
    sched = ctx.schedule
    Sx = apply_S(x)
    vx, cx = gm_norm_lower(x, ctx, depth)
    vs, cs = gm_norm_lower(Sx, ctx, depth)
    problems: List[str] = []
    if vx != vs:
        problems.append(f"norm mismatch {vx} != {vs}")
    lifted = transfer_certificate_S(cx, ctx)
    problems += [f"lifted: {p}" for p in ctx.validate_certificate(lifted)]
    if not problems and abs(evaluate_certificate(lifted, Sx, sched)) != vx:
        problems.append("lifted certificate changes value on Sx")
    pulled = transfer_certificate_R(cs)
    if pulled is None:
        if vs != 0:
            problems.append("R image of the Sx certificate vanished")
    else:
        problems += [f"pulled: {p}" for p in ctx.validate_certificate(pulled)]
        if not problems and abs(evaluate_certificate(pulled, x, sched)) != vs:
            problems.append("pulled certificate changes value on x")
    swept = 0
    if sweep_specials:
        for fm in ctx.family(x.min_supp(), x.max_supp(), depth):
            E = fm.functional.range().intersect(x.range())
            if E is None or not restrict(fm.functional, E):
                continue
            cert = ctx.special_certificate(fm, 1, E)
            up = ctx.lift_certificate(cert)
            back = r_certificate(up, 1)
            swept += 1
            bad = ctx.validate_certificate(up) + (ctx.validate_certificate(back) if back is not None else ["vanished"])
            if bad:
                problems.append(f"special transfer of {fm.seq} ({fm.tag} {fm.k}): {bad[0]}")
                continue
            v = pair(flatten(cert, sched), x)
            if pair(flatten(up, sched), Sx) != v or pair(flatten(back, sched), x) != v:
                problems.append(f"special transfer of {fm.seq} ({fm.tag} {fm.k}) changes value")
    return IsometryReport(x, vx, vs, cx, cs, lifted, pulled, problems, swept)
