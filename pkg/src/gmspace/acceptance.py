"""The eight acceptance criteria as plain functions.

Each runner returns a :class:`CriterionResult`; :func:`run_all` strings them
together for ``selftest``.  Output lines never contain timings so two runs
with the same seed and registry print the same bytes.
"""
from __future__ import annotations

import itertools
import os
import random
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional

from .constructions import build_dependent_sequence, complementation_witness, make_ss_witness, unit_basis
from .engine import gm_norm_lower, isometry_check
from .mixed_tsirelson import mt_norm_exact, mt_norm_oracle
from .norming import Caps, KContext, build_j_special, check_K1, check_K2, check_K3, generate_K
from .registry import SigmaRegistry
from .schedule import ParameterSchedule, compact, desk
from .spread import apply_R, lambda_member, lambda_power_lift
from .vectors import FinVector, is_block, norm_infty, norm_one


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    limit: Optional[float] = None
    data: Dict = field(default_factory=dict)

    def line(self, timings: bool = False) -> str:
        status = "PASS" if self.passed else "FAIL"
        out = f"[{status}] {self.number} {self.name}: {self.detail}"
        if timings:
            out += f" ({self.seconds:.1f}s)"
        return out


def _timed(number: int, name: str, limit: Optional[float], body: Callable[[], tuple]) -> CriterionResult:
    t0 = time.perf_counter()
    passed, detail, data = body()
    dt = time.perf_counter() - t0
    if limit is not None and dt > limit:
        passed = False
        detail += f"; exceeded {limit:.0f}s budget"
    return CriterionResult(number, name, passed, detail, dt, limit, data)


def acceptance_schedule() -> ParameterSchedule:
    return compact()


def derived_even_schedule(sched: ParameterSchedule, upto: int = 4) -> ParameterSchedule:
    """Mixed Tsirelson schedule ``(m_{2j}, n_{2j})``: the regular part of the norming set."""
    ms = tuple(sched.m(2 * j) for j in range(1, upto + 1))
    ns = tuple(sched.n(2 * j) for j in range(1, upto + 1))
    return ParameterSchedule(sched.mode, ms, ns, sched.extension, sched.name + "-even")


def magnitude_corpus(seed: int, support: int = 6) -> List[FinVector]:
    """All nonzero patterns in ``{0,1,2}^support`` with seeded random signs."""
    rng = random.Random(seed)
    out = []
    for pattern in itertools.product((0, 1, 2), repeat=support):
        if any(pattern):
            out.append(FinVector({i + 1: a * rng.choice((1, -1)) for i, a in enumerate(pattern) if a}))
    return out


def special_context(caps: Caps = Caps(3, 16, 8), sched: Optional[ParameterSchedule] = None) -> KContext:
    """Compact context with two 1-special sequences inside the low coordinates."""
    ctx = KContext(sched or acceptance_schedule(), caps=caps)
    build_j_special(ctx, 1, 2, start=1)
    build_j_special(ctx, 1, 4, start=3)
    return ctx


# -- criteria ---------------------------------------------------------------

def criterion_1(seed: int = 0, quick: bool = False) -> CriterionResult:
    def body():
        sched = acceptance_schedule()
        corpus = magnitude_corpus(seed)
        if quick:
            corpus = corpus[::12]
        bad = []
        for x in corpus:
            a = mt_norm_exact(x, sched).value
            b = mt_norm_oracle(x, sched, depth_cap=len(x))
            if a != b:
                bad.append(str(x))
        return not bad and len(corpus) >= (50 if quick else 500), \
            f"{len(corpus)} vectors, {len(bad)} mismatches", {"mismatches": bad[:5]}
    return _timed(1, "oracle-equivalence", 300, body)


def criterion_2(seed: int = 0, quick: bool = False) -> CriterionResult:
    def body():
        sched = acceptance_schedule()
        rng = random.Random(seed + 1)
        corpus = magnitude_corpus(seed)
        if quick:
            corpus = corpus[::12]
        ctx = special_context()
        bad = 0
        for x in corpus:
            flip = FinVector({i: a * rng.choice((1, -1)) for i, a in x.items()})
            v = mt_norm_exact(x, sched).value
            g = gm_norm_lower(x, ctx)[0]
            for val in (v, g):
                if not norm_infty(x) <= val <= norm_one(x):
                    bad += 1
            if mt_norm_exact(flip, sched).value != v or mt_norm_exact(-x, sched).value != v:
                bad += 1
            if gm_norm_lower(flip, ctx)[0] != g or gm_norm_lower(-x, ctx)[0] != g:
                bad += 1
        return bad == 0, f"{len(corpus)} vectors, mixed Tsirelson and context norms, {bad} violations", {}
    return _timed(2, "sandwich-unconditional", None, body)


def random_rational(rng: random.Random, top: int = 8) -> FinVector:
    while True:
        size = rng.randint(1, top)
        v = FinVector({i: Fraction(rng.randint(-6, 6), rng.randint(1, 5)) for i in rng.sample(range(1, top + 1), size)})
        if v:
            return v


def criterion_3(seed: int = 0, quick: bool = False) -> CriterionResult:
    def body():
        ctx = special_context()
        rng = random.Random(seed + 2)
        count = 40 if quick else 200
        bad, swept = [], 0
        for _ in range(count):
            rep = isometry_check(random_rational(rng), ctx, sweep_specials=True)
            if not rep.passed:
                bad.append(rep.problems[0])
            swept += rep.special_transfers
        return not bad, f"{count} vectors, {len(bad)} failures, {swept} special certificates transferred", \
            {"failures": bad[:5]}
    return _timed(3, "isometry", 300, body)


def criterion_4(seed: int = 0, quick: bool = False) -> CriterionResult:
    def body():
        caps = Caps(2, 8, 4) if quick else Caps(3, 16, 8)
        ctx = special_context(caps)
        generate_K(ctx.schedule, caps, ctx=ctx, seed=seed, sample=300)
        reports = [check_K1(ctx), check_K2(ctx), check_K3(ctx)]
        clean = all(r.passed for r in reports)
        # negative controls: a functional with no formation, and a broken lift
        ctx.plant(FinVector({1: Fraction(1, 3)}), 2)
        ctx.plant(FinVector({3: Fraction(1, 2), 5: Fraction(1, 2)}), 0)
        controls = [check_K2(ctx), check_K3(ctx)]
        caught = all(not r.passed for r in controls)
        detail = ", ".join(f"{r.name} {len(r.violations)}/{r.checked}" for r in reports)
        detail += f"; planted controls rejected: {caught}"
        if not ctx.exhaustive:
            detail += "; sampled corpus"
        return clean and caught, detail, {}
    return _timed(4, "closure-K1-K3", None, body)


def _lambda_oracle(g: FinVector, f: FinVector, k: int) -> bool:
    """Unfold ``Lambda^k = Lambda o Lambda^{k-1}`` through the one-step definition."""
    if k == 0:
        return g == f
    if not g:
        return False
    h = apply_R(g)
    if not h:
        return False
    if g.min_supp() < 2 * h.min_supp() or g.max_supp() > 2 * h.max_supp():
        return False
    if g.range() != h.range().scale(2):
        return False
    return _lambda_oracle(h, f, k - 1)


def _random_lift(rng: random.Random, f: FinVector, k: int) -> FinVector:
    g = dict(lambda_power_lift(f, k).items())
    lo, hi = f.min_supp() << k, f.max_supp() << k
    for p in range(lo, hi + 1):
        if p % (1 << k) and rng.random() < 0.3:
            g[p] = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
    return FinVector(g)


def criterion_5(seed: int = 0, quick: bool = False) -> CriterionResult:
    def body():
        rng = random.Random(seed + 3)
        count = 40 if quick else 200
        bad = 0
        checked = 0
        for _ in range(count):
            f = random_rational(rng, 10)
            for k in range(4):
                cands = [_random_lift(rng, f, k), lambda_power_lift(f, k)]
                # just outside the doubled range, and a wrong value on a multiple of 2^k
                outside = dict(_random_lift(rng, f, k).items())
                outside[(f.max_supp() << k) + 1] = Fraction(1)
                cands.append(FinVector(outside))
                skewed = dict(_random_lift(rng, f, k).items())
                p = f.support[rng.randrange(len(f))] << k
                skewed[p] = skewed[p] + 1
                cands.append(FinVector(skewed))
                for g in cands:
                    checked += 1
                    bad += lambda_member(g, f, k) != _lambda_oracle(g, f, k)
                for l in range(k + 1):
                    checked += 1
                    bad += apply_R(lambda_power_lift(f, k), l) != lambda_power_lift(f, k - l)
            f2 = random_rational(rng, 6).map_indices(lambda i: i + f.max_supp())
            for k in range(1, 4):
                checked += 1
                bad += not is_block([_random_lift(rng, f, k), _random_lift(rng, f2, k)])
        return bad == 0, f"{checked} checks on {count} functionals, {bad} failures", {}
    return _timed(5, "lambda-suite", None, body)


def criterion_6(seed: int = 0, quick: bool = False) -> CriterionResult:
    def body():
        ctx = KContext(acceptance_schedule(), caps=Caps(3, 16, 8))
        w = make_ss_witness(1, unit_basis(), ctx)
        m, n = ctx.schedule.m(2), ctx.schedule.n(2)
        ok = w.lower >= 1 and w.lower == 1 and w.sup == Fraction(m, n)
        return ok, f"certificate gives |x| >= {w.lower}, |x|_inf = {w.sup} (m_2/n_2 = {m}/{n})", w.to_dict()
    return _timed(6, "strict-singularity-gap", None, body)


def criterion_7(seed: int = 0, quick: bool = False, registry: Optional[SigmaRegistry] = None) -> CriterionResult:
    def body():
        sched = desk()
        reg = registry if registry is not None else SigmaRegistry(sched.mode)
        ctx = KContext(sched, reg, Caps(3, 16, 8))
        dep = build_dependent_sequence(1, ctx, k_cap=1 if quick else 3)
        wit = complementation_witness(dep, ctx)
        flags = [f"{k}:{'ok' if v.passed and not v.caveats else ('caveat' if v.passed else 'FAIL')}"
                 for k, v in dep.clauses.items()]
        ok = dep.ok and len(dep.xs) == 4 and wit.plus_value >= 1
        detail = (f"{len(dep.xs)} pairs, {' '.join(flags)}; |y+z| >= {wit.plus_value}; "
                  f"|y-z| in [{wit.minus_bracket.lower}, {wit.minus_bracket.upper}]; "
                  f"ratio {wit.ratio} vs 240/m^2 = {wit.reference}")
        return ok, detail, {"dependent": dep.to_dict(), "witness": wit.to_dict()}
    return _timed(7, "complementation-witness", 600, body)


def criterion_8(seed: int = 0, quick: bool = False) -> CriterionResult:
    def body():
        with tempfile.TemporaryDirectory() as tmp:
            outs = []
            for run in range(2):
                reg = Path(tmp) / f"reg{run}.tsv"
                cmd = [sys.executable, "-m", "gmspace", "--seed", str(seed), "--registry", str(reg),
                       "selftest", "--quick", "--skip-determinism"]
                env = dict(os.environ, PYTHONHASHSEED=str(run))
                proc = subprocess.run(cmd, capture_output=True, env=env)
                outs.append((proc.returncode, proc.stdout, reg.read_bytes() if reg.exists() else b""))
            same_out = outs[0][1] == outs[1][1] and outs[0][0] == outs[1][0] == 0
            same_reg = outs[0][2] == outs[1][2] and outs[0][2] != b""
            reg = SigmaRegistry.load(Path(tmp) / "reg0.tsv")
            again = Path(tmp) / "again.tsv"
            reg.save(again)
            reload_ok = again.read_bytes() == outs[0][2]
        ok = same_out and same_reg and reload_ok
        return ok, (f"selftest output identical: {same_out}; registry files identical: {same_reg}; "
                    f"reload bit-exact: {reload_ok}"), {}
    return _timed(8, "determinism", None, body)


RUNNERS = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


def run_all(seed: int = 0, quick: bool = False, registry: Optional[SigmaRegistry] = None,
            skip_determinism: bool = False) -> List[CriterionResult]:
    out = []
    for runner in RUNNERS:
        if runner is criterion_8 and skip_determinism:
            continue
        if runner is criterion_7:
            out.append(runner(seed, quick, registry))
        else:
            out.append(runner(seed, quick))
    return out
