"""Command line front end: ``gmspace <command> [options]``.

Exit codes: 0 ok, 1 a checked property failed, 2 usage or parse error,
3 a computation would exceed the configured caps.
"""
from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

from . import certificates
from .acceptance import random_rational, run_all
from .constructions import build_dependent_sequence, complementation_witness, make_ss_witness, unit_basis
from .engine import gm_norm_bracket, isometry_check, weight_profile
from .mixed_tsirelson import ResourceError, mt_norm_exact
from .norming import Caps, CapacityError, KContext, build_j_special, check_K1, check_K2, check_K3, \
    check_tree_property, generate_K, verify_special
from .registry import SigmaError, SigmaRegistry
from .schedule import COMPACT, ParameterSchedule, ScheduleError
from .vectors import format_vector, parse_vector, show_rational

log = logging.getLogger("gmspace")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3


@dataclass
class RunConfig:
    schedule: dict = field(default_factory=dict)  # {"preset": name} or ParameterSchedule.to_dict()
    generation: int = 3
    support: int = 16
    weight_index: int = 8
    depth: int = 3
    stability_k: int = 3
    registry: Optional[str] = None
    seed: int = 0
    format: str = "json"

    def validate(self) -> None:
        if min(self.generation, self.support, self.weight_index) < 1 or self.depth < 0 or self.stability_k < 0:
            raise ValueError("caps must be positive")
        if self.format not in ("json", "text"):
            raise ValueError(f"unknown format {self.format!r}")

    def caps(self) -> Caps:
        return Caps(self.generation, self.support, self.weight_index)

    def make_schedule(self, default: str = "compact") -> ParameterSchedule:
        spec = self.schedule or {"preset": default}
        return ParameterSchedule.from_dict(spec)


def load_config(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        data = json.loads(Path(args.config).read_text())
        known = set(RunConfig.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        cfg = RunConfig(**data)
    overrides = {"generation": args.gen_cap, "support": args.supp_cap, "weight_index": args.weight_cap,
                 "depth": args.depth, "registry": args.registry, "seed": args.seed, "format": args.format}
    for key, value in overrides.items():
        if value is not None:
            setattr(cfg, key, value)
    if args.preset:
        cfg.schedule = {"preset": args.preset}
    elif args.mode:
        cfg.schedule = {"preset": args.mode}
    cfg.validate()
    return cfg


class Session:
    """Schedule, registry and context built from one config."""

    def __init__(self, cfg: RunConfig, default_schedule: str = "compact"):
        self.cfg = cfg
        self.schedule = cfg.make_schedule(default_schedule)
        path = Path(cfg.registry) if cfg.registry else None
        if path is not None and path.exists():
            self.registry = SigmaRegistry.load(path, self.schedule.mode)
        else:
            self.registry = SigmaRegistry(self.schedule.mode)
        self.ctx = KContext(self.schedule, self.registry, cfg.caps())

    def save(self) -> None:
        if self.cfg.registry:
            self.registry.save(self.cfg.registry)


def emit(cfg: RunConfig, payload: dict, text_lines: Optional[List[str]] = None) -> None:
    if cfg.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=1))
    else:
        for line in text_lines if text_lines is not None else _flatten_text(payload):
            print(line)


def _flatten_text(obj, prefix: str = "") -> List[str]:
    if isinstance(obj, dict):
        out = []
        for k in sorted(obj):
            out += _flatten_text(obj[k], f"{prefix}{k}.")
        return out
    if isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        out = []
        for i, v in enumerate(obj):
            out += _flatten_text(v, f"{prefix}{i}.")
        return out
    return [f"{prefix[:-1]}: {obj}"]


# -- commands ---------------------------------------------------------------

def cmd_mt_norm(args, cfg: RunConfig) -> int:
    sched = cfg.make_schedule()
    res = mt_norm_exact(parse_vector(args.vector), sched)
    emit(cfg, {"norm": show_rational(res.value), "effective_j": res.effective_j,
               "certificate": certificates.to_obj(res.certificate)},
         [f"norm: {show_rational(res.value)}", f"certificate: {certificates.dumps(res.certificate)}"])
    return EXIT_OK


def cmd_norm(args, cfg: RunConfig) -> int:
    s = Session(cfg)
    _register_specials(s, args.specials)
    br = gm_norm_bracket(parse_vector(args.vector), s.ctx, cfg.depth)
    emit(cfg, br.to_dict(), [f"lower: {show_rational(br.lower)}", f"upper: {show_rational(br.upper)}",
                             f"depth: {br.depthCap}", f"stable: {br.stable}",
                             f"certificate: {certificates.dumps(br.lowerCert)}"] +
         [f"caveat: {c}" for c in br.caveats])
    s.save()
    return EXIT_OK


def cmd_certify(args, cfg: RunConfig) -> int:
    s = Session(cfg)
    x = parse_vector(args.vector)
    try:
        cert = certificates.loads(Path(args.certificate).read_text())
    except (ValueError, KeyError, TypeError) as exc:
        print(f"invalid: unreadable certificate ({exc})")
        return EXIT_FAIL
    problems = s.ctx.validate_certificate(cert)
    if problems:
        print(f"invalid: {problems[0]}")
        return EXIT_FAIL
    value = certificates.evaluate_certificate(cert, x, s.schedule)
    print(f"valid: |x| >= {show_rational(abs(value))}")
    return EXIT_OK


def _register_specials(s: Session, count: int) -> None:
    for n in range(count):
        build_j_special(s.ctx, 1, 2 if n % 2 == 0 else min(4, s.schedule.n(1)))


def cmd_gen_k(args, cfg: RunConfig) -> int:
    s = Session(cfg)
    _register_specials(s, args.specials)
    generate_K(s.schedule, s.ctx.caps, ctx=s.ctx, budget=args.budget, sample=args.sample, seed=cfg.seed)
    if args.plant:
        s.ctx.plant(parse_vector(args.plant), 2)
    reports = [check_K1(s.ctx), check_K2(s.ctx), check_K3(s.ctx), check_tree_property(s.ctx)]
    payload = {"records": len(s.ctx.records), "exhaustive": s.ctx.exhaustive,
               "sequences": sorted(s.ctx.sequences),
               "checks": [{"name": r.name, "passed": r.passed, "checked": r.checked,
                           "violations": r.violations[:20], "caveats": r.caveats} for r in reports]}
    emit(cfg, payload, [f"records: {len(s.ctx.records)} (exhaustive: {s.ctx.exhaustive})"] +
         [r.line() for r in reports])
    s.save()
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_isometry(args, cfg: RunConfig) -> int:
    s = Session(cfg)
    _register_specials(s, args.specials)
    if args.vector:
        xs = [parse_vector(args.vector)]
    else:
        rng = random.Random(cfg.seed)
        xs = [random_rational(rng) for _ in range(args.random)]
    reps = [isometry_check(x, s.ctx, cfg.depth, sweep_specials=True) for x in xs]
    emit(cfg, {"reports": [r.to_dict() for r in reps], "passed": all(r.passed for r in reps)},
         [f"{r.x}: |x| = {show_rational(r.value_x)}, |Sx| = {show_rational(r.value_Sx)}, "
          f"{'ok' if r.passed else 'FAIL ' + r.problems[0]}" for r in reps])
    s.save()
    return EXIT_OK if all(r.passed for r in reps) else EXIT_FAIL


def cmd_special(args, cfg: RunConfig) -> int:
    s = Session(cfg)
    seq = build_j_special(s.ctx, args.j, args.length, start=args.start)
    problems = verify_special(seq, s.ctx)
    payload = {"id": seq.id, "j": seq.j, "weights": list(seq.weights), "ks": list(seq.ks),
               "members": [format_vector(f) for f in seq.members],
               "certificates": [certificates.to_obj(c) for c in seq.certificates], "notes": problems}
    emit(cfg, payload)
    s.save()
    return EXIT_OK


def cmd_depseq(args, cfg: RunConfig) -> int:
    s = Session(cfg, "desk")
    dep = build_dependent_sequence(args.j, s.ctx, k_cap=cfg.stability_k, depth=cfg.depth)
    emit(cfg, dep.to_dict(), [f"{k}: {'pass' if v.passed else 'FAIL'}" + "".join(f"; {c}" for c in v.caveats)
                              for k, v in dep.clauses.items()])
    s.save()
    return EXIT_OK if dep.ok else EXIT_FAIL


def cmd_witness(args, cfg: RunConfig) -> int:
    s = Session(cfg, "desk")
    if args.kind == "gap":
        w = make_ss_witness(args.j, unit_basis(), s.ctx, depth=cfg.depth)
        emit(cfg, w.to_dict())
        return EXIT_OK
    dep = build_dependent_sequence(args.j, s.ctx, k_cap=cfg.stability_k, depth=cfg.depth)
    wit = complementation_witness(dep, s.ctx, cfg.depth)
    payload = {"dependent": dep.to_dict(), "witness": wit.to_dict()}
    emit(cfg, payload, [f"|y+z| >= {show_rational(wit.plus_value)} (certificate)",
                        f"|y-z| in [{show_rational(wit.minus_bracket.lower)}, "
                        f"{show_rational(wit.minus_bracket.upper)}]",
                        f"ratio {show_rational(wit.ratio)}; reference 240/m^2 = {show_rational(wit.reference)}"])
    s.save()
    return EXIT_OK if dep.ok else EXIT_FAIL


def cmd_registry(args, cfg: RunConfig) -> int:
    s = Session(cfg)
    if args.action == "export":
        sys.stdout.write(s.registry.dumps())
        return EXIT_OK
    emit(cfg, {"entries": len(s.registry), "injective": s.registry.is_injective(), "mode": s.registry.mode,
               "values": sorted(s.registry.entries.values())})
    return EXIT_OK


def cmd_selftest(args, cfg: RunConfig) -> int:
    reg_path = Path(cfg.registry) if cfg.registry else None
    reg = SigmaRegistry.load(reg_path, COMPACT) if reg_path and reg_path.exists() else SigmaRegistry(COMPACT)
    results = run_all(cfg.seed, args.quick, reg, args.skip_determinism)
    for r in results:
        print(r.line(args.timings))
    if reg_path:
        reg.save(reg_path)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_report(args, cfg: RunConfig) -> int:
    from . import plotting
    from .schedule import compact, desk

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    s = Session(cfg, "desk")
    dep = build_dependent_sequence(1, s.ctx, k_cap=min(cfg.stability_k, 1), depth=cfg.depth)
    wit = complementation_witness(dep, s.ctx, cfg.depth)
    files = plotting.plot_pair_brackets(dep, s.ctx, out, cfg.depth)
    files += plotting.plot_witness(wit, out)
    files += plotting.plot_weight_profile(weight_profile(wit.y - wit.z, s.ctx, cfg.depth), s.schedule, out,
                                          "weight_profile_y_minus_z")
    iso_ctx = KContext(compact(), caps=cfg.caps())
    build_j_special(iso_ctx, 1, 2, start=1)
    files += plotting.plot_isometry(iso_ctx, out, seed=cfg.seed)
    files += plotting.plot_gap([compact(), desk()], out)
    (out / "witness.json").write_text(json.dumps({"dependent": dep.to_dict(), "witness": wit.to_dict()},
                                                 sort_keys=True, indent=1))
    files.append(out / "witness.json")
    s.save()
    for f in files:
        print(f)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    def common(suppress: bool) -> argparse.ArgumentParser:
        # the shared flags work before or after the command name
        c = argparse.ArgumentParser(add_help=False)
        kw = {"default": argparse.SUPPRESS} if suppress else {}
        c.add_argument("--config", help="JSON run configuration", **kw)
        c.add_argument("--mode", choices=["compact", "conforming"], help="schedule mode", **kw)
        c.add_argument("--preset", choices=["compact", "conforming", "desk"], help="named schedule", **kw)
        c.add_argument("--gen-cap", type=int, **kw)
        c.add_argument("--supp-cap", type=int, **kw)
        c.add_argument("--weight-cap", type=int, **kw)
        c.add_argument("--depth", type=int, **kw)
        c.add_argument("--seed", type=int, **kw)
        c.add_argument("--registry", help="sigma registry file, loaded and saved around the command", **kw)
        c.add_argument("--format", choices=["json", "text"], **kw)
        c.add_argument("-v", "--verbose", action="store_true", **kw)
        return c

    p = argparse.ArgumentParser(prog="gmspace", description=__doc__.splitlines()[0], parents=[common(False)])
    shared = common(True)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("mt-norm", parents=[shared], help="exact mixed Tsirelson norm")
    c.add_argument("vector")
    c.set_defaults(func=cmd_mt_norm)
    c = sub.add_parser("norm", parents=[shared], help="certified bracket of the norm over the context")
    c.add_argument("vector")
    c.add_argument("--specials", type=int, default=0, help="register this many 1-special sequences first")
    c.set_defaults(func=cmd_norm)
    c = sub.add_parser("certify", parents=[shared], help="check a certificate file against a vector")
    c.add_argument("vector")
    c.add_argument("certificate")
    c.set_defaults(func=cmd_certify)
    c = sub.add_parser("gen-k", parents=[shared], help="generate K within caps and run the closure checks")
    c.add_argument("--specials", type=int, default=2)
    c.add_argument("--budget", type=int, default=20000)
    c.add_argument("--sample", type=int, default=300)
    c.add_argument("--plant", help="functional to inject as a negative control")
    c.set_defaults(func=cmd_gen_k)
    c = sub.add_parser("isometry", parents=[shared], help="compare |x| and |Sx| with transferred certificates")
    c.add_argument("vector", nargs="?")
    c.add_argument("--random", type=int, default=20)
    c.add_argument("--specials", type=int, default=2)
    c.set_defaults(func=cmd_isometry)
    c = sub.add_parser("special", parents=[shared], help="build and register a j-special sequence")
    c.add_argument("j", type=int)
    c.add_argument("--length", type=int, default=2)
    c.add_argument("--start", type=int)
    c.set_defaults(func=cmd_special)
    c = sub.add_parser("depseq", parents=[shared], help="build and verify a dependent sequence (default preset desk)")
    c.add_argument("j", type=int)
    c.set_defaults(func=cmd_depseq)
    c = sub.add_parser("witness", parents=[shared], help="gap vector or complementation witness bundle")
    c.add_argument("j", type=int)
    c.add_argument("--kind", choices=["complementation", "gap"], default="complementation")
    c.set_defaults(func=cmd_witness)
    c = sub.add_parser("registry", parents=[shared], help="inspect or export the sigma registry")
    c.add_argument("action", choices=["inspect", "export"])
    c.set_defaults(func=cmd_registry)
    c = sub.add_parser("selftest", parents=[shared], help="run the acceptance criteria")
    c.add_argument("--quick", action="store_true", help="reduced corpus sizes")
    c.add_argument("--skip-determinism", action="store_true")
    c.add_argument("--timings", action="store_true", help="append run times (breaks byte-identity)")
    c.set_defaults(func=cmd_selftest)
    c = sub.add_parser("report", parents=[shared], help="render figures and CSV tables")
    c.add_argument("--out", default="report")
    c.set_defaults(func=cmd_report)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args)
    except (ValueError, OSError, ScheduleError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args, cfg)
    except (CapacityError, ResourceError) as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ScheduleError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (ValueError, SigmaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"assertion failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
