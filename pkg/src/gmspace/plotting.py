"""Report figures and their CSV twins.

Every figure is written next to a CSV holding exactly the plotted numbers,
so the picture can always be checked against data.
"""
from __future__ import annotations

import csv
import random
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .constructions import DependentSequence, ComplementationWitness  # noqa: E402
from .engine import gm_norm_bracket, isometry_check  # noqa: E402
from .norming import KContext  # noqa: E402
from .schedule import ParameterSchedule  # noqa: E402

plt.rcParams.update({"font.size": 9, "axes.spines.top": False, "axes.spines.right": False,
                     "figure.figsize": (5.0, 3.2), "savefig.dpi": 120})


def _write_csv(path: Path, header: Sequence[str], rows: List[Sequence]) -> Path:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_cell(c) for c in r])
    return path


def _cell(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return str(c)


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    # fixed metadata keeps repeated reports byte-identical
    fig.savefig(path, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_pair_brackets(dep: DependentSequence, ctx: KContext, out: Path, depth: int = 3) -> List[Path]:
    rows = []
    for n, x in enumerate(dep.xs, 1):
        br = gm_norm_bracket(x, ctx, depth)
        rows.append((n, dep.js[(n - 1) // 2], br.lower, br.upper))
    csv_path = _write_csv(out / "pair_brackets.csv", ["pair", "weight_index", "lower", "upper"], rows)
    fig, ax = plt.subplots()
    xs = [r[0] for r in rows]
    lo = [float(r[2]) for r in rows]
    hi = [float(r[3]) for r in rows]
    ax.vlines(xs, lo, hi, color="0.3", lw=3)
    ax.scatter(xs, lo, color="k", zorder=3, label="certified lower")
    ax.axhline(1, color="tab:blue", ls=":", lw=1)
    ax.axhline(6, color="tab:red", ls=":", lw=1)
    ax.set_xticks(xs)
    ax.set_xlabel("pair")
    ax.set_ylabel("norm bracket")
    ax.set_title("exact pairs of the dependent sequence")
    ax.legend(frameon=False)
    return [csv_path, _save(fig, out / "pair_brackets.png")]


def plot_witness(wit: ComplementationWitness, out: Path) -> List[Path]:
    rows = [("y+z", wit.plus_bracket.lower, wit.plus_bracket.upper),
            ("y-z", wit.minus_bracket.lower, wit.minus_bracket.upper)]
    csv_path = _write_csv(out / "witness.csv", ["vector", "lower", "upper"], rows)
    extra = _write_csv(out / "witness_ratio.csv", ["ratio_upper_minus_over_lower_plus", "reference_240_over_m2"],
                       [(wit.ratio, wit.reference)])
    fig, ax = plt.subplots()
    for k, (name, lo, hi) in enumerate(rows):
        ax.bar(k, float(hi - lo), bottom=float(lo), width=0.5, color="0.75", edgecolor="k")
        ax.plot([k - 0.25, k + 0.25], [float(lo)] * 2, color="k")
    ax.set_xticks([0, 1])
    ax.set_xticklabels([r[0] for r in rows])
    ax.set_ylabel("norm bracket")
    ax.set_title(f"ratio {float(wit.ratio):.3g} against reference {float(wit.reference):.3g}")
    return [csv_path, extra, _save(fig, out / "witness.png")]


def plot_weight_profile(profile: Dict[int, Fraction], sched: ParameterSchedule, out: Path, name: str) -> List[Path]:
    rows = [(w, sched.m(w), v) for w, v in sorted(profile.items())]
    csv_path = _write_csv(out / f"{name}.csv", ["weight_index", "m", "best_value"], rows)
    fig, ax = plt.subplots()
    ax.bar([str(r[0]) for r in rows], [float(r[2]) for r in rows], color="0.5")
    ax.set_xlabel("top weight index")
    ax.set_ylabel("largest |f(x)|")
    ax.set_title(name.replace("_", " "))
    return [csv_path, _save(fig, out / f"{name}.png")]


def plot_isometry(ctx: KContext, out: Path, count: int = 60, seed: int = 0) -> List[Path]:
    from .acceptance import random_rational

    rng = random.Random(seed)
    rows = []
    for n in range(count):
        rep = isometry_check(random_rational(rng), ctx)
        rows.append((n, rep.value_x, rep.value_Sx, rep.passed))
    csv_path = _write_csv(out / "isometry.csv", ["sample", "norm_x", "norm_Sx", "passed"], rows)
    fig, ax = plt.subplots(figsize=(3.6, 3.4))
    a = [float(r[1]) for r in rows]
    b = [float(r[2]) for r in rows]
    ax.scatter(a, b, s=10, color="k")
    top = max(a + b) * 1.05
    ax.plot([0, top], [0, top], color="tab:blue", lw=0.8)
    ax.set_xlabel("|x|")
    ax.set_ylabel("|Sx|")
    ax.set_title("spreading is an isometry")
    return [csv_path, _save(fig, out / "isometry.png")]


def plot_gap(schedules: Sequence[ParameterSchedule], out: Path, upto: int = 4) -> List[Path]:
    rows = []
    for s in schedules:
        for j in range(1, upto + 1):
            rows.append((s.name, j, Fraction(s.m(2 * j), s.n(2 * j))))
    csv_path = _write_csv(out / "gap.csv", ["schedule", "j", "sup_over_norm"], rows)
    fig, ax = plt.subplots()
    for s in schedules:
        pts = [r for r in rows if r[0] == s.name]
        ax.plot([r[1] for r in pts], [float(r[2]) for r in pts], marker="o", label=s.name)
    ax.set_yscale("log")
    ax.set_xlabel("j")
    ax.set_ylabel("|x|_inf / |x|")
    ax.set_title("gap vectors m_2j / n_2j")
    ax.legend(frameon=False)
    return [csv_path, _save(fig, out / "gap.png")]
