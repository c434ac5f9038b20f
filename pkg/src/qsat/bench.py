"""Benchmark quantities: approximation ratios, random baselines, per-round
curves, p_max / p_noise extraction, and QAOA volume.

The random baseline evaluates 100k (by default) uniform assignments directly
against the clause list (vectorized per clause), independent of the fast
simulator's cost table.  Percentiles use the nearest-rank convention.
p_max is the smallest round count attaining the maximum mean ratio; p_noise
is the smallest p >= p_max whose mean falls to the baseline's 60th
percentile, or None if the curve never does (the error-corrected case).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidAssignmentError, InvalidParametersError
from .sat import KSatInstance, brute_force_optimum, evaluate


@dataclass(frozen=True)
class Baseline:
    """Uniform-random-sampling reference distribution of approximation ratios."""

    mean_ratio: float
    pct40: float
    pct60: float
    sample_count: int
    seed: int | None


@dataclass(frozen=True)
class CurvePoint:
    p: int
    mean_ratio: float
    pct40: float
    pct60: float
    sample_ratios: tuple[float, ...]
    source: str  # ideal | shots | external


@dataclass(frozen=True)
class BenchmarkCurve:
    points: tuple[CurvePoint, ...]
    instance_id: str
    n: int

    def __post_init__(self) -> None:
        ps = [pt.p for pt in self.points]
        if ps != sorted(set(ps)):
            raise InvalidParametersError(f"p values must be strictly increasing: {ps}")


def approximation_ratio(
    instance: KSatInstance, assignment: Sequence[int], c_opt: int | None = None
) -> float:
    """C(x) / C_opt, in [0, 1]."""
    if c_opt is None:
        c_opt = brute_force_optimum(instance)[0]
    return evaluate(instance, assignment) / c_opt


def _nearest_rank(sorted_vals: np.ndarray, pct: float) -> float:
    rank = max(1, math.ceil(pct / 100.0 * sorted_vals.size))
    return float(sorted_vals[rank - 1])


def _counts_for_samples(instance: KSatInstance, draws: np.ndarray) -> np.ndarray:
    """Satisfied-clause counts for an array of basis-index samples."""
    counts = np.full(draws.size, instance.m, dtype=np.int32)
    for clause in instance.clauses:
        unsat = np.ones(draws.size, dtype=bool)
        for lit, want in zip(clause.literals, clause.unsat_pattern()):
            unsat &= ((draws >> lit.var) & 1) == want
        counts[unsat] -= 1
    return counts


def random_baseline(
    instance: KSatInstance,
    samples: int = 100_000,
    seed: int | None = None,
    c_opt: int | None = None,
) -> Baseline:
    """Approximation-ratio statistics of uniform random assignments."""
    if samples < 1:
        raise InvalidParametersError(f"need at least one sample, got {samples}")
    if c_opt is None:
        c_opt = brute_force_optimum(instance)[0]
    rng = np.random.default_rng(seed)
    draws = rng.integers(0, 1 << instance.n, size=samples, dtype=np.int64)
    ratios = _counts_for_samples(instance, draws) / c_opt
    ordered = np.sort(ratios)
    return Baseline(
        mean_ratio=float(ratios.mean()),
        pct40=_nearest_rank(ordered, 40.0),
        pct60=_nearest_rank(ordered, 60.0),
        sample_count=samples,
        seed=seed,
    )


def curve_from_shots(
    instance: KSatInstance,
    per_p_shots: dict[int, Sequence[str]],
    source: str = "shots",
    c_opt: int | None = None,
) -> BenchmarkCurve:
    """Per-round ratio statistics from measured bitstrings.

    ``per_p_shots`` maps round count to bitstrings (character i = variable i).
    """
    if c_opt is None:
        c_opt = brute_force_optimum(instance)[0]
    points = []
    for p in sorted(per_p_shots):
        ratios = []
        for bits in per_p_shots[p]:
            if len(bits) != instance.n:
                raise InvalidAssignmentError(
                    f"bitstring length {len(bits)} != n={instance.n}"
                )
            assignment = tuple(int(ch) for ch in bits)
            ratios.append(evaluate(instance, assignment) / c_opt)
        arr = np.sort(np.array(ratios))
        points.append(
            CurvePoint(
                p=p,
                mean_ratio=float(np.mean(arr)),
                pct40=_nearest_rank(arr, 40.0),
                pct60=_nearest_rank(arr, 60.0),
                sample_ratios=tuple(float(r) for r in ratios),
                source=source,
            )
        )
    return BenchmarkCurve(
        points=tuple(points), instance_id=instance.instance_id(), n=instance.n
    )


def curve_from_ideal(
    instance: KSatInstance, per_p_ratio: dict[int, float]
) -> BenchmarkCurve:
    """Curve of exact (shot-free) expectation ratios."""
    points = tuple(
        CurvePoint(
            p=p,
            mean_ratio=float(per_p_ratio[p]),
            pct40=float(per_p_ratio[p]),
            pct60=float(per_p_ratio[p]),
            sample_ratios=(float(per_p_ratio[p]),),
            source="ideal",
        )
        for p in sorted(per_p_ratio)
    )
    return BenchmarkCurve(
        points=points, instance_id=instance.instance_id(), n=instance.n
    )


def extract_p_max(curve: BenchmarkCurve) -> int:
    """Smallest p attaining the maximum mean ratio."""
    if not curve.points:
        raise InvalidParametersError("empty curve")
    best = max(pt.mean_ratio for pt in curve.points)
    return min(pt.p for pt in curve.points if pt.mean_ratio == best)


def extract_p_noise(curve: BenchmarkCurve, baseline: Baseline) -> int | None:
    """Smallest p >= p_max where the mean falls to the baseline's 60th
    percentile; None when the curve never does."""
    p_peak = extract_p_max(curve)
    for pt in curve.points:
        if pt.p >= p_peak and pt.mean_ratio <= baseline.pct60:
            return pt.p
    return None


def qaoa_volume(n: int, p: int) -> int:
    return n * p


# ---------------------------------------------------------------------------
# Shots JSONL, results CSV, and SVG chart emission
# ---------------------------------------------------------------------------

def shots_to_jsonl(records: Iterable[dict]) -> str:
    """One JSON object per line: {p?, bitstring, ancilla_outcomes, seed}."""
    return "".join(json.dumps(rec, sort_keys=True) + "\n" for rec in records)


def shots_from_jsonl(text: str, default_p: int | None = None) -> dict[int, list[str]]:
    """Group shot records by round count.

    Records lacking a "p" key fall back to ``default_p``; a missing p with no
    default is an error, since curves are per-round.
    """
    grouped: dict[int, list[str]] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        rec = json.loads(line)
        p = rec.get("p", default_p)
        if p is None:
            raise InvalidParametersError(
                f"shot record on line {line_no} has no round count and no default was given"
            )
        grouped.setdefault(int(p), []).append(rec["bitstring"])
    return grouped


def curve_to_csv(curve: BenchmarkCurve, baseline: Baseline | None = None) -> str:
    header = "p,mean_ratio,pct40,pct60,n_shots,source"
    if baseline is not None:
        header += ",baseline_mean,baseline_pct40,baseline_pct60"
    rows = [header]
    for pt in curve.points:
        row = (
            f"{pt.p},{pt.mean_ratio:.10g},{pt.pct40:.10g},{pt.pct60:.10g},"
            f"{len(pt.sample_ratios)},{pt.source}"
        )
        if baseline is not None:
            row += (
                f",{baseline.mean_ratio:.10g},{baseline.pct40:.10g},"
                f"{baseline.pct60:.10g}"
            )
        rows.append(row)
    return "\n".join(rows) + "\n"


def curve_to_svg(
    curves: Sequence[BenchmarkCurve],
    baseline: Baseline,
    path: str,
    title: str = "",
) -> None:
    """Render approximation ratio vs rounds with the random-sampling band."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(7, 4.5))
    all_ps = sorted({pt.p for curve in curves for pt in curve.points})
    ax.axhspan(baseline.pct40, baseline.pct60, color="cyan", alpha=0.35,
               label="random 40th-60th pct")
    ax.axhline(baseline.mean_ratio, color="black", linestyle="--", linewidth=1,
               label="random mean")
    palette = {"ideal": "tab:red", "shots": "tab:blue", "external": "tab:green"}
    for curve in curves:
        src = curve.points[0].source if curve.points else "shots"
        color = palette.get(src, "tab:gray")
        ps = [pt.p for pt in curve.points]
        means = [pt.mean_ratio for pt in curve.points]
        ax.plot(ps, means, marker="o", color=color, label=f"{src} mean")
        if src != "ideal":
            for pt in curve.points:
                ax.scatter([pt.p] * len(pt.sample_ratios), pt.sample_ratios,
                           color=color, s=6, alpha=0.25)
            lo = [max(0.0, pt.mean_ratio - pt.pct40) for pt in curve.points]
            hi = [max(0.0, pt.pct60 - pt.mean_ratio) for pt in curve.points]
            ax.errorbar(ps, means, yerr=[lo, hi], fmt="none", ecolor=color,
                        alpha=0.6, capsize=2)
    ax.set_xlabel("rounds p")
    ax.set_ylabel("approximation ratio")
    if all_ps:
        ax.set_xticks(all_ps)
    if title:
        ax.set_title(title)
    ax.legend(loc="lower left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
