"""QAOA angle search: basin-hopping around backtracking gradient ascent.

Each hop perturbs the incumbent with a Gaussian step (sigma 0.3 rad), wraps
angles into gamma in [0, 2pi) and beta in [0, pi) (exact periods of the
objective), runs a local ascent, and accepts only improvements, so results
are reproducible and the per-hop trace is monotone.  Sweeps over increasing
round counts warm-start each p from the previous optimum extended by a
(0, 0) round, which preserves the expectation exactly and makes the ideal
curve non-decreasing in p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .circuit.ir import AngleSchedule
from .errors import NumericalFailureError
from .fastsim import cost_table, expectation, gradient
from .sat import KSatInstance, brute_force_optimum

GRAD_TOL = 1e-7
MAX_DESCENT_ITERS = 500
HOP_SIGMA = 0.3
DEFAULT_HOPS = 10
STOP_RATIO = 0.999
_ARMIJO_C = 1e-4
_MIN_STEP = 1e-14


@dataclass(frozen=True)
class OptimizationResult:
    """Best angles found for one (instance, p) search."""

    angles: AngleSchedule
    expectation: float
    ideal_ratio: float
    iterations: int
    seed: int | None
    trace: tuple[float, ...]


def wrap_angles(vec: np.ndarray) -> np.ndarray:
    """Wrap (gammas, betas) into [0, 2pi) x [0, pi); both are exact periods."""
    p = vec.size // 2
    out = vec.copy()
    out[:p] = np.mod(out[:p], 2.0 * math.pi)
    out[p:] = np.mod(out[p:], math.pi)
    return out


def default_init(p: int) -> AngleSchedule:
    """Small positive angles; zero is a stationary point in every gamma."""
    return AngleSchedule(gammas=(0.1,) * p, betas=(0.1,) * p)


def warm_start(prev: OptimizationResult) -> AngleSchedule:
    """Extend a p-round optimum to p+1 rounds by an identity (0, 0) round."""
    return AngleSchedule(
        gammas=(*prev.angles.gammas, 0.0),
        betas=(*prev.angles.betas, 0.0),
    )


def _descent_with_trace(
    instance: KSatInstance,
    init: AngleSchedule,
    values: np.ndarray,
    max_iters: int = MAX_DESCENT_ITERS,
    grad_tol: float = GRAD_TOL,
) -> tuple[AngleSchedule, list[float], int]:
    """Gradient ascent on <H_C> with Armijo backtracking line search.

    Returns (wrapped angles, objective values at accepted points, iterations).
    The objective sequence is non-decreasing by construction.
    """
    x = np.array(init.as_vector())
    f = expectation(instance, AngleSchedule.from_vector(x), values)
    if not math.isfinite(f):
        raise NumericalFailureError(f"non-finite objective {f} at init")
    trace = [f]
    step = 1.0
    iters = 0
    while iters < max_iters:
        g = gradient(instance, AngleSchedule.from_vector(x), values=values)
        if float(np.max(np.abs(g))) < grad_tol:
            break
        iters += 1
        g_sq = float(g @ g)
        t = step
        while t >= _MIN_STEP:
            cand = x + t * g
            f_cand = expectation(instance, AngleSchedule.from_vector(cand), values)
            if not math.isfinite(f_cand):
                raise NumericalFailureError("non-finite objective during line search")
            if f_cand >= f + _ARMIJO_C * t * g_sq:
                break
            t *= 0.5
        if t < _MIN_STEP:
            break
        x, f = cand, f_cand
        trace.append(f)
        step = min(t * 2.0, 1.0)
    return AngleSchedule.from_vector(wrap_angles(x)), trace, iters


def local_descent(
    instance: KSatInstance,
    init: AngleSchedule,
    values: np.ndarray | None = None,
) -> AngleSchedule:
    """Ascend <H_C> from ``init``; the result never undershoots the start."""
    if values is None:
        values = cost_table(instance)
    angles, _, _ = _descent_with_trace(instance, init, values)
    return angles


def basin_hopping(
    instance: KSatInstance,
    p: int,
    hops: int = DEFAULT_HOPS,
    seed: int | None = None,
    init: AngleSchedule | None = None,
    c_opt: int | None = None,
) -> OptimizationResult:
    """Monotone-acceptance basin-hopping; returns the best schedule ever seen."""
    values = cost_table(instance)
    if c_opt is None:
        c_opt = brute_force_optimum(instance)[0]
    rng = np.random.default_rng(seed)
    start = init if init is not None else default_init(p)

    best, _, iters = _descent_with_trace(instance, start, values)
    f_best = expectation(instance, best, values)
    trace = [f_best]
    for _ in range(hops):
        jitter = rng.normal(0.0, HOP_SIGMA, size=2 * p)
        perturbed = wrap_angles(np.array(best.as_vector()) + jitter)
        cand, _, it = _descent_with_trace(
            instance, AngleSchedule.from_vector(perturbed), values
        )
        iters += it
        f_cand = expectation(instance, cand, values)
        if f_cand > f_best:
            best, f_best = cand, f_cand
        trace.append(f_best)
    return OptimizationResult(
        angles=best,
        expectation=f_best,
        ideal_ratio=f_best / c_opt,
        iterations=iters,
        seed=seed,
        trace=tuple(trace),
    )


def sweep_rounds(
    instance: KSatInstance,
    p_max: int,
    p_min: int = 1,
    hops: int = DEFAULT_HOPS,
    seed: int | None = None,
    stop_ratio: float = STOP_RATIO,
    progress: Callable[[OptimizationResult, int], None] | None = None,
) -> list[OptimizationResult]:
    """Optimize p = p_min..p_max with warm-start chaining.

    Stops early once the ideal ratio exceeds ``stop_ratio``; the returned
    expectations are non-decreasing in p.
    """
    c_opt = brute_force_optimum(instance)[0]
    results: list[OptimizationResult] = []
    prev: OptimizationResult | None = None
    for p in range(p_min, p_max + 1):
        init = warm_start(prev) if prev is not None and prev.angles.p == p - 1 else None
        result = basin_hopping(instance, p, hops=hops, seed=seed, init=init, c_opt=c_opt)
        if prev is not None and result.expectation < prev.expectation:
            # angle wrapping can cost ~1e-15 when a hop barely moves; pin the
            # warm-started value so the curve stays exactly monotone
            result = OptimizationResult(
                angles=warm_start(prev),
                expectation=prev.expectation,
                ideal_ratio=prev.ideal_ratio,
                iterations=result.iterations,
                seed=seed,
                trace=result.trace,
            )
        results.append(result)
        if progress is not None:
            progress(result, p)
        prev = result
        if result.ideal_ratio > stop_ratio:
            break
    return results


# ---------------------------------------------------------------------------
# Angle-schedule JSON (interchange with circuit building and benchmarking)
# ---------------------------------------------------------------------------

def result_to_json(result: OptimizationResult, instance_id: str) -> dict:
    return {
        "instance_id": instance_id,
        "p": result.angles.p,
        "gammas": list(result.angles.gammas),
        "betas": list(result.angles.betas),
        "expectation": result.expectation,
        "ideal_ratio": result.ideal_ratio,
        "seed": result.seed,
    }


def schedule_from_json(data: dict) -> AngleSchedule:
    return AngleSchedule(
        gammas=tuple(float(g) for g in data["gammas"]),
        betas=tuple(float(b) for b in data["betas"]),
    )
