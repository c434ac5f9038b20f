"""Angle search: local ascent, basin hopping, warm starts, sweeps."""

import math

import numpy as np
import pytest

from qsat import fastsim, optimizer
from qsat.circuit.ir import AngleSchedule
from qsat.sat import brute_force_optimum

# frozen: max of <H_C> over a 1000x1000 (gamma, beta) grid on
# [0, 2pi) x [0, pi) for the worked example at p = 1, computed with dense
# kron-product mixers independent of the fastsim butterfly
WORKED_EXAMPLE_P1_GRID_MAX = 3.940043107614


def test_local_descent_beats_uniform_baseline(single_clause_n3):
    init = AngleSchedule(gammas=(0.1,), betas=(0.1,))
    result = optimizer.local_descent(single_clause_n3, init)
    assert fastsim.expectation(single_clause_n3, result) > 7 / 8


def test_local_descent_fixed_point(single_clause_n3):
    init = AngleSchedule(gammas=(0.1,), betas=(0.1,))
    first = optimizer.local_descent(single_clause_n3, init)
    again = optimizer.local_descent(single_clause_n3, first)
    assert again == first


def test_local_descent_never_regresses(seeded_n6):
    rng = np.random.default_rng(8)
    values = fastsim.cost_table(seeded_n6)
    for _ in range(5):
        init = AngleSchedule(
            gammas=tuple(rng.uniform(0, 2 * np.pi, 2)),
            betas=tuple(rng.uniform(0, np.pi, 2)),
        )
        out = optimizer.local_descent(seeded_n6, init, values)
        assert (
            fastsim.expectation(seeded_n6, out)
            >= fastsim.expectation(seeded_n6, init) - 1e-12
        )


def test_descent_trace_is_monotone(seeded_n6):
    values = fastsim.cost_table(seeded_n6)
    init = AngleSchedule(gammas=(0.1, 0.1), betas=(0.1, 0.1))
    _, trace, _ = optimizer._descent_with_trace(seeded_n6, init, values)
    assert all(b >= a for a, b in zip(trace, trace[1:]))


def test_basin_hopping_matches_grid_oracle(worked_example):
    result = optimizer.basin_hopping(worked_example, p=1, hops=10, seed=5)
    assert abs(result.expectation - WORKED_EXAMPLE_P1_GRID_MAX) <= 1e-3
    assert result.expectation >= WORKED_EXAMPLE_P1_GRID_MAX - 1e-9


def test_basin_hopping_zero_hops_is_pure_descent(worked_example):
    result = optimizer.basin_hopping(worked_example, p=1, hops=0, seed=5)
    descent = optimizer.local_descent(worked_example, optimizer.default_init(1))
    assert result.angles == descent
    assert result.trace == (result.expectation,)


def test_basin_hopping_deterministic(seeded_n6):
    a = optimizer.basin_hopping(seeded_n6, p=2, hops=3, seed=9)
    b = optimizer.basin_hopping(seeded_n6, p=2, hops=3, seed=9)
    assert a == b


def test_result_invariants(seeded_n6):
    c_opt, _ = brute_force_optimum(seeded_n6)
    result = optimizer.basin_hopping(seeded_n6, p=2, hops=2, seed=4)
    assert 0.0 < result.expectation <= c_opt
    assert 0.0 < result.ideal_ratio <= 1.0
    assert abs(result.expectation - fastsim.expectation(seeded_n6, result.angles)) <= 1e-10
    for g in result.angles.gammas:
        assert 0.0 <= g < 2 * math.pi
    for b in result.angles.betas:
        assert 0.0 <= b < math.pi
    assert len(result.trace) == 3
    assert all(y >= x for x, y in zip(result.trace, result.trace[1:]))


def test_warm_start_preserves_expectation(seeded_n6):
    prev = optimizer.basin_hopping(seeded_n6, p=1, hops=2, seed=3)
    warm = optimizer.warm_start(prev)
    assert warm.p == 2
    assert fastsim.expectation(seeded_n6, warm) == prev.expectation


def test_warm_started_hops_only_improve(seeded_n6):
    prev = optimizer.basin_hopping(seeded_n6, p=1, hops=2, seed=3)
    nxt = optimizer.basin_hopping(
        seeded_n6, p=2, hops=2, seed=3, init=optimizer.warm_start(prev)
    )
    assert nxt.expectation >= prev.expectation


def test_p2_at_least_p1_on_worked_example(worked_example):
    r1 = optimizer.basin_hopping(worked_example, p=1, hops=3, seed=5)
    r2 = optimizer.basin_hopping(
        worked_example, p=2, hops=3, seed=5, init=optimizer.warm_start(r1)
    )
    assert r2.expectation >= r1.expectation


def test_sweep_monotone_and_early_stop(worked_example):
    results = optimizer.sweep_rounds(
        worked_example, p_max=8, hops=3, seed=2, stop_ratio=0.995
    )
    ratios = [r.ideal_ratio for r in results]
    assert all(b >= a for a, b in zip(ratios, ratios[1:]))
    if results[-1].ideal_ratio > 0.995:
        assert results[-1].angles.p <= 8


def test_wrap_angles():
    vec = np.array([2 * math.pi + 0.1, -0.2, math.pi + 0.3, -0.1])
    wrapped = optimizer.wrap_angles(vec)
    assert wrapped[0] == pytest.approx(0.1)
    assert wrapped[1] == pytest.approx(2 * math.pi - 0.2)
    assert wrapped[2] == pytest.approx(0.3)
    assert wrapped[3] == pytest.approx(math.pi - 0.1)


def test_schedule_json_round_trip(seeded_n6):
    result = optimizer.basin_hopping(seeded_n6, p=2, hops=1, seed=0)
    data = optimizer.result_to_json(result, seeded_n6.instance_id())
    assert set(data) == {
        "instance_id", "p", "gammas", "betas", "expectation", "ideal_ratio", "seed",
    }
    assert optimizer.schedule_from_json(data) == result.angles
