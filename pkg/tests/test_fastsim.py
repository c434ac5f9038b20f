"""Fast diagonal simulator: cost tables, evolution, expectations, gradients."""

import numpy as np
import pytest

from oracles import max_dev_up_to_phase
from qsat import fastsim
from qsat.circuit.build import build_qaoa_circuit
from qsat.circuit.ir import AngleSchedule
from qsat.errors import TooLargeError
from qsat.sat import assignment_to_index, brute_force_optimum, generate_random_ksat
from qsat.simulator import exact_expectation_gate_level, run

# frozen regression: analytic warm-start direction on the seed-17 n=6 instance
# (p=1 basin-hopping optimum with hops=10, seed=1, then an appended (0,0) round),
# confirmed against the finite-difference oracle at h=1e-6
WARM_START_BETA2_GRAD = 1.7878588565167775e-07


def test_cost_table_worked_example(worked_example):
    values = fastsim.cost_table(worked_example)
    assert values[assignment_to_index((0, 1, 0))] == 4
    assert values[assignment_to_index((1, 0, 0))] == 3
    assert values.dtype == np.int16


def test_cost_table_single_clause_zero_count(single_clause_n3):
    values = fastsim.cost_table(single_clause_n3)
    n, k = single_clause_n3.n, single_clause_n3.k
    assert int(np.sum(values == 0)) == 2 ** (n - k)


def test_cost_table_max_equals_brute_force(seeded_n6):
    values = fastsim.cost_table(seeded_n6)
    c_opt, _ = brute_force_optimum(seeded_n6)
    assert int(values.max()) == c_opt


def test_cost_table_mean_is_exact(seeded_n6):
    values = fastsim.cost_table(seeded_n6)
    assert float(values.mean()) == seeded_n6.m * (1 - 2.0**-3)


def test_cost_table_cap():
    inst = generate_random_ksat(8, 3, 4, 0)
    with pytest.raises(TooLargeError):
        fastsim.cost_table(inst, cap=6)


def test_qaoa_state_zero_angles_uniform(worked_example):
    amps = fastsim.qaoa_state(
        worked_example, AngleSchedule(gammas=(0.0,), betas=(0.0,))
    )
    assert np.max(np.abs(amps - 2.0**-1.5)) <= 1e-15


def test_phase_only_round_preserves_magnitudes(seeded_n6):
    amps = fastsim.qaoa_state(
        seeded_n6, AngleSchedule(gammas=(1.234,), betas=(0.0,))
    )
    assert np.max(np.abs(np.abs(amps) ** 2 - 2.0**-6)) <= 1e-14


def test_state_matches_gate_level_simulator(single_clause_n3):
    angles = AngleSchedule(gammas=(np.pi / 2,), betas=(np.pi / 8,))
    fast = fastsim.qaoa_state(single_clause_n3, angles)
    circ = build_qaoa_circuit(single_clause_n3, angles, measure=False)
    gate = run(circ).state.amps
    assert max_dev_up_to_phase(fast, gate) <= 1e-10


def test_cross_simulator_agreement_small_cases():
    rng = np.random.default_rng(12)
    for trial in range(6):
        k = 3 if trial % 2 == 0 else 4
        n = int(rng.integers(k, 7))
        inst = generate_random_ksat(n, k, 2.0, int(rng.integers(10**6)))
        p = int(rng.integers(1, 4))
        angles = AngleSchedule(
            gammas=tuple(rng.uniform(0, 2 * np.pi, p)),
            betas=tuple(rng.uniform(0, np.pi, p)),
        )
        circ = build_qaoa_circuit(inst, angles, measure=False)
        assert (
            abs(
                exact_expectation_gate_level(circ, inst)
                - fastsim.expectation(inst, angles)
            )
            <= 1e-9
        )


def test_butterfly_mixer_equals_gate_rx(worked_example):
    angles = AngleSchedule(gammas=(0.0,), betas=(0.77,))
    fast = fastsim.qaoa_state(worked_example, angles)
    circ = build_qaoa_circuit(worked_example, angles, measure=False)
    gate = run(circ).state.amps
    assert np.max(np.abs(fast - gate)) <= 1e-12


def test_expectation_uniform_value(seeded_n6):
    e = fastsim.expectation(seeded_n6, AngleSchedule(gammas=(0.0,), betas=(0.0,)))
    assert abs(e - seeded_n6.m * (1 - 2.0**-3)) <= 1e-12


def test_expectation_bounded_by_c_opt(seeded_n6):
    rng = np.random.default_rng(3)
    c_opt, _ = brute_force_optimum(seeded_n6)
    for _ in range(10):
        p = int(rng.integers(1, 4))
        angles = AngleSchedule(
            gammas=tuple(rng.uniform(0, 2 * np.pi, p)),
            betas=tuple(rng.uniform(0, np.pi, p)),
        )
        assert fastsim.expectation(seeded_n6, angles) <= c_opt + 1e-12


def test_identity_round_preserves_expectation(seeded_n6):
    angles = AngleSchedule(gammas=(0.9, 0.3), betas=(0.5, 0.2))
    extended = AngleSchedule(gammas=(0.9, 0.3, 0.0), betas=(0.5, 0.2, 0.0))
    assert (
        abs(
            fastsim.expectation(seeded_n6, angles)
            - fastsim.expectation(seeded_n6, extended)
        )
        <= 1e-12
    )


def test_periodicity(seeded_n6):
    base = AngleSchedule(gammas=(0.8, 1.1), betas=(0.4, 0.9))
    e = fastsim.expectation(seeded_n6, base)
    shifted_gamma = AngleSchedule(
        gammas=(0.8 + 2 * np.pi, 1.1), betas=(0.4, 0.9)
    )
    shifted_beta = AngleSchedule(gammas=(0.8, 1.1), betas=(0.4, 0.9 + np.pi))
    assert abs(fastsim.expectation(seeded_n6, shifted_gamma) - e) <= 1e-12
    assert abs(fastsim.expectation(seeded_n6, shifted_beta) - e) <= 1e-12


def test_gamma_gradient_vanishes_at_zero(seeded_n6):
    p = 2
    angles = AngleSchedule(gammas=(0.0,) * p, betas=(0.0,) * p)
    grad_fd = fastsim.gradient(seeded_n6, angles, method="fd", h=1e-6)
    grad_an = fastsim.gradient(seeded_n6, angles)
    assert np.max(np.abs(grad_fd[:p])) <= 1e-8
    assert np.max(np.abs(grad_an[:p])) <= 1e-12


def test_analytic_gradient_matches_finite_differences():
    rng = np.random.default_rng(9)
    worst = 0.0
    for seed in range(4):
        inst = generate_random_ksat(4, 3, 3.0, seed)
        angles = AngleSchedule(
            gammas=tuple(rng.uniform(0, 2 * np.pi, 3)),
            betas=tuple(rng.uniform(0, np.pi, 3)),
        )
        ga = fastsim.gradient(inst, angles)
        gf = fastsim.gradient(inst, angles, method="fd")
        worst = max(worst, float(np.max(np.abs(ga - gf))))
    assert worst <= 1e-6


def test_warm_start_gradient_regression(seeded_n6):
    from qsat import optimizer

    res1 = optimizer.basin_hopping(seeded_n6, p=1, hops=10, seed=1)
    warm = optimizer.warm_start(res1)
    grad = fastsim.gradient(seeded_n6, warm)
    assert grad[1] == pytest.approx(0.0, abs=1e-12)  # appended gamma direction
    assert grad[3] == pytest.approx(WARM_START_BETA2_GRAD, abs=1e-10)
    grad_fd = fastsim.gradient(seeded_n6, warm, method="fd", h=1e-6)
    assert abs(grad_fd[3] - grad[3]) <= 2e-9


def test_gradient_rejects_unknown_method(seeded_n6):
    with pytest.raises(ValueError):
        fastsim.gradient(
            seeded_n6, AngleSchedule(gammas=(0.1,), betas=(0.1,)), method="spsa"
        )
