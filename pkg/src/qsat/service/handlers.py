"""Service operations: pure request -> response functions.

The FastAPI app and the CLI both call these, so command-line runs and HTTP
clients execute identical code paths.
"""

from __future__ import annotations

from .. import __version__, bench, fastsim, optimizer
from ..circuit import (
    AngleSchedule,
    build_qaoa_circuit,
    census,
    circuit_to_json,
    emit_qasm2,
    emit_qasm3,
    transpile,
)
from ..sat import (
    KSatInstance,
    brute_force_optimum,
    emit_dimacs,
    generate_random_ksat,
    instance_from_json,
    instance_to_json,
)
from ..simulator import sample
from . import models

import json


def _instance(payload: models.InstancePayload) -> KSatInstance:
    return instance_from_json(payload.model_dump())


def _instance_payload(instance: KSatInstance) -> models.InstancePayload:
    return models.InstancePayload(**instance_to_json(instance))


def generate(req: models.GenerateRequest) -> models.GenerateResponse:
    instance = generate_random_ksat(req.n, req.k, req.density, req.seed)
    return models.GenerateResponse(
        instance=_instance_payload(instance),
        instance_id=instance.instance_id(),
        dimacs=emit_dimacs(instance),
        m=instance.m,
    )


def solve(payload: models.InstancePayload) -> models.SolveResponse:
    instance = _instance(payload)
    c_opt, optima = brute_force_optimum(instance)
    bitstrings = sorted("".join(str(b) for b in assignment) for assignment in optima)
    return models.SolveResponse(
        instance_id=instance.instance_id(),
        c_opt=c_opt,
        optima=bitstrings[:1024],
        optima_count=len(bitstrings),
    )


def optimize(req: models.OptimizeRequest) -> models.OptimizeResponse:
    instance = _instance(req.instance)
    results = optimizer.sweep_rounds(
        instance,
        p_max=req.p_max,
        p_min=req.p_min,
        hops=req.hops,
        seed=req.seed,
        stop_ratio=req.stop_ratio,
    )
    instance_id = instance.instance_id()
    schedules = [
        models.SchedulePayload(**optimizer.result_to_json(res, instance_id))
        for res in results
    ]
    stopped_early = bool(results) and results[-1].angles.p < req.p_max
    return models.OptimizeResponse(schedules=schedules, stopped_early=stopped_early)


def build(req: models.BuildRequest) -> models.BuildResponse:
    instance = _instance(req.instance)
    angles = AngleSchedule(gammas=tuple(req.gammas), betas=tuple(req.betas))
    circuit = build_qaoa_circuit(instance, angles)
    if req.gateset != "raw":
        circuit = transpile(circuit, req.gateset)
    if req.fmt == "qasm2":
        text = emit_qasm2(circuit)
    elif req.fmt == "qasm3":
        text = emit_qasm3(circuit)
    else:
        text = json.dumps(circuit_to_json(circuit), indent=2, sort_keys=True) + "\n"
    counts = census(circuit)
    return models.BuildResponse(
        census=models.CensusPayload(
            one_qubit=counts.one_qubit,
            two_qubit=counts.two_qubit,
            depth=counts.depth,
            num_qubits=circuit.num_qubits,
            num_clbits=circuit.num_clbits,
        ),
        fmt=req.fmt,
        text=text,
    )


def simulate(req: models.SimulateRequest) -> models.SimulateResponse:
    instance = _instance(req.instance)
    angles = AngleSchedule(gammas=tuple(req.gammas), betas=tuple(req.betas))
    circuit = build_qaoa_circuit(instance, angles)
    records = sample(circuit, req.shots, seed=req.seed)
    return models.SimulateResponse(
        shots=[
            models.ShotPayload(
                bitstring=rec.bitstring,
                ancilla_outcomes=list(rec.ancilla_outcomes),
                seed=rec.seed,
                p=angles.p,
            )
            for rec in records
        ],
        p=angles.p,
    )


def run_bench(req: models.BenchRequest) -> models.BenchResponse:
    instance = _instance(req.instance)
    c_opt, _ = brute_force_optimum(instance)
    baseline = bench.random_baseline(
        instance, samples=req.baseline_samples, seed=req.baseline_seed, c_opt=c_opt
    )

    if req.shot_records:
        grouped: dict[int, list[str]] = {}
        for rec in req.shot_records:
            if rec.p is None:
                raise ValueError("externally supplied shots need a round count p")
            grouped.setdefault(rec.p, []).append(rec.bitstring)
        curve = bench.curve_from_shots(instance, grouped, source="external", c_opt=c_opt)
    elif req.schedules:
        if req.shots > 0:
            grouped = {}
            for sched in req.schedules:
                angles = optimizer.schedule_from_json(sched.model_dump())
                circuit = build_qaoa_circuit(instance, angles)
                records = sample(circuit, req.shots, seed=req.seed)
                grouped[angles.p] = [rec.bitstring for rec in records]
            curve = bench.curve_from_shots(instance, grouped, source="shots", c_opt=c_opt)
        else:
            per_p = {
                sched.p: fastsim.expectation(
                    instance, optimizer.schedule_from_json(sched.model_dump())
                )
                / c_opt
                for sched in req.schedules
            }
            curve = bench.curve_from_ideal(instance, per_p)
    else:
        raise ValueError("bench needs schedules or shot records")

    p_max = bench.extract_p_max(curve)
    p_noise = bench.extract_p_noise(curve, baseline)
    return models.BenchResponse(
        instance_id=instance.instance_id(),
        c_opt=c_opt,
        curve=[
            models.CurvePointPayload(
                p=pt.p,
                mean_ratio=pt.mean_ratio,
                pct40=pt.pct40,
                pct60=pt.pct60,
                n_shots=len(pt.sample_ratios),
                source=pt.source,
            )
            for pt in curve.points
        ],
        baseline=models.BaselinePayload(
            mean_ratio=baseline.mean_ratio,
            pct40=baseline.pct40,
            pct60=baseline.pct60,
            sample_count=baseline.sample_count,
            seed=baseline.seed,
        ),
        p_max=p_max,
        p_noise=p_noise,
        qaoa_volume=bench.qaoa_volume(instance.n, p_max),
        csv=bench.curve_to_csv(curve, baseline),
    )


def health() -> models.HealthResponse:
    return models.HealthResponse(name="qsat", version=__version__)
