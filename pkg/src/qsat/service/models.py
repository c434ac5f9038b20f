"""Pydantic request/response models for the HTTP service.

The payloads mirror the on-disk interchange formats one-to-one: the instance
model is the instance JSON schema ({n, k, seed, clauses}), the schedule model
is the angle-schedule JSON, and shot records match the simulator's JSONL
lines, so files can be posted verbatim.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class InstancePayload(BaseModel):
    n: int
    k: int
    seed: Optional[int] = None
    clauses: list[list[int]]


class GenerateRequest(BaseModel):
    n: int
    k: int = 3
    density: float = 4.0
    seed: int = 0


class GenerateResponse(BaseModel):
    instance: InstancePayload
    instance_id: str
    dimacs: str
    m: int


class SolveResponse(BaseModel):
    instance_id: str
    c_opt: int
    optima: list[str]
    optima_count: int


class SchedulePayload(BaseModel):
    instance_id: str
    p: int
    gammas: list[float]
    betas: list[float]
    expectation: float
    ideal_ratio: float
    seed: Optional[int] = None


class OptimizeRequest(BaseModel):
    instance: InstancePayload
    p_min: int = 1
    p_max: int
    hops: int = 10
    seed: int = 0
    stop_ratio: float = 0.999


class OptimizeResponse(BaseModel):
    schedules: list[SchedulePayload]
    stopped_early: bool


class CensusPayload(BaseModel):
    one_qubit: int
    two_qubit: int
    depth: int
    num_qubits: int
    num_clbits: int


class BuildRequest(BaseModel):
    instance: InstancePayload
    gammas: list[float]
    betas: list[float]
    gateset: Literal["raw", "rzz", "cx"] = "raw"
    fmt: Literal["qasm2", "qasm3", "json"] = "qasm3"


class BuildResponse(BaseModel):
    census: CensusPayload
    fmt: str
    text: str


class SimulateRequest(BaseModel):
    instance: InstancePayload
    gammas: list[float]
    betas: list[float]
    shots: int = Field(default=40, ge=0)
    seed: int = 0


class ShotPayload(BaseModel):
    bitstring: str
    ancilla_outcomes: list[int] = Field(default_factory=list)
    seed: Optional[int] = None
    p: Optional[int] = None


class SimulateResponse(BaseModel):
    shots: list[ShotPayload]
    p: int


class BaselinePayload(BaseModel):
    mean_ratio: float
    pct40: float
    pct60: float
    sample_count: int
    seed: Optional[int] = None


class CurvePointPayload(BaseModel):
    p: int
    mean_ratio: float
    pct40: float
    pct60: float
    n_shots: int
    source: str


class BenchRequest(BaseModel):
    instance: InstancePayload
    schedules: list[SchedulePayload] = Field(default_factory=list)
    shot_records: list[ShotPayload] = Field(default_factory=list)
    shots: int = Field(default=0, ge=0, description="0 = exact ideal curve")
    seed: int = 0
    baseline_samples: int = 100_000
    baseline_seed: int = 0


class BenchResponse(BaseModel):
    instance_id: str
    c_opt: int
    curve: list[CurvePointPayload]
    baseline: BaselinePayload
    p_max: int
    p_noise: Optional[int]
    qaoa_volume: int
    csv: str


class HealthResponse(BaseModel):
    name: str
    version: str
