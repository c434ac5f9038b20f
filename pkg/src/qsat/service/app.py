"""FastAPI application wrapping the core package.

Run with:  uvicorn qsat.service.app:app
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from ..errors import NumericalFailureError, QsatError
from . import handlers, models

app = FastAPI(
    title="qsat",
    description="QAOA circuits, exact simulation, and benchmarks for MAX k-SAT",
)


def _guard(fn, *args):
    try:
        return fn(*args)
    except NumericalFailureError as exc:
        raise HTTPException(status_code=500, detail=str(exc)) from exc
    except (QsatError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


@app.get("/health", response_model=models.HealthResponse)
def health() -> models.HealthResponse:
    return handlers.health()


@app.post("/instances/generate", response_model=models.GenerateResponse)
def generate(req: models.GenerateRequest) -> models.GenerateResponse:
    return _guard(handlers.generate, req)


@app.post("/instances/solve", response_model=models.SolveResponse)
def solve(req: models.InstancePayload) -> models.SolveResponse:
    return _guard(handlers.solve, req)


@app.post("/angles/optimize", response_model=models.OptimizeResponse)
def optimize(req: models.OptimizeRequest) -> models.OptimizeResponse:
    return _guard(handlers.optimize, req)


@app.post("/circuits/build", response_model=models.BuildResponse)
def build(req: models.BuildRequest) -> models.BuildResponse:
    return _guard(handlers.build, req)


@app.post("/simulate", response_model=models.SimulateResponse)
def simulate(req: models.SimulateRequest) -> models.SimulateResponse:
    return _guard(handlers.simulate, req)


@app.post("/bench", response_model=models.BenchResponse)
def run_bench(req: models.BenchRequest) -> models.BenchResponse:
    return _guard(handlers.run_bench, req)
