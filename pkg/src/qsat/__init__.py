"""QAOA circuit synthesis, exact simulation, and benchmarking for MAX k-SAT."""

__version__ = "0.1.0"

from .sat import (
    Clause,
    KSatInstance,
    Literal,
    brute_force_optimum,
    evaluate,
    generate_random_ksat,
)
from .circuit import AngleSchedule, Circuit, GateOp, build_qaoa_circuit, census

__all__ = [
    "__version__",
    "Clause",
    "KSatInstance",
    "Literal",
    "brute_force_optimum",
    "evaluate",
    "generate_random_ksat",
    "AngleSchedule",
    "Circuit",
    "GateOp",
    "build_qaoa_circuit",
    "census",
]
