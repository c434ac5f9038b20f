"""Gate-level IR, QAOA circuit synthesis, gate census, transpilation, QASM I/O."""

from .ir import AngleSchedule, Circuit, GateCensus, GateOp, census
from .build import (
    build_clause_ps,
    build_measurement_uncompute,
    build_qaoa_circuit,
)
from .transpile import CX_SET, RZZ_SET, transpile
from .qasm import (
    circuit_from_json,
    circuit_to_json,
    emit_qasm2,
    emit_qasm3,
    parse_qasm2,
)

__all__ = [
    "AngleSchedule",
    "Circuit",
    "GateCensus",
    "GateOp",
    "census",
    "build_clause_ps",
    "build_measurement_uncompute",
    "build_qaoa_circuit",
    "CX_SET",
    "RZZ_SET",
    "transpile",
    "circuit_from_json",
    "circuit_to_json",
    "emit_qasm2",
    "emit_qasm3",
    "parse_qasm2",
]
