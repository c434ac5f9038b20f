"""Circuit intermediate representation and gate census.

Angle conventions, fixed package-wide:
    Rz(t)  = exp(-i t Z / 2)          Rx(t) = exp(-i t X / 2)
    Ry(t)  = exp(-i t Y / 2)          Rzz(t) = exp(-i t (Z x Z) / 2)
so Rzz(2g) = exp(-i g ZZ) and Rx(2b) = exp(-i b X).  All circuit
equivalences in this package are understood modulo global phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from ..errors import BuilderError, InvalidParametersError

ONE_QUBIT_GATES = frozenset({"h", "x", "z", "s", "sdg", "t", "tdg", "rx", "ry", "rz"})
TWO_QUBIT_GATES = frozenset({"cx", "cz", "rzz"})
PARAMETRIC_GATES = frozenset({"rx", "ry", "rz", "rzz"})
NON_UNITARY = frozenset({"measure", "reset"})
ALL_KINDS = ONE_QUBIT_GATES | TWO_QUBIT_GATES | NON_UNITARY


@dataclass(frozen=True)
class GateOp:
    """One circuit operation.

    ``condition`` names a classical bit that must read 1 for the op to apply
    (classical feed-forward).  ``clbit`` is the destination of a measure.
    """

    kind: str
    qubits: tuple[int, ...]
    param: float | None = None
    clbit: int | None = None
    condition: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in ALL_KINDS:
            raise BuilderError(f"unknown gate kind {self.kind!r}")
        arity = 2 if self.kind in TWO_QUBIT_GATES else 1
        if len(self.qubits) != arity:
            raise BuilderError(f"{self.kind} expects {arity} qubit(s), got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise BuilderError(f"{self.kind} qubits must be distinct: {self.qubits}")
        if self.kind in PARAMETRIC_GATES:
            if self.param is None or not math.isfinite(self.param):
                raise BuilderError(f"{self.kind} needs a finite angle, got {self.param}")
        elif self.param is not None:
            raise BuilderError(f"{self.kind} takes no angle")
        if self.kind == "measure":
            if self.clbit is None:
                raise BuilderError("measure needs a classical bit target")
        elif self.clbit is not None:
            raise BuilderError(f"{self.kind} cannot write a classical bit")

    @property
    def is_two_qubit(self) -> bool:
        return self.kind in TWO_QUBIT_GATES

    @property
    def is_unitary(self) -> bool:
        return self.kind not in NON_UNITARY


@dataclass(frozen=True)
class Circuit:
    """Ordered gate list over ``num_qubits`` wires and ``num_clbits`` bits.

    Circuits are immutable; builders produce the full op tuple up front.
    Validation checks index ranges and that every condition bit was written
    by an earlier measure.
    """

    num_qubits: int
    num_clbits: int
    ops: tuple[GateOp, ...]
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        written: set[int] = set()
        for op in self.ops:
            for q in op.qubits:
                if not 0 <= q < self.num_qubits:
                    raise BuilderError(f"qubit {q} outside width {self.num_qubits}")
            if op.clbit is not None and not 0 <= op.clbit < self.num_clbits:
                raise BuilderError(f"clbit {op.clbit} outside {self.num_clbits}")
            if op.condition is not None:
                if not 0 <= op.condition < self.num_clbits:
                    raise BuilderError(f"condition bit {op.condition} out of range")
                if op.condition not in written:
                    raise BuilderError(
                        f"condition bit {op.condition} read before any measure wrote it"
                    )
            if op.kind == "measure":
                written.add(op.clbit)

    def terminal_measure_start(self) -> int:
        """Index where the trailing block of measure ops begins (== len(ops) if none)."""
        i = len(self.ops)
        while i > 0 and self.ops[i - 1].kind == "measure":
            i -= 1
        return i

    def has_mid_circuit_measurement(self) -> bool:
        cut = self.terminal_measure_start()
        return any(op.kind == "measure" for op in self.ops[:cut])


@dataclass(frozen=True)
class AngleSchedule:
    """QAOA angles for p rounds: per-round phase angles and mixer angles."""

    gammas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.gammas) != len(self.betas) or not self.gammas:
            raise InvalidParametersError(
                f"need equal, nonempty angle vectors, got {len(self.gammas)} and {len(self.betas)}"
            )
        for v in (*self.gammas, *self.betas):
            if not math.isfinite(v):
                raise InvalidParametersError(f"non-finite angle {v}")

    @property
    def p(self) -> int:
        return len(self.gammas)

    def as_vector(self) -> tuple[float, ...]:
        """Flat (gamma_1..gamma_p, beta_1..beta_p) parameter vector."""
        return (*self.gammas, *self.betas)

    @classmethod
    def from_vector(cls, vec: Iterable[float]) -> "AngleSchedule":
        vals = tuple(float(v) for v in vec)
        if len(vals) % 2:
            raise InvalidParametersError(f"angle vector length {len(vals)} is odd")
        p = len(vals) // 2
        return cls(gammas=vals[:p], betas=vals[p:])


@dataclass(frozen=True)
class GateCensus:
    """Gate totals and depth.

    ``one_qubit`` counts single-qubit unitaries plus measure/reset events;
    ``two_qubit`` counts cx, cz, rzz whether or not classically conditioned.
    Depth is the longest chain under qubit-sharing dependency, with measure
    and reset contributing one level on their qubit; classical wires do not
    create dependency edges.
    """

    one_qubit: int
    two_qubit: int
    depth: int


def census(circuit: Circuit) -> GateCensus:
    levels = [0] * circuit.num_qubits
    one = two = 0
    for op in circuit.ops:
        if op.is_two_qubit:
            two += 1
        else:
            one += 1
        level = max(levels[q] for q in op.qubits) + 1
        for q in op.qubits:
            levels[q] = level
    return GateCensus(one_qubit=one, two_qubit=two, depth=max(levels, default=0))
