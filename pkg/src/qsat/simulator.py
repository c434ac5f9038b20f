"""Exact gate-level statevector simulation.

Supports mid-circuit measurement with Born-rule collapse, qubit reset,
classically conditioned gates, and a branch-forcing mode that pins every
measurement outcome for deterministic verification of measurement-based
uncomputation.  Qubit 0 is the least significant bit of the basis index.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit.ir import Circuit, GateOp
from .errors import NumericalFailureError, TooLargeError
from .sat import KSatInstance, evaluate, index_to_assignment

SIM_QUBIT_CAP = 24
_NORM_GUARD = 1e-9

_SQ = 1.0 / math.sqrt(2.0)
_FIXED_1Q = {
    "h": np.array([[_SQ, _SQ], [_SQ, -_SQ]], dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "z": np.diag([1, -1]).astype(complex),
    "s": np.diag([1, 1j]).astype(complex),
    "sdg": np.diag([1, -1j]).astype(complex),
    "t": np.diag([1, np.exp(1j * np.pi / 4)]),
    "tdg": np.diag([1, np.exp(-1j * np.pi / 4)]),
}


def gate_matrix_1q(op: GateOp) -> np.ndarray:
    """Dense 2x2 matrix of a single-qubit unitary op."""
    if op.kind in _FIXED_1Q:
        return _FIXED_1Q[op.kind]
    t = op.param
    c, s = math.cos(t / 2.0), math.sin(t / 2.0)
    if op.kind == "rx":
        return np.array([[c, -1j * s], [-1j * s, c]])
    if op.kind == "ry":
        return np.array([[c, -s], [s, c]])
    if op.kind == "rz":
        return np.diag([np.exp(-0.5j * t), np.exp(0.5j * t)])
    raise ValueError(f"not a single-qubit unitary: {op.kind}")


@dataclass
class Statevector:
    """2^w complex amplitudes plus the classical bit file of one run."""

    amps: np.ndarray
    clbits: list[int]

    @property
    def num_qubits(self) -> int:
        return int(self.amps.size).bit_length() - 1

    def copy(self) -> "Statevector":
        return Statevector(self.amps.copy(), list(self.clbits))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2


@dataclass(frozen=True)
class ShotRecord:
    """Terminal readout of one shot, plus any mid-circuit outcomes in order."""

    bitstring: str
    ancilla_outcomes: tuple[int, ...]
    seed: int | None


@dataclass
class RunResult:
    state: Statevector
    pre_measure: Statevector | None
    record: ShotRecord | None


def zero_state(num_qubits: int, num_clbits: int) -> Statevector:
    if num_qubits > SIM_QUBIT_CAP:
        raise TooLargeError(f"{num_qubits} qubits exceeds simulator cap {SIM_QUBIT_CAP}")
    amps = np.zeros(1 << num_qubits, dtype=complex)
    amps[0] = 1.0
    return Statevector(amps=amps, clbits=[0] * num_clbits)


def _pair_view(amps: np.ndarray, q: int) -> np.ndarray:
    """View grouping amplitudes by the value of qubit q along axis 1."""
    return amps.reshape(-1, 2, 1 << q)


def _apply_1q_matrix(amps: np.ndarray, mat: np.ndarray, q: int) -> None:
    view = _pair_view(amps, q)
    a = view[:, 0, :].copy()
    b = view[:, 1, :]
    view[:, 0, :] = mat[0, 0] * a + mat[0, 1] * b
    view[:, 1, :] = mat[1, 0] * a + mat[1, 1] * b


def _two_qubit_view(amps: np.ndarray, qa: int, qb: int) -> tuple[np.ndarray, int, int]:
    """View with explicit axes for qubits qa, qb; returns (view, axis_a, axis_b).

    Shape is (outer, 2, mid, 2, inner) with the first 2-axis belonging to the
    higher qubit index.
    """
    hi, lo = (qa, qb) if qa > qb else (qb, qa)
    mid = 1 << (hi - lo - 1)
    view = amps.reshape(-1, 2, mid, 2, 1 << lo)
    if qa == hi:
        return view, 1, 3
    return view, 3, 1


def _cell(ax_vals: dict[int, int]) -> tuple:
    """Basic-indexing tuple fixing the given axes of a 5-d two-qubit view."""
    idx: list = [slice(None)] * 5
    for ax, val in ax_vals.items():
        idx[ax] = val
    return tuple(idx)


def _apply_gate_unitary(amps: np.ndarray, op: GateOp) -> None:
    if len(op.qubits) == 1:
        _apply_1q_matrix(amps, gate_matrix_1q(op), op.qubits[0])
        return
    qa, qb = op.qubits
    if op.kind == "cx":
        view, ax_c, ax_t = _two_qubit_view(amps, qa, qb)
        lo = _cell({ax_c: 1, ax_t: 0})
        hi = _cell({ax_c: 1, ax_t: 1})
        tmp = view[lo].copy()
        view[lo] = view[hi]
        view[hi] = tmp
        return
    if op.kind == "cz":
        view, ax_a, ax_b = _two_qubit_view(amps, qa, qb)
        view[_cell({ax_a: 1, ax_b: 1})] *= -1.0
        return
    if op.kind == "rzz":
        half = op.param / 2.0
        same, diff = np.exp(-1j * half), np.exp(1j * half)
        view, ax_a, ax_b = _two_qubit_view(amps, qa, qb)
        for va in (0, 1):
            for vb in (0, 1):
                view[_cell({ax_a: va, ax_b: vb})] *= same if va == vb else diff
        return
    raise ValueError(f"unknown two-qubit gate {op.kind}")


def _prob_one(amps: np.ndarray, q: int) -> float:
    view = _pair_view(amps, q)
    return float(np.sum(np.abs(view[:, 1, :]) ** 2))


def _project(amps: np.ndarray, q: int, outcome: int) -> None:
    view = _pair_view(amps, q)
    view[:, 1 - outcome, :] = 0.0
    norm = np.linalg.norm(amps)
    if norm < 1e-12:
        raise NumericalFailureError(f"projection of qubit {q} onto {outcome} annihilated the state")
    amps /= norm


class _Forcer:
    """Queue of pinned measurement outcomes for branch-forcing mode."""

    def __init__(self, forced: int | Sequence[int] | None):
        self._all: int | None = None
        self._queue: list[int] = []
        if isinstance(forced, int):
            self._all = forced
        elif forced is not None:
            self._queue = [int(v) for v in forced]

    @property
    def active(self) -> bool:
        return self._all is not None or bool(self._queue)

    def next(self) -> int:
        if self._all is not None:
            return self._all
        if not self._queue:
            raise NumericalFailureError("forced-outcome queue exhausted")
        return self._queue.pop(0)


def apply_gate(
    state: Statevector,
    op: GateOp,
    rng: np.random.Generator | None = None,
    forcer: _Forcer | None = None,
    outcome_log: list[int] | None = None,
) -> Statevector:
    """Apply one op in place and return the state.

    Unitaries act by direct amplitude update with a norm-drift guard;
    measure collapses per Born rule (or per the forcer), reset measures
    silently and flips to |0> if needed; conditioned ops apply iff their
    classical bit reads 1.
    """
    if op.condition is not None and state.clbits[op.condition] != 1:
        return state
    if op.kind == "measure":
        q = op.qubits[0]
        p1 = _prob_one(state.amps, q)
        if forcer is not None and forcer.active:
            outcome = forcer.next()
            if (p1 if outcome else 1.0 - p1) < 1e-12:
                raise NumericalFailureError(
                    f"forced outcome {outcome} on qubit {q} has zero probability"
                )
        else:
            if rng is None:
                raise ValueError("measurement needs an RNG unless outcomes are forced")
            outcome = int(rng.random() < p1)
        _project(state.amps, q, outcome)
        state.clbits[op.clbit] = outcome
        if outcome_log is not None:
            outcome_log.append(outcome)
        return state
    if op.kind == "reset":
        q = op.qubits[0]
        p1 = _prob_one(state.amps, q)
        if p1 > 1.0 - 1e-12:
            outcome = 1
        elif p1 < 1e-12:
            outcome = 0
        else:
            if rng is None:
                raise ValueError("reset on an unresolved qubit needs an RNG")
            outcome = int(rng.random() < p1)
        _project(state.amps, q, outcome)
        if outcome == 1:
            _apply_1q_matrix(state.amps, _FIXED_1Q["x"], q)
        return state

    _apply_gate_unitary(state.amps, op)
    drift = abs(float(np.vdot(state.amps, state.amps).real) - 1.0)
    if drift > _NORM_GUARD:
        raise NumericalFailureError(f"norm drift {drift:.3e} after {op.kind}")
    return state


def run_ops(
    state: Statevector,
    ops: Sequence[GateOp],
    seed: int | None = None,
    forced_outcomes: int | Sequence[int] | None = None,
    outcome_log: list[int] | None = None,
) -> Statevector:
    """Apply a bare op list to an existing state (clause-level testing hook)."""
    rng = np.random.default_rng(seed)
    forcer = _Forcer(forced_outcomes)
    for op in ops:
        apply_gate(state, op, rng=rng, forcer=forcer, outcome_log=outcome_log)
    return state


def run(
    circuit: Circuit,
    seed: int | None = None,
    forced_outcomes: int | Sequence[int] | None = None,
) -> RunResult:
    """Sequentially apply the circuit from |0...0>.

    Returns the final state, a snapshot taken just before the trailing block
    of terminal measure ops (None when the circuit has no such block), and a
    ShotRecord with the terminal bitstring and mid-circuit outcomes.
    """
    state = zero_state(circuit.num_qubits, circuit.num_clbits)
    rng = np.random.default_rng(seed)
    forcer = _Forcer(forced_outcomes)
    cut = circuit.terminal_measure_start()
    mid_outcomes: list[int] = []

    for op in circuit.ops[:cut]:
        apply_gate(state, op, rng=rng, forcer=forcer, outcome_log=mid_outcomes)
    pre = state.copy() if cut < len(circuit.ops) else None

    terminal: dict[int, int] = {}
    for op in circuit.ops[cut:]:
        apply_gate(state, op, rng=rng, forcer=forcer)
        terminal[op.qubits[0]] = state.clbits[op.clbit]

    record = None
    if terminal:
        bits = "".join(str(terminal[q]) for q in sorted(terminal))
        record = ShotRecord(bitstring=bits, ancilla_outcomes=tuple(mid_outcomes), seed=seed)
    return RunResult(state=state, pre_measure=pre, record=record)


def _worker_count() -> int:
    raw = os.environ.get("QSAT_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def variable_probabilities(state: Statevector, n: int) -> np.ndarray:
    """Marginal distribution over the first n qubits (ancillas traced out)."""
    probs = state.probabilities()
    if state.num_qubits == n:
        return probs
    return probs.reshape(-1, 1 << n).sum(axis=0)


def sample(circuit: Circuit, shots: int, seed: int | None = None) -> list[ShotRecord]:
    """Draw independent seeded shots.

    Circuits without mid-circuit measurement are simulated once and the
    terminal distribution sampled multinomially; feed-forward circuits are
    re-run shot by shot (parallelized across QSAT_THREADS workers).
    """
    if shots == 0:
        return []
    master = np.random.default_rng(seed)
    n_terminal = len(circuit.ops) - circuit.terminal_measure_start()

    if not circuit.has_mid_circuit_measurement():
        stripped = Circuit(
            num_qubits=circuit.num_qubits,
            num_clbits=circuit.num_clbits,
            ops=circuit.ops[: circuit.terminal_measure_start()],
            metadata=circuit.metadata,
        )
        result = run(stripped, seed=seed)
        probs = variable_probabilities(result.state, n_terminal)
        cum = np.cumsum(probs)
        cum[-1] = 1.0
        draws = np.searchsorted(cum, master.random(shots), side="right")
        return [
            ShotRecord(
                bitstring=format(int(x), f"0{n_terminal}b")[::-1],
                ancilla_outcomes=(),
                seed=seed,
            )
            for x in draws
        ]

    shot_seeds = [int(s) for s in master.integers(0, 2**63 - 1, size=shots)]

    def one(shot_seed: int) -> ShotRecord:
        return run(circuit, seed=shot_seed).record

    workers = _worker_count()
    if workers > 1 and shots > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(one, shot_seeds))
    return [one(s) for s in shot_seeds]


def dump_state(amps: np.ndarray, path) -> None:
    """Write amplitudes as little-endian complex doubles (debug dump).

    The fast simulator's states share this format.
    """
    np.ascontiguousarray(amps, dtype="<c16").tofile(path)


def load_state(path) -> np.ndarray:
    return np.fromfile(path, dtype="<c16")


def cost_vector(instance: KSatInstance) -> np.ndarray:
    """C(x) over all basis indices, via per-assignment clause evaluation.

    Intentionally a different route than fastsim's masked cost table so the
    two simulators cross-check rather than share arithmetic.
    """
    return np.array(
        [evaluate(instance, index_to_assignment(x, instance.n)) for x in range(1 << instance.n)],
        dtype=float,
    )


def exact_expectation_gate_level(circuit: Circuit, instance: KSatInstance) -> float:
    """<H_C> from the pre-measurement state of the gate-level simulation.

    Mid-circuit outcomes, if any, are forced to 0; the uncomputation
    construction guarantees branch independence, so any fixed branch is
    exact.
    """
    cut = circuit.terminal_measure_start()
    stripped = Circuit(
        num_qubits=circuit.num_qubits,
        num_clbits=circuit.num_clbits,
        ops=circuit.ops[:cut],
        metadata=circuit.metadata,
    )
    result = run(stripped, seed=0, forced_outcomes=0)
    probs = variable_probabilities(result.state, instance.n)
    return float(probs @ cost_vector(instance))
