"""Gateset rewrites: unitary preservation, fusion, conditioned feed-forward."""

import numpy as np
import pytest

from oracles import max_dev_up_to_phase, random_clause, unitary_of
from qsat.circuit.build import build_clause_ps, build_qaoa_circuit
from qsat.circuit.ir import AngleSchedule, Circuit, GateOp, census
from qsat.circuit.transpile import CX_SET, RZZ_SET, transpile
from qsat.errors import UnsupportedGatesetError
from qsat.sat import generate_random_ksat
from qsat.simulator import Statevector, run_ops


def _circ(ops, width, clbits=0):
    return Circuit(num_qubits=width, num_clbits=clbits, ops=tuple(ops))


def test_cx_to_rzz_set():
    circ = _circ([GateOp(kind="cx", qubits=(0, 1))], 2)
    out = transpile(circ, "rzz")
    kinds = [op.kind for op in out.ops]
    assert kinds.count("rzz") == 1
    assert all(k in RZZ_SET for k in kinds)
    rzz = next(op for op in out.ops if op.kind == "rzz")
    assert rzz.param == np.pi / 2
    assert max_dev_up_to_phase(unitary_of(out.ops, 2), unitary_of(circ.ops, 2)) <= 1e-12


def test_rzz_to_cx_set():
    theta = 0.7321
    circ = _circ([GateOp(kind="rzz", qubits=(0, 1), param=theta)], 2)
    out = transpile(circ, "cx")
    kinds = [op.kind for op in out.ops]
    assert kinds == ["cx", "rz", "cx"]
    assert max_dev_up_to_phase(unitary_of(out.ops, 2), unitary_of(circ.ops, 2)) <= 1e-12


def test_cz_under_both_sets():
    circ = _circ([GateOp(kind="cz", qubits=(0, 1))], 2)
    for target in ("rzz", "cx"):
        out = transpile(circ, target)
        assert all(op.kind in (RZZ_SET | CX_SET) for op in out.ops)
        assert (
            max_dev_up_to_phase(unitary_of(out.ops, 2), unitary_of(circ.ops, 2))
            <= 1e-12
        )


def test_full_circuit_two_qubit_count_preserved_in_rzz_set():
    inst = generate_random_ksat(6, 3, 4, 5)
    circ = build_qaoa_circuit(inst, AngleSchedule(gammas=(0.4,), betas=(0.9,)))
    assert census(circ).two_qubit == 120
    assert census(transpile(circ, "rzz")).two_qubit == 120
    # an arbitrary-angle rzz costs 2 cx; cx/cz cost 1 each
    rzz_count = sum(1 for op in circ.ops if op.kind == "rzz")
    assert census(transpile(circ, "cx")).two_qubit == 120 + rzz_count


def test_random_circuits_unitary_equivalent():
    rng = np.random.default_rng(31)
    one_q = ["h", "x", "z", "s", "sdg", "t", "tdg", "rx", "ry", "rz"]
    for trial in range(12):
        width = int(rng.integers(2, 5))
        ops = []
        for _ in range(15):
            if rng.random() < 0.4:
                kind = ["cx", "cz", "rzz"][int(rng.integers(3))]
                a, b = rng.permutation(width)[:2]
                param = float(rng.uniform(0, 2 * np.pi)) if kind == "rzz" else None
                ops.append(GateOp(kind=kind, qubits=(int(a), int(b)), param=param))
            else:
                kind = one_q[int(rng.integers(len(one_q)))]
                param = (
                    float(rng.uniform(0, 2 * np.pi))
                    if kind in ("rx", "ry", "rz")
                    else None
                )
                ops.append(GateOp(kind=kind, qubits=(int(rng.integers(width)),), param=param))
        circ = _circ(ops, width)
        reference = unitary_of(circ.ops, width)
        for target in ("rzz", "cx"):
            rewritten = transpile(circ, target)
            allowed = RZZ_SET if target == "rzz" else CX_SET
            assert all(op.kind in allowed for op in rewritten.ops)
            assert (
                max_dev_up_to_phase(unitary_of(rewritten.ops, width), reference)
                <= 1e-10
            )


def test_fusion_merges_adjacent_rotations():
    ops = [
        GateOp(kind="rz", qubits=(0,), param=0.3),
        GateOp(kind="rz", qubits=(0,), param=0.4),
        GateOp(kind="rx", qubits=(1,), param=0.2),
    ]
    out = transpile(_circ(ops, 2), "rzz")
    rz_ops = [op for op in out.ops if op.kind == "rz"]
    assert len(rz_ops) == 1
    assert abs(rz_ops[0].param - 0.7) <= 1e-15


def test_fusion_cancels_back_to_back_x():
    ops = [GateOp(kind="x", qubits=(0,)), GateOp(kind="x", qubits=(0,))]
    out = transpile(_circ(ops, 1), "rzz")
    assert out.ops == ()


def test_fusion_respects_intervening_two_qubit_gate():
    ops = [
        GateOp(kind="rz", qubits=(0,), param=0.3),
        GateOp(kind="rzz", qubits=(0, 1), param=0.5),
        GateOp(kind="rz", qubits=(0,), param=-0.3),
    ]
    out = transpile(_circ(ops, 2), "rzz")
    assert sum(1 for op in out.ops if op.kind == "rz") == 2


def test_conditioned_gates_survive_with_condition():
    inst = generate_random_ksat(4, 4, 1, 2)
    circ = build_qaoa_circuit(inst, AngleSchedule(gammas=(0.6,), betas=(0.3,)))
    rzz_count = sum(1 for op in circ.ops if op.kind == "rzz")
    for target in ("rzz", "cx"):
        out = transpile(circ, target)
        conditioned = [op for op in out.ops if op.condition is not None]
        assert conditioned, "feed-forward corrections must survive transpilation"
        expected = census(circ).two_qubit + (rzz_count if target == "cx" else 0)
        assert census(out).two_qubit == expected


def test_transpiled_clause_branches_still_match_oracle():
    from oracles import clause_phase_oracle

    rng = np.random.default_rng(77)
    clause = random_clause(rng, 4, 4)
    gamma = 1.234
    ops = build_clause_ps(clause, gamma, ancilla_base=4, clbit_base=0)
    base = _circ(ops, 5, clbits=1)
    data = rng.normal(size=16) + 1j * rng.normal(size=16)
    data /= np.linalg.norm(data)
    oracle = clause_phase_oracle(clause, gamma, 4) @ data
    for target in ("rzz", "cx"):
        rewritten = transpile(base, target)
        for forced in (0, 1):
            full = np.zeros(32, dtype=complex)
            full[:16] = data
            state = Statevector(amps=full, clbits=[0])
            run_ops(state, rewritten.ops, forced_outcomes=[forced])
            out = state.amps.reshape(2, 16)
            assert np.linalg.norm(out[1]) <= 1e-10
            assert max_dev_up_to_phase(out[0], oracle) <= 1e-10


def test_unknown_gateset_rejected():
    circ = _circ([GateOp(kind="h", qubits=(0,))], 1)
    with pytest.raises(UnsupportedGatesetError):
        transpile(circ, "iswap")
