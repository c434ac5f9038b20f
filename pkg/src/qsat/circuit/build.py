"""QAOA circuit synthesis for MAX k-SAT.

Per clause, the phase separator multiplies the unique unsatisfying local
assignment by e^{+i*gamma} (equivalent to e^{-i*gamma*C_j} up to one global
phase per clause).  Positive-literal qubits are conjugated with X so the
core block only ever has to phase the all-ones pattern.

k = 3 uses a 2-controlled phase built from 4 CNOT + 1 Rzz.  k > 3 reduces
controls pairwise by computing ANDs into ancilla qubits with a relative-phase
Toffoli (3 CNOT + trailing Sdg), phases on the three remaining wires, and
erases each ancilla by X-basis measurement with feed-forward corrections:
a conditioned CZ on the two AND inputs, and for the innermost ancilla a
conditioned Z standing in for the omitted final CNOT of the phase ladder.
Ancillas are reset after measurement for reuse; every k-SAT clause costs
4k-8 two-qubit gates (5 for k = 3) and k-3 ancillas.
"""

from __future__ import annotations

from ..errors import BuilderError, UnsupportedWidthError
from ..sat import Clause, KSatInstance
from .ir import AngleSchedule, Circuit, GateOp


def _g(kind: str, *qubits: int, param: float | None = None,
       clbit: int | None = None, condition: int | None = None) -> GateOp:
    return GateOp(kind=kind, qubits=tuple(qubits), param=param,
                  clbit=clbit, condition=condition)


def _and_into_ancilla(c0: int, c1: int, anc: int) -> list[GateOp]:
    """Relative-phase Toffoli (Margolus form) plus Sdg: clean AND of (c0, c1)
    into a |0>-initialized ancilla, 3 CNOTs total."""
    return [
        _g("h", anc),
        _g("t", anc),
        _g("cx", c1, anc),
        _g("tdg", anc),
        _g("cx", c0, anc),
        _g("t", anc),
        _g("cx", c1, anc),
        _g("tdg", anc),
        _g("h", anc),
        _g("sdg", anc),
    ]


def _phase_ladder(p0: int, p1: int, target: int, gamma: float,
                  omit_final_cx: bool) -> list[GateOp]:
    """2-controlled phase diag(1,...,1,e^{i*gamma}) on (p0, p1, target).

    Rz(+g/4) on all three wires, a CNOT/Rz(-+g/4) ladder onto ``target`` with
    controls p0, p1, p0, and one Rzz(-g/4) between p0 and p1.  With
    ``omit_final_cx`` the closing CNOT(p1 -> target) is left out; callers must
    restore it via the target's X-basis measurement correction.
    """
    quarter = gamma / 4.0
    ops = [
        _g("rz", p0, param=quarter),
        _g("rz", p1, param=quarter),
        _g("rz", target, param=quarter),
        _g("cx", p0, target),
        _g("rz", target, param=-quarter),
        _g("cx", p1, target),
        _g("rz", target, param=quarter),
        _g("cx", p0, target),
        _g("rz", target, param=-quarter),
        _g("rzz", p0, p1, param=-quarter),
    ]
    if not omit_final_cx:
        ops.append(_g("cx", p1, target))
    return ops


def build_measurement_uncompute(
    ancilla: int,
    and_inputs: tuple[int, int],
    clbit: int,
    extra_z: int | None = None,
) -> list[GateOp]:
    """Erase a computed AND ancilla by X-basis measurement plus feed-forward.

    On outcome 1 a CZ fires on the two AND inputs (cancelling the phase kick
    of the erased AND value); ``extra_z`` additionally receives a conditioned
    Z when the ancilla also absorbed the omitted final CNOT of the phase
    ladder.  The ancilla is reset afterwards so it can be reused.  The net
    action on the data qubits is independent of the measured outcome.
    """
    ops = [
        _g("h", ancilla),
        _g("measure", ancilla, clbit=clbit),
    ]
    if extra_z is not None:
        ops.append(_g("z", extra_z, condition=clbit))
    ops.append(_g("cz", and_inputs[0], and_inputs[1], condition=clbit))
    ops.append(_g("reset", ancilla))
    return ops


def build_clause_ps(
    clause: Clause,
    gamma: float,
    ancilla_base: int | None = None,
    clbit_base: int = 0,
) -> list[GateOp]:
    """Phase separator for one clause (e^{-i*gamma*H_Cj} up to global phase).

    ``ancilla_base`` is the first of k-3 consecutive ancilla qubits (unused
    for k = 3); ``clbit_base`` the first of k-3 classical bits receiving the
    mid-circuit measurement outcomes.
    """
    k = clause.k
    if k < 3:
        raise UnsupportedWidthError(f"clause phase separator needs k >= 3, got k={k}")
    pattern = clause.unsat_pattern()
    flips = [lit.var for lit, u in zip(clause.literals, pattern) if u == 0]

    ops = [_g("x", q) for q in flips]
    qubits = [lit.var for lit in clause.literals]
    if k == 3:
        ops += _phase_ladder(qubits[0], qubits[1], qubits[2], gamma,
                             omit_final_cx=False)
    else:
        if ancilla_base is None:
            raise BuilderError(f"k={k} clause needs {k - 3} ancilla qubits")
        controls = qubits
        ands: list[tuple[int, int, int]] = []
        next_anc = ancilla_base
        while len(controls) > 3:
            anc, c0, c1 = next_anc, controls[0], controls[1]
            if anc in qubits:
                raise BuilderError(f"ancilla {anc} collides with clause qubits")
            ops += _and_into_ancilla(c0, c1, anc)
            ands.append((anc, c0, c1))
            controls = [anc] + controls[2:]
            next_anc += 1
        target, p0, p1 = controls[0], controls[1], controls[2]
        ops += _phase_ladder(p0, p1, target, gamma, omit_final_cx=True)
        # innermost ancilla first; its measurement also repairs the omitted CNOT
        for i, (anc, c0, c1) in enumerate(reversed(ands)):
            ops += build_measurement_uncompute(
                anc, (c0, c1), clbit=clbit_base + i,
                extra_z=p1 if i == 0 else None,
            )
    ops += [_g("x", q) for q in flips]
    return ops


def build_qaoa_circuit(
    instance: KSatInstance,
    angles: AngleSchedule,
    measure: bool = True,
) -> Circuit:
    """Full QAOA circuit: H layer, p rounds of phase separator + Rx(2*beta)
    mixer, terminal measurement of the variable qubits.

    For k >= 4, k-3 ancilla qubits are appended after the variable qubits and
    reused across clauses via reset.  Classical bits 0..n-1 hold the terminal
    readout; mid-circuit outcomes occupy the bits above.
    """
    if instance.k < 3:
        raise UnsupportedWidthError(f"QAOA synthesis covers k >= 3, got k={instance.k}")
    n = instance.n
    num_anc = instance.k - 3
    num_qubits = n + num_anc
    num_mid_bits = num_anc * instance.m * angles.p
    num_clbits = (n if measure else 0) + num_mid_bits
    mid_base = n if measure else 0

    ops = [_g("h", q) for q in range(n)]
    cursor = mid_base
    for r in range(angles.p):
        gamma, beta = angles.gammas[r], angles.betas[r]
        for clause in instance.clauses:
            ops += build_clause_ps(
                clause, gamma,
                ancilla_base=n if num_anc else None,
                clbit_base=cursor,
            )
            cursor += num_anc
        ops += [_g("rx", q, param=2.0 * beta) for q in range(n)]
    if measure:
        ops += [_g("measure", q, clbit=q) for q in range(n)]

    metadata = {
        "instance_id": instance.instance_id(),
        "n": n,
        "k": instance.k,
        "m": instance.m,
        "p": angles.p,
        "gammas": list(angles.gammas),
        "betas": list(angles.betas),
        "gateset": "raw",
    }
    return Circuit(num_qubits=num_qubits, num_clbits=num_clbits,
                   ops=tuple(ops), metadata=metadata)
