"""Rewrite circuits into trapped-ion native gatesets.

Two targets, both assuming all-to-all connectivity:
    RZZ_SET: rzz, rz, ry, rx      CX_SET: cx, rz, ry, rx

All rewrites preserve the unitary up to global phase:
    h   -> rz(pi) ry(pi/2)
    x   -> rx(pi);  z -> rz(pi);  s/sdg/t/tdg -> rz(+-pi/2, +-pi/4)
    cz  -> rz(-pi/2) x2 + rzz(pi/2)            [RZZ_SET]
    cx  -> h(t) cz h(t), expanded              [RZZ_SET]
    rzz(t) -> cx rz(t) cx                      [CX_SET]
    cz  -> h(t) cx h(t), expanded              [CX_SET]

A fusion pass merges adjacent same-axis rotations on the same wire and drops
rotations that are 0 mod 2pi.  Conditioned gates keep their condition on
every emitted piece and are never fused (dropping a conditioned gate would
change the relative phase between measurement branches).
"""

from __future__ import annotations

import math

from ..errors import UnsupportedGatesetError
from .ir import Circuit, GateOp

RZZ_SET = frozenset({"rzz", "rz", "ry", "rx"})
CX_SET = frozenset({"cx", "rz", "ry", "rx"})

_GATESETS = {"rzz": RZZ_SET, "cx": CX_SET}

_PI = math.pi


def _rot(kind: str, q: int, angle: float, cond: int | None) -> GateOp:
    return GateOp(kind=kind, qubits=(q,), param=angle, condition=cond)


def _h_seq(q: int, cond: int | None) -> list[GateOp]:
    return [_rot("rz", q, _PI, cond), _rot("ry", q, _PI / 2, cond)]


def _rewrite_1q(op: GateOp) -> list[GateOp]:
    q, cond = op.qubits[0], op.condition
    if op.kind in ("rx", "ry", "rz"):
        return [op]
    if op.kind == "h":
        return _h_seq(q, cond)
    if op.kind == "x":
        return [_rot("rx", q, _PI, cond)]
    if op.kind == "z":
        return [_rot("rz", q, _PI, cond)]
    if op.kind == "s":
        return [_rot("rz", q, _PI / 2, cond)]
    if op.kind == "sdg":
        return [_rot("rz", q, -_PI / 2, cond)]
    if op.kind == "t":
        return [_rot("rz", q, _PI / 4, cond)]
    if op.kind == "tdg":
        return [_rot("rz", q, -_PI / 4, cond)]
    raise UnsupportedGatesetError(f"no rewrite for {op.kind}")


def _cz_rzz(a: int, b: int, cond: int | None) -> list[GateOp]:
    return [
        _rot("rz", a, -_PI / 2, cond),
        _rot("rz", b, -_PI / 2, cond),
        GateOp(kind="rzz", qubits=(a, b), param=_PI / 2, condition=cond),
    ]


def _rewrite_2q(op: GateOp, target: frozenset[str]) -> list[GateOp]:
    cond = op.condition
    if op.kind in target:
        return [op]
    if target is RZZ_SET:
        if op.kind == "cz":
            return _cz_rzz(op.qubits[0], op.qubits[1], cond)
        if op.kind == "cx":
            c, t = op.qubits
            return _h_seq(t, cond) + _cz_rzz(c, t, cond) + _h_seq(t, cond)
    else:
        if op.kind == "rzz":
            a, b = op.qubits
            return [
                GateOp(kind="cx", qubits=(a, b), condition=cond),
                _rot("rz", b, op.param, cond),
                GateOp(kind="cx", qubits=(a, b), condition=cond),
            ]
        if op.kind == "cz":
            c, t = op.qubits
            return (
                _h_seq(t, cond)
                + [GateOp(kind="cx", qubits=(c, t), condition=cond)]
                + _h_seq(t, cond)
            )
    raise UnsupportedGatesetError(f"no {op.kind} rewrite for target set")


def _is_trivial_angle(angle: float) -> bool:
    return abs(math.remainder(angle, 2.0 * _PI)) < 1e-12


def _fuse(ops: list[GateOp]) -> list[GateOp]:
    """Merge adjacent same-kind single-qubit rotations along each wire."""
    out: list[GateOp | None] = []
    last_on_wire: dict[int, int] = {}
    for op in ops:
        fusable = (
            op.kind in ("rx", "ry", "rz")
            and op.condition is None
        )
        if fusable:
            q = op.qubits[0]
            prev_i = last_on_wire.get(q)
            if prev_i is not None:
                prev = out[prev_i]
                if (
                    prev is not None
                    and prev.kind == op.kind
                    and prev.condition is None
                ):
                    merged_angle = prev.param + op.param
                    if _is_trivial_angle(merged_angle):
                        out[prev_i] = None
                        last_on_wire.pop(q)
                    else:
                        out[prev_i] = _rot(op.kind, q, merged_angle, None)
                    continue
            if _is_trivial_angle(op.param):
                continue
        out.append(op)
        for q in op.qubits:
            last_on_wire[q] = len(out) - 1
    return [op for op in out if op is not None]


def transpile(circuit: Circuit, gateset: str) -> Circuit:
    """Rewrite every gate into the named target set ("rzz" or "cx").

    Measure and reset pass through; conditioned two-qubit gates decompose
    into pieces that all carry the same condition bit.
    """
    target = _GATESETS.get(gateset)
    if target is None:
        raise UnsupportedGatesetError(
            f"unknown gateset {gateset!r}; expected one of {sorted(_GATESETS)}"
        )
    rewritten: list[GateOp] = []
    for op in circuit.ops:
        if op.kind in ("measure", "reset"):
            rewritten.append(op)
        elif op.is_two_qubit:
            rewritten.extend(_rewrite_2q(op, target))
        else:
            rewritten.extend(_rewrite_1q(op))
    fused = _fuse(rewritten)
    metadata = dict(circuit.metadata)
    metadata["gateset"] = gateset
    return Circuit(
        num_qubits=circuit.num_qubits,
        num_clbits=circuit.num_clbits,
        ops=tuple(fused),
        metadata=metadata,
    )
