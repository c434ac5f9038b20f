"""OpenQASM 2.0/3.0 export, QASM 2.0 import, and circuit JSON dumps.

QASM 2.0 has no mid-circuit reset-and-reuse or feed-forward conditionals in
the form we need, so it is only offered for circuits without them (the k = 3
case); rzz is expanded to cx-rz-cx on export.  QASM 3.0 keeps rzz as a
declared gate and emits measure/reset/if statements directly.
"""

from __future__ import annotations

import math
import re
from typing import Any, Iterator

from ..errors import QasmParseError, UnsupportedGatesetError
from .ir import Circuit, GateOp, PARAMETRIC_GATES

_QASM2_NATIVE = {"h", "x", "z", "s", "sdg", "t", "tdg", "rx", "ry", "rz", "cx", "cz"}


def _fmt_angle(value: float) -> str:
    """Render an angle compactly, using pi fractions where exact."""
    for denom in (1, 2, 4, 8):
        for num in range(-8 * denom, 8 * denom + 1):
            if num and value == num * math.pi / denom:
                frac = f"pi/{denom}" if denom > 1 else "pi"
                if num == 1:
                    return frac
                if num == -1:
                    return f"-{frac}"
                return f"{num}*{frac}"
    return repr(value)


def emit_qasm2(circuit: Circuit) -> str:
    """OpenQASM 2.0 text; raises for feed-forward circuits."""
    lines = ['OPENQASM 2.0;', 'include "qelib1.inc";',
             f"qreg q[{circuit.num_qubits}];"]
    if circuit.num_clbits:
        lines.append(f"creg c[{circuit.num_clbits}];")
    if circuit.has_mid_circuit_measurement():
        raise UnsupportedGatesetError("feed-forward requires QASM3")
    for op in circuit.ops:
        if op.condition is not None or op.kind == "reset":
            raise UnsupportedGatesetError("feed-forward requires QASM3")
        if op.kind == "measure":
            lines.append(f"measure q[{op.qubits[0]}] -> c[{op.clbit}];")
        elif op.kind == "rzz":
            a, b = op.qubits
            lines.append(f"cx q[{a}],q[{b}];")
            lines.append(f"rz({_fmt_angle(op.param)}) q[{b}];")
            lines.append(f"cx q[{a}],q[{b}];")
        elif op.kind in PARAMETRIC_GATES:
            lines.append(
                f"{op.kind}({_fmt_angle(op.param)}) "
                + ",".join(f"q[{q}]" for q in op.qubits) + ";"
            )
        else:
            lines.append(f"{op.kind} " + ",".join(f"q[{q}]" for q in op.qubits) + ";")
    return "\n".join(lines) + "\n"


def emit_qasm3(circuit: Circuit) -> str:
    """OpenQASM 3.0 text with mid-circuit measure, reset, and if-conditionals."""
    lines = [
        "OPENQASM 3.0;",
        'include "stdgates.inc";',
        "gate rzz(theta) a, b { cx a, b; rz(theta) b; cx a, b; }",
        f"qubit[{circuit.num_qubits}] q;",
    ]
    if circuit.num_clbits:
        lines.append(f"bit[{circuit.num_clbits}] c;")
    for op in circuit.ops:
        if op.kind == "measure":
            stmt = f"c[{op.clbit}] = measure q[{op.qubits[0]}];"
        elif op.kind == "reset":
            stmt = f"reset q[{op.qubits[0]}];"
        elif op.kind in PARAMETRIC_GATES:
            stmt = (
                f"{op.kind}({_fmt_angle(op.param)}) "
                + ", ".join(f"q[{q}]" for q in op.qubits) + ";"
            )
        else:
            stmt = f"{op.kind} " + ", ".join(f"q[{q}]" for q in op.qubits) + ";"
        if op.condition is not None:
            stmt = f"if (c[{op.condition}]) {{ {stmt} }}"
        lines.append(stmt)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# QASM 2.0 parsing (the subset this package emits, plus simple variations)
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(pi|[0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?|[-+*/()])")


def _parse_angle(text: str) -> float:
    """Tiny recursive-descent evaluator for +-*/, parentheses, pi, numbers."""
    tokens: list[str] = []
    pos = 0
    while pos < len(text.strip()):
        match = _TOKEN_RE.match(text, pos)
        if not match:
            raise QasmParseError(f"bad angle expression {text!r}")
        tokens.append(match.group(1))
        pos = match.end()

    cursor = [0]

    def peek() -> str | None:
        return tokens[cursor[0]] if cursor[0] < len(tokens) else None

    def take() -> str:
        tok = tokens[cursor[0]]
        cursor[0] += 1
        return tok

    def atom() -> float:
        tok = peek()
        if tok is None:
            raise QasmParseError(f"truncated angle expression {text!r}")
        if tok == "-":
            take()
            return -atom()
        if tok == "+":
            take()
            return atom()
        if tok == "(":
            take()
            val = expr()
            if peek() != ")":
                raise QasmParseError(f"unbalanced parentheses in {text!r}")
            take()
            return val
        take()
        return math.pi if tok == "pi" else float(tok)

    def term() -> float:
        val = atom()
        while peek() in ("*", "/"):
            if take() == "*":
                val *= atom()
            else:
                val /= atom()
        return val

    def expr() -> float:
        val = term()
        while peek() in ("+", "-"):
            if take() == "+":
                val += term()
            else:
                val -= term()
        return val

    value = expr()
    if cursor[0] != len(tokens):
        raise QasmParseError(f"trailing tokens in angle expression {text!r}")
    return value


_QREG_RE = re.compile(r"qreg\s+(\w+)\[(\d+)\]")
_CREG_RE = re.compile(r"creg\s+(\w+)\[(\d+)\]")
_GATE_RE = re.compile(r"(\w+)\s*(?:\(([^)]*)\))?\s+(.+)")
_REF_RE = re.compile(r"(\w+)\[(\d+)\]")
_MEASURE_RE = re.compile(r"measure\s+(\w+)\[(\d+)\]\s*->\s*(\w+)\[(\d+)\]")


def parse_qasm2(text: str) -> Circuit:
    """Parse OpenQASM 2.0 produced by :func:`emit_qasm2` (and close kin)."""
    statements = _statements(text)
    header = next(statements, None)
    if header is None or not header.startswith("OPENQASM 2"):
        raise QasmParseError("missing OPENQASM 2.0 header")

    qregs: dict[str, int] = {}
    cregs: dict[str, int] = {}
    q_offsets: dict[str, int] = {}
    c_offsets: dict[str, int] = {}
    ops: list[GateOp] = []

    def qubit(ref: str) -> int:
        match = _REF_RE.fullmatch(ref.strip())
        if not match or match.group(1) not in q_offsets:
            raise QasmParseError(f"bad qubit reference {ref!r}")
        return q_offsets[match.group(1)] + int(match.group(2))

    for stmt in statements:
        if stmt.startswith("include"):
            continue
        if stmt.startswith("qreg"):
            match = _QREG_RE.fullmatch(stmt)
            if not match:
                raise QasmParseError(f"bad qreg: {stmt!r}")
            q_offsets[match.group(1)] = sum(qregs.values())
            qregs[match.group(1)] = int(match.group(2))
            continue
        if stmt.startswith("creg"):
            match = _CREG_RE.fullmatch(stmt)
            if not match:
                raise QasmParseError(f"bad creg: {stmt!r}")
            c_offsets[match.group(1)] = sum(cregs.values())
            cregs[match.group(1)] = int(match.group(2))
            continue
        if stmt.startswith("barrier"):
            continue
        if stmt.startswith("measure"):
            match = _MEASURE_RE.fullmatch(stmt)
            if not match:
                raise QasmParseError(f"bad measure: {stmt!r}")
            q = q_offsets[match.group(1)] + int(match.group(2))
            c = c_offsets[match.group(3)] + int(match.group(4))
            ops.append(GateOp(kind="measure", qubits=(q,), clbit=c))
            continue
        if stmt.startswith("if"):
            raise QasmParseError("QASM2 conditionals are not supported")
        match = _GATE_RE.fullmatch(stmt)
        if not match:
            raise QasmParseError(f"unrecognized statement {stmt!r}")
        name, arg, operands = match.group(1), match.group(2), match.group(3)
        if name not in _QASM2_NATIVE:
            raise QasmParseError(f"unsupported gate {name!r}")
        qubits = tuple(qubit(ref) for ref in operands.split(","))
        param = _parse_angle(arg) if arg is not None else None
        ops.append(GateOp(kind=name, qubits=qubits, param=param))

    return Circuit(
        num_qubits=sum(qregs.values()),
        num_clbits=sum(cregs.values()),
        ops=tuple(ops),
        metadata={"source": "qasm2"},
    )


def _statements(text: str) -> Iterator[str]:
    for chunk in re.sub(r"//[^\n]*", "", text).split(";"):
        stmt = " ".join(chunk.split())
        if stmt:
            yield stmt


# ---------------------------------------------------------------------------
# Circuit JSON (verbatim IR mirror, for fixtures and the service API)
# ---------------------------------------------------------------------------

def circuit_to_json(circuit: Circuit) -> dict[str, Any]:
    return {
        "num_qubits": circuit.num_qubits,
        "num_clbits": circuit.num_clbits,
        "metadata": dict(circuit.metadata),
        "ops": [
            {
                "kind": op.kind,
                "qubits": list(op.qubits),
                **({"param": op.param} if op.param is not None else {}),
                **({"clbit": op.clbit} if op.clbit is not None else {}),
                **({"condition": op.condition} if op.condition is not None else {}),
            }
            for op in circuit.ops
        ],
    }


def circuit_from_json(data: dict[str, Any]) -> Circuit:
    ops = tuple(
        GateOp(
            kind=entry["kind"],
            qubits=tuple(entry["qubits"]),
            param=entry.get("param"),
            clbit=entry.get("clbit"),
            condition=entry.get("condition"),
        )
        for entry in data["ops"]
    )
    return Circuit(
        num_qubits=data["num_qubits"],
        num_clbits=data["num_clbits"],
        ops=ops,
        metadata=data.get("metadata", {}),
    )
