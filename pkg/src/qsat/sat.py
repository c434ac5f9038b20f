"""MAX k-SAT instances: generation, evaluation, exact optima, DIMACS and JSON I/O.

An assignment is a length-n sequence of 0/1 ints, entry i giving the value of
variable ``x_i``.  Basis-state indices elsewhere in the package use the same
convention with variable i as bit i (least significant bit = x_0).
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimacsParseError,
    InvalidAssignmentError,
    InvalidParametersError,
    TooLargeError,
    UnsupportedWidthError,
)

BRUTE_FORCE_CAP = 30


@dataclass(frozen=True)
class Literal:
    """A possibly negated occurrence of a 0-indexed variable."""

    var: int
    negated: bool = False

    def truth(self, bit: int) -> bool:
        """Truth value of the literal when its variable equals ``bit``."""
        return bit == 0 if self.negated else bit == 1

    def signed(self) -> int:
        """DIMACS-style signed, 1-indexed form."""
        return -(self.var + 1) if self.negated else self.var + 1

    @classmethod
    def from_signed(cls, lit: int) -> "Literal":
        if lit == 0:
            raise InvalidParametersError("signed literal must be nonzero")
        return cls(var=abs(lit) - 1, negated=lit < 0)


@dataclass(frozen=True)
class Clause:
    """Disjunction of k literals over k distinct variables."""

    literals: tuple[Literal, ...]

    def __post_init__(self) -> None:
        variables = [lit.var for lit in self.literals]
        if len(set(variables)) != len(variables):
            raise InvalidParametersError(f"clause repeats a variable: {variables}")
        if not self.literals:
            raise InvalidParametersError("clause must contain at least one literal")

    @property
    def k(self) -> int:
        return len(self.literals)

    def variables(self) -> tuple[int, ...]:
        return tuple(lit.var for lit in self.literals)

    def is_satisfied(self, assignment: Sequence[int]) -> bool:
        return any(lit.truth(assignment[lit.var]) for lit in self.literals)

    def unsat_pattern(self) -> tuple[int, ...]:
        """The unique local assignment (aligned with ``literals``) falsifying the clause.

        A negated literal is false when its variable is 1, a positive one when
        it is 0, so the pattern is 1 exactly at the negated positions.
        """
        return tuple(1 if lit.negated else 0 for lit in self.literals)


def clause_unsat_pattern(clause: Clause) -> tuple[int, ...]:
    """Module-level alias for :meth:`Clause.unsat_pattern`."""
    return clause.unsat_pattern()


@dataclass(frozen=True)
class KSatInstance:
    """A MAX k-SAT instance: n variables and m clauses of uniform width k."""

    n: int
    k: int
    clauses: tuple[Clause, ...]
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidParametersError(f"need at least one variable, got n={self.n}")
        if not self.clauses:
            raise InvalidParametersError("instance must contain at least one clause")
        for clause in self.clauses:
            if clause.k != self.k:
                raise UnsupportedWidthError(
                    f"clause width {clause.k} != instance width {self.k}"
                )
            for lit in clause.literals:
                if not 0 <= lit.var < self.n:
                    raise InvalidParametersError(
                        f"literal references variable {lit.var} outside [0, {self.n})"
                    )

    @property
    def m(self) -> int:
        return len(self.clauses)

    def instance_id(self) -> str:
        """Stable content hash used to link instances, schedules, and curves."""
        payload = json.dumps(instance_to_json(self), sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:12]


def generate_random_ksat(
    n: int, k: int, density: float, seed: int
) -> KSatInstance:
    """Draw a random width-k instance with m = round(density * n) clauses.

    Each clause picks k distinct variables uniformly without replacement
    (partial Fisher-Yates over the PCG64 stream) and independent uniform
    polarities.  Duplicate clauses are permitted.  The same
    (n, k, density, seed) always reproduces the identical instance.
    """
    if n < k:
        raise InvalidParametersError(f"n={n} < k={k}")
    if density <= 0:
        raise InvalidParametersError(f"density must be positive, got {density}")
    m = int(np.floor(density * n + 0.5))
    if m < 1:
        raise InvalidParametersError(f"density {density} yields no clauses for n={n}")
    rng = np.random.default_rng(seed)
    clauses = []
    for _ in range(m):
        pool = list(range(n))
        chosen = []
        for i in range(k):
            j = int(rng.integers(i, n))
            pool[i], pool[j] = pool[j], pool[i]
            chosen.append(pool[i])
        polarities = [bool(rng.integers(2)) for _ in range(k)]
        clauses.append(
            Clause(tuple(Literal(v, neg) for v, neg in zip(chosen, polarities)))
        )
    return KSatInstance(n=n, k=k, clauses=tuple(clauses), seed=seed)


def evaluate(instance: KSatInstance, assignment: Sequence[int]) -> int:
    """Number of satisfied clauses, in [0, m]."""
    if len(assignment) != instance.n:
        raise InvalidAssignmentError(
            f"assignment length {len(assignment)} != n={instance.n}"
        )
    return sum(clause.is_satisfied(assignment) for clause in instance.clauses)


def index_to_assignment(index: int, n: int) -> tuple[int, ...]:
    """Bits of a basis-state index, variable i = bit i."""
    return tuple((index >> i) & 1 for i in range(n))


def assignment_to_index(assignment: Sequence[int]) -> int:
    return sum(int(b) << i for i, b in enumerate(assignment))


def brute_force_optimum(
    instance: KSatInstance, cap: int = BRUTE_FORCE_CAP
) -> tuple[int, set[tuple[int, ...]]]:
    """Exhaustive maximum of the clause count and the complete argmax set.

    Satisfaction is computed clause-by-clause as an OR over literal bit
    columns of every index in [0, 2^n); this is a different route than the
    unsat-mask subtraction used by the fast simulator's cost table, so the
    two can cross-check each other.
    """
    n = instance.n
    if n > cap:
        raise TooLargeError(f"n={n} exceeds brute-force cap {cap}")
    idx = np.arange(1 << n, dtype=np.int64)
    total = np.zeros(1 << n, dtype=np.int32)
    for clause in instance.clauses:
        sat = np.zeros(1 << n, dtype=bool)
        for lit in clause.literals:
            bit = (idx >> lit.var) & 1
            sat |= (bit == 0) if lit.negated else (bit == 1)
        total += sat
    c_opt = int(total.max())
    optima = {index_to_assignment(int(x), n) for x in np.flatnonzero(total == c_opt)}
    return c_opt, optima


# ---------------------------------------------------------------------------
# DIMACS CNF
# ---------------------------------------------------------------------------

def emit_dimacs(instance: KSatInstance) -> str:
    lines = [f"p cnf {instance.n} {instance.m}"]
    for clause in instance.clauses:
        lines.append(" ".join(str(lit.signed()) for lit in clause.literals) + " 0")
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> KSatInstance:
    """Parse DIMACS CNF with a uniform clause width.

    Comment lines start with 'c' or '%'; clauses are 0-terminated and may
    span lines.  Variables are 1-indexed in the file, 0-indexed internally.
    """
    header: tuple[int, int] | None = None
    tokens: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise DimacsParseError("duplicate problem line")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsParseError(f"malformed problem line: {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError as exc:
                raise DimacsParseError(f"malformed problem line: {line!r}") from exc
            continue
        if header is None:
            raise DimacsParseError("clause data before problem line")
        try:
            tokens.extend(int(tok) for tok in line.split())
        except ValueError as exc:
            raise DimacsParseError(f"non-integer token in clause line: {line!r}") from exc

    if header is None:
        raise DimacsParseError("missing problem line")
    n, m_declared = header

    clauses: list[Clause] = []
    current: list[int] = []
    for tok in tokens:
        if tok == 0:
            if not current:
                raise DimacsParseError("empty clause")
            clauses.append(Clause(tuple(Literal.from_signed(t) for t in current)))
            current = []
        else:
            if not 1 <= abs(tok) <= n:
                raise DimacsParseError(f"literal {tok} outside declared range 1..{n}")
            current.append(tok)
    if current:
        raise DimacsParseError("unterminated final clause")
    if len(clauses) != m_declared:
        raise DimacsParseError(
            f"declared {m_declared} clauses, found {len(clauses)}"
        )
    widths = {clause.k for clause in clauses}
    if len(widths) != 1:
        raise UnsupportedWidthError(f"mixed clause widths {sorted(widths)}")
    return KSatInstance(n=n, k=widths.pop(), clauses=tuple(clauses))


# ---------------------------------------------------------------------------
# Instance JSON ({n, k, seed, clauses: [[signed 1-indexed ints]]})
# ---------------------------------------------------------------------------

def instance_to_json(instance: KSatInstance) -> dict:
    return {
        "n": instance.n,
        "k": instance.k,
        "seed": instance.seed,
        "clauses": [
            [lit.signed() for lit in clause.literals] for clause in instance.clauses
        ],
    }


def instance_from_json(data: dict) -> KSatInstance:
    clauses = tuple(
        Clause(tuple(Literal.from_signed(t) for t in row)) for row in data["clauses"]
    )
    return KSatInstance(
        n=int(data["n"]), k=int(data["k"]), clauses=clauses, seed=data.get("seed")
    )
