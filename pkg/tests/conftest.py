"""Shared fixtures: the worked 3-variable example and seeded instances."""

from __future__ import annotations

import pytest

from qsat.sat import Clause, KSatInstance, Literal, generate_random_ksat


def _lit(v: int, neg: bool = False) -> Literal:
    return Literal(v, neg)


@pytest.fixture(scope="session")
def worked_example() -> KSatInstance:
    """The four-clause, three-variable instance used throughout:

    (!x0 | x1 | x2) & (!x0 | !x1 | x2) & (!x0 | !x1 | !x2) & (x0 | x1 | x2)

    C_opt = 4 with optima {(0,0,1), (0,1,0), (0,1,1), (1,0,1)}.
    """
    return KSatInstance(
        n=3,
        k=3,
        clauses=(
            Clause((_lit(0, True), _lit(1), _lit(2))),
            Clause((_lit(0, True), _lit(1, True), _lit(2))),
            Clause((_lit(0, True), _lit(1, True), _lit(2, True))),
            Clause((_lit(0), _lit(1), _lit(2))),
        ),
    )


@pytest.fixture(scope="session")
def seeded_n6() -> KSatInstance:
    """Density-4 3-SAT on 6 variables, seed 17: m = 24, C_opt = 24."""
    return generate_random_ksat(6, 3, 4, 17)


@pytest.fixture(scope="session")
def single_clause_n3() -> KSatInstance:
    """One all-positive clause (x0 | x1 | x2)."""
    return KSatInstance(
        n=3, k=3, clauses=(Clause((_lit(0), _lit(1), _lit(2))),)
    )
