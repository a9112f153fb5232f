import itertools

import pytest

from ccdd.diagram import FALSE, TRUE, Diagram
from ccdd.formula import CnfFormula

# (x1 ∨ ¬x3 ∨ x4 ∨ x7) ∧ (x1 ∨ x3 ∨ x5) ∧ (¬x1 ↔ x3) ∧ (¬x4 ↔ x3) ∧ (¬x2 ↔ ¬x6) ∧ (x5 ↔ x5)
SUBST_CLAUSES = [
    [1, -3, 4, 7], [1, 3, 5],
    [1, 3], [-1, -3],
    [4, 3], [-4, -3],
    [2, -6], [-2, 6],
    [-5, 5], [5, -5],
]

PARITY_CLAUSES = [
    [-1, -2, 3], [-1, 2, -3], [1, -2, -3], [1, 2, 3],
    [-1, -4], [1, 4], [-2, -5], [2, 5],
]


def six_var_formula(w):
    """Truth value of the six-variable reference formula under ``w``."""
    x1, x2, x3, x4, x5, x6 = (w[i] for i in range(1, 7))
    left = (not x1) and x5 and (((not x2) and x4) or (x2 and (x3 == (not x4))))
    right = x1 and (x3 == (not x4)) and (x3 == x5)
    return (x5 == x6) and (left or right)


def six_var_cnf():
    """CNF of the reference formula: one blocking clause per non-model."""
    clauses = []
    for bits in itertools.product([False, True], repeat=6):
        w = dict(zip(range(1, 7), bits))
        if not six_var_formula(w):
            clauses.append([-v if w[v] else v for v in range(1, 7)])
    return CnfFormula.from_clauses(clauses, 6)


def build_six_var():
    """Hand-built diagram of the reference formula; v1..v5 name the inner nodes."""
    d = Diagram(6)
    v5 = d.decision(4, FALSE, TRUE)
    v3 = d.decision(5, FALSE, TRUE)
    x2_hi = d.kernelized(TRUE, [d.equivalence(3, -4)])
    v4 = d.decision(2, v5, x2_hi)
    v2 = d.decomposed([v3, v4])
    x1_hi = d.kernelized(TRUE, [d.equivalence(3, -4), d.equivalence(3, 5)])
    v1 = d.decision(1, v2, x1_hi)
    d.root = d.kernelized(v1, [d.equivalence(5, 6)])
    return d


@pytest.fixture
def subst():
    return CnfFormula.from_clauses(SUBST_CLAUSES, 7)


@pytest.fixture
def parity():
    return CnfFormula.from_clauses(PARITY_CLAUSES, 5)


@pytest.fixture
def six_var():
    return build_six_var()


_acceptance_lines = []


def record_acceptance(line):
    _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
