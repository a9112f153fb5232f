"""Random formula families used by the tests and demos."""

from __future__ import annotations

import random
import typing as t

from .formula import CnfFormula

__all__ = ["random_cnf", "random_ksat", "equivalence_chain"]


def random_cnf(rng: random.Random, num_vars: int, num_clauses: int,
               widths: t.Sequence[int] = (1, 2, 3, 4)) -> CnfFormula:
    """Clauses of width drawn from ``widths`` over distinct variables, random signs."""
    clauses = []
    for _ in range(num_clauses):
        k = min(rng.choice(widths), num_vars)
        clauses.append([v if rng.random() < 0.5 else -v
                        for v in rng.sample(range(1, num_vars + 1), k)])
    return CnfFormula.from_clauses(clauses, num_vars)


def random_ksat(rng: random.Random, num_vars: int, num_clauses: int, k: int = 3) -> CnfFormula:
    """Uniform random k-SAT, the generator behind SATLIB's uf instances."""
    return random_cnf(rng, num_vars, num_clauses, (k,))


def equivalence_chain(rng: random.Random, k: int, copies: int = 2,
                      core_clauses: t.Optional[int] = None) -> CnfFormula:
    """Random 3-CNF over ``x1..xk`` tied to ``copies`` chained copies.

    Each ``x_i`` for ``i > k`` is forced to ``not x_{i-k}`` by two binary
    clauses, so variables ``x_{i}, x_{i+k}, x_{i+2k}, ...`` alternate.
    """
    n = k * (copies + 1)
    m = core_clauses if core_clauses is not None else 2 * k
    core = random_cnf(rng, k, m, (3,))
    clauses = [list(c) for c in core.clauses]
    for i in range(1, n - k + 1):
        clauses.append([i, i + k])
        clauses.append([-i, -(i + k)])
    return CnfFormula.from_clauses(clauses, n)
