"""CNF formulas over positive-integer variables.

Literals are plain signed integers in DIMACS convention: ``v`` is the
positive literal of variable ``v`` and ``-v`` its negation.  Assignments
are ``dict[int, bool]`` keyed by variable.
"""

from __future__ import annotations

import io
import typing as t
import warnings
from dataclasses import dataclass
from functools import cached_property

Clause = t.Tuple[int, ...]
Assignment = t.Dict[int, bool]

__all__ = [
    "CnfFormula",
    "DimacsError",
    "PropagationResult",
    "parse_dimacs",
    "to_dimacs",
    "condition",
    "bcp",
    "decompose",
    "evaluate",
    "non_unit_var_count",
    "normalize_clause",
]


class DimacsError(ValueError):
    """Raised on malformed DIMACS input."""


def normalize_clause(lits: t.Iterable[int]) -> t.Optional[Clause]:
    """Drop duplicate literals, keeping first occurrences.

    Returns None for a tautological clause.
    """
    seen: t.Set[int] = set()
    out = []
    for lit in lits:
        if -lit in seen:
            return None
        if lit not in seen:
            seen.add(lit)
            out.append(lit)
    return tuple(out)


@dataclass(frozen=True, eq=False)
class CnfFormula:
    """An immutable clause list over variables ``1..num_vars``.

    Clauses are stored in input order.  A formula containing the empty
    clause is constant-false; one with no clauses is constant-true.
    """

    num_vars: int
    clauses: t.Tuple[Clause, ...] = ()

    @classmethod
    def from_clauses(cls, clauses: t.Iterable[t.Iterable[int]],
                     num_vars: t.Optional[int] = None) -> "CnfFormula":
        """Build a normalized formula; tautologies are dropped."""
        normed = []
        for c in clauses:
            nc = normalize_clause(c)
            if nc is not None:
                normed.append(nc)
        if num_vars is None:
            num_vars = max((abs(l) for c in normed for l in c), default=0)
        for c in normed:
            for lit in c:
                if lit == 0 or abs(lit) > num_vars:
                    raise ValueError(f"literal {lit} out of range 1..{num_vars}")
        return cls(num_vars, tuple(normed))

    @property
    def is_false(self) -> bool:
        return any(len(c) == 0 for c in self.clauses)

    @property
    def is_true(self) -> bool:
        return not self.clauses

    @cached_property
    def variables(self) -> t.Tuple[int, ...]:
        """Sorted variables occurring in some clause."""
        return tuple(sorted({abs(l) for c in self.clauses for l in c}))

    @cached_property
    def occurrences(self) -> t.Dict[int, t.List[int]]:
        """Map literal -> indices of clauses containing it, ascending."""
        occ: t.Dict[int, t.List[int]] = {}
        for i, c in enumerate(self.clauses):
            for lit in c:
                occ.setdefault(lit, []).append(i)
        return occ

    @cached_property
    def key(self) -> t.Tuple[Clause, ...]:
        """Canonical structural key: sorted, deduplicated, sorted clauses."""
        return tuple(sorted({tuple(sorted(c, key=lambda l: (abs(l), l)))
                             for c in self.clauses}))

    def with_clauses(self, clauses: t.Iterable[Clause]) -> "CnfFormula":
        return CnfFormula(self.num_vars, tuple(clauses))

    def __len__(self) -> int:
        return len(self.clauses)

    def __repr__(self) -> str:
        return f"CnfFormula(num_vars={self.num_vars}, clauses={list(self.clauses)})"


def parse_dimacs(text: t.Union[str, bytes, t.IO]) -> CnfFormula:
    """Parse DIMACS CNF.

    Comment lines start with ``c``.  A mismatch between the declared and
    actual clause count only warns.

    >>> parse_dimacs("p cnf 2 2\\n1 2 0\\n-1 0\\n").clauses
    ((1, 2), (-1,))
    """
    if isinstance(text, bytes):
        text = text.decode("ascii")
    elif not isinstance(text, str):
        text = text.read()
        if isinstance(text, bytes):
            text = text.decode("ascii")

    num_vars = num_clauses = None
    clauses: t.List[t.List[int]] = []
    current: t.List[int] = []
    for lineno, line in enumerate(io.StringIO(text), 1):
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            # SATLIB benchmark files end with "%\n0"
            break
        if line.startswith("p"):
            parts = line.split()
            if num_vars is not None:
                raise DimacsError(f"line {lineno}: duplicate header")
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed header {line!r}") from None
            if num_vars < 0 or num_clauses < 0:
                raise DimacsError(f"line {lineno}: negative counts in header")
            continue
        if num_vars is None:
            raise DimacsError(f"line {lineno}: clause before header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"line {lineno}: bad token {tok!r}") from None
            if lit == 0:
                clauses.append(current)
                current = []
            elif abs(lit) > num_vars:
                raise DimacsError(f"line {lineno}: literal {lit} out of range 1..{num_vars}")
            else:
                current.append(lit)
    if num_vars is None:
        raise DimacsError("missing 'p cnf' header")
    if current:
        raise DimacsError("last clause is not terminated by 0")
    if len(clauses) != num_clauses:
        warnings.warn(f"header declares {num_clauses} clauses, found {len(clauses)}")
    return CnfFormula.from_clauses(clauses, num_vars)


def to_dimacs(phi: CnfFormula) -> str:
    lines = [f"p cnf {phi.num_vars} {len(phi.clauses)}"]
    lines += [" ".join(map(str, c + (0,))) for c in phi.clauses]
    return "\n".join(lines) + "\n"


def condition(phi: CnfFormula, lits: t.Iterable[int]) -> CnfFormula:
    """Return ``phi`` with every literal in ``lits`` set to true."""
    true_lits = set(lits)
    for lit in true_lits:
        if -lit in true_lits:
            raise ValueError(f"contradictory literals {lit} and {-lit}")
    if not true_lits:
        return phi
    out = []
    for c in phi.clauses:
        if any(l in true_lits for l in c):
            continue
        out.append(tuple(l for l in c if -l not in true_lits))
    return phi.with_clauses(out)


@dataclass(frozen=True)
class PropagationResult:
    consistent: bool
    implied: t.Tuple[int, ...]

    @property
    def conflict(self) -> bool:
        return not self.consistent


def bcp(phi: CnfFormula, assumptions: t.Sequence[int] = ()) -> PropagationResult:
    """Unit propagation to fixpoint.

    ``implied`` lists assumptions first, then derived literals in the order
    they were found.  Unit clauses are taken in clause order and each newly
    assigned literal visits the clauses it falsifies in clause order.
    """
    value: t.Dict[int, bool] = {}
    trail: t.List[int] = []

    def assign(lit: int) -> bool:
        v = abs(lit)
        have = value.get(v)
        if have is None:
            value[v] = lit > 0
            trail.append(lit)
            return True
        return have == (lit > 0)

    for lit in assumptions:
        if not assign(lit):
            return PropagationResult(False, tuple(trail))
    clauses = phi.clauses
    for c in clauses:
        if len(c) == 0:
            return PropagationResult(False, tuple(trail))
        if len(c) == 1 and not assign(c[0]):
            return PropagationResult(False, tuple(trail))

    occ = phi.occurrences
    head = 0
    while head < len(trail):
        lit = trail[head]
        head += 1
        for ci in occ.get(-lit, ()):
            unassigned = None
            n_unassigned = 0
            satisfied = False
            for l in clauses[ci]:
                have = value.get(abs(l))
                if have is None:
                    n_unassigned += 1
                    unassigned = l
                elif have == (l > 0):
                    satisfied = True
                    break
            if satisfied:
                continue
            if n_unassigned == 0:
                return PropagationResult(False, tuple(trail))
            if n_unassigned == 1:
                assign(unassigned)
    return PropagationResult(True, tuple(trail))


def decompose(phi: CnfFormula) -> t.List[CnfFormula]:
    """Split ``phi`` into variable-disjoint components of its primal graph.

    Components are ordered by their smallest variable.
    """
    parent: t.Dict[int, int] = {}

    def find(v: int) -> int:
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    for c in phi.clauses:
        for lit in c:
            parent.setdefault(abs(lit), abs(lit))
        if c:
            r0 = find(abs(c[0]))
            for lit in c[1:]:
                r = find(abs(lit))
                if r != r0:
                    # smaller variable becomes the root
                    if r < r0:
                        r, r0 = r0, r
                    parent[r] = r0
    groups: t.Dict[int, t.List[Clause]] = {}
    for c in phi.clauses:
        if c:
            groups.setdefault(find(abs(c[0])), []).append(c)
    return [phi.with_clauses(groups[r]) for r in sorted(groups)]


def evaluate(phi: CnfFormula, omega: t.Mapping[int, bool]) -> bool:
    """Truth value of ``phi`` under an assignment covering its variables."""
    for c in phi.clauses:
        for lit in c:
            try:
                val = omega[abs(lit)]
            except KeyError:
                raise KeyError(f"variable {abs(lit)} is unbound") from None
            if val == (lit > 0):
                break
        else:
            return False
    return True


def non_unit_var_count(phi: CnfFormula) -> int:
    """Distinct variables in clauses of length >= 2.

    The compiler evaluates this once on the input formula.
    """
    return len({abs(l) for c in phi.clauses if len(c) >= 2 for l in c})
