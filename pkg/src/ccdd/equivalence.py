"""Literal equivalences: detection by probing, union-find closure and
literal substitution.
"""

from __future__ import annotations

import typing as t
from dataclasses import dataclass, field

from .formula import CnfFormula, bcp, condition, normalize_clause

__all__ = [
    "EquivalenceSystem",
    "KernelizationResult",
    "ContradictionError",
    "detect_lit_equ",
    "prime",
    "construct_core",
    "PROBE_CLAUSE_LIMIT",
    "EXTRA_PROBES",
]

# Detection is skipped on components larger than this.
PROBE_CLAUSE_LIMIT = 50_000
# Probed on top of the variables of binary clauses, best DLCP score first.
EXTRA_PROBES = 64


class ContradictionError(ValueError):
    """A literal was merged with its own negation."""


class EquivalenceSystem:
    """Union-find over variables with a parity bit per variable.

    ``parity[v]`` is the xor of ``v`` with its parent, so a class stores a
    literal equivalence between every member and the root, and
    ``find(-l) == -find(l)`` holds by construction.  Each class remembers
    its minimum variable, which is the representative reported by
    :meth:`find`.
    """

    def __init__(self) -> None:
        self.parent: t.Dict[int, int] = {}
        self.parity: t.Dict[int, bool] = {}
        self.rank: t.Dict[int, int] = {}
        self.minimum: t.Dict[int, int] = {}
        self.contradiction = False
        self.forced: t.List[int] = []

    def _add(self, v: int) -> None:
        if v not in self.parent:
            self.parent[v] = v
            self.parity[v] = False
            self.rank[v] = 0
            self.minimum[v] = v

    def _root(self, v: int) -> t.Tuple[int, bool]:
        self._add(v)
        path = []
        while self.parent[v] != v:
            path.append(v)
            v = self.parent[v]
        root = v
        # compress: parity of each node relative to root
        acc = False
        for node in reversed(path):
            acc ^= self.parity[node]
            self.parity[node] = acc
            self.parent[node] = root
        return root, (self.parity[path[0]] if path else False)

    def find(self, lit: int) -> int:
        """Representative literal equivalent to ``lit``.

        The representative is a literal of the smallest variable in the class.
        """
        root, par = self._root(abs(lit))
        m = self.minimum[root]
        _, mpar = self._root(m)
        neg = (lit < 0) ^ par ^ mpar
        return -m if neg else m

    def merge(self, a: int, b: int) -> None:
        """Record ``a <-> b`` (and so ``-a <-> -b``)."""
        ra, pa = self._root(abs(a))
        rb, pb = self._root(abs(b))
        # value(|a|) xor value(|b|) must equal this
        diff = (a < 0) ^ (b < 0)
        if ra == rb:
            if pa ^ pb != diff:
                self.contradiction = True
            return
        if self.rank[ra] < self.rank[rb]:
            ra, rb, pa, pb = rb, ra, pb, pa
        self.parent[rb] = ra
        self.parity[rb] = pa ^ pb ^ diff
        if self.rank[ra] == self.rank[rb]:
            self.rank[ra] += 1
        self.minimum[ra] = min(self.minimum[ra], self.minimum[rb])

    def classes(self) -> t.List[t.List[int]]:
        """Non-singleton classes as literal lists, each led by its representative."""
        groups: t.Dict[int, t.List[int]] = {}
        for v in sorted(self.parent):
            rep = self.find(v)
            groups.setdefault(abs(rep), []).append(v if rep > 0 else -v)
        return [g for _, g in sorted(groups.items()) if len(g) > 1]

    @classmethod
    def from_pairs(cls, pairs: t.Iterable[t.Tuple[int, int]]) -> "EquivalenceSystem":
        sys_ = cls()
        for a, b in pairs:
            sys_.merge(a, b)
        return sys_

    def __len__(self) -> int:
        return sum(len(c) - 1 for c in self.classes())


def prime(sys_: EquivalenceSystem) -> t.List[t.Tuple[int, int]]:
    """Prime literal equivalences ``(x, l)`` with ``x`` the minimum of its class.

    >>> prime(EquivalenceSystem.from_pairs([(-1, 3), (-4, 3), (-2, -6), (5, 5)]))
    [(1, -3), (1, 4), (2, 6)]
    """
    if sys_.contradiction:
        raise ContradictionError("equivalence system relates a literal to its negation")
    out = []
    for cls_ in sys_.classes():
        x = cls_[0]
        # shift polarity so the left side is the positive literal
        for lit in cls_[1:]:
            out.append((abs(x), lit if x > 0 else -lit))
    return out


@dataclass
class KernelizationResult:
    core: CnfFormula
    equivalences: t.List[t.Tuple[int, int]] = field(default_factory=list)


def _dlcp_rank(phi: CnfFormula, candidates: t.Iterable[int]) -> t.List[int]:
    from .ordering import dlcp_scores

    scores = dlcp_scores(phi)
    return sorted(candidates, key=lambda v: (-scores.get(v, 0), v))


def detect_lit_equ(phi: CnfFormula) -> EquivalenceSystem:
    """Find literal equivalences implied by ``phi`` through probing.

    For each probed variable ``x`` both ``x`` and ``-x`` are propagated; a
    literal implied by ``x`` whose negation is implied by ``-x`` is
    equivalent to ``x``.  A probe that conflicts yields a forced literal,
    collected in ``forced`` instead.
    """
    sys_ = EquivalenceSystem()
    if phi.is_false or phi.is_true:
        return sys_
    root = bcp(phi)
    if root.conflict:
        sys_.forced.extend(root.implied)
        sys_.contradiction = True
        return sys_
    if root.implied:
        sys_.forced.extend(root.implied)
        phi = condition(phi, root.implied)
    if len(phi.clauses) > PROBE_CLAUSE_LIMIT:
        return sys_

    binary = sorted({abs(l) for c in phi.clauses if len(c) == 2 for l in c})
    in_binary = set(binary)
    rest = [v for v in phi.variables if v not in in_binary]
    candidates = binary + _dlcp_rank(phi, rest)[:EXTRA_PROBES]

    forced = set(sys_.forced)
    for x in candidates:
        if x in forced or -x in forced:
            continue
        pos = bcp(phi, [x])
        neg = bcp(phi, [-x])
        if pos.conflict and neg.conflict:
            sys_.forced.extend([x, -x])
            sys_.contradiction = True
            return sys_
        if pos.conflict:
            sys_.forced.append(-x)
            forced.add(-x)
            continue
        if neg.conflict:
            sys_.forced.append(x)
            forced.add(x)
            continue
        neg_set = set(neg.implied)
        for lit in pos.implied[1:]:
            if -lit in neg_set:
                sys_.merge(x, lit)
    return sys_


def construct_core(phi: CnfFormula, prime_equs: t.Sequence[t.Tuple[int, int]]) -> KernelizationResult:
    """Substitute every right-hand literal by its class representative.

    The substituted clauses are normalized (tautologies, repeated literals
    and repeated clauses dropped) and unit-propagated; implied literals stay
    in the core as unit clauses so that the core together with the
    equivalences remains equivalent to ``phi``.
    """
    subst: t.Dict[int, int] = {}
    for x, lit in prime_equs:
        if abs(lit) == x:
            raise ContradictionError(f"equivalence {x} <-> {lit} is trivial or contradictory")
        if abs(lit) in subst:
            raise ValueError(f"variable {abs(lit)} occurs on two right sides")
        subst[abs(lit)] = x if lit > 0 else -x
    for x, _ in prime_equs:
        if x in subst:
            raise ValueError(f"variable {x} is both a left and a right side")

    seen: t.Set[t.Tuple[int, ...]] = set()
    clauses = []
    for c in phi.clauses:
        mapped = []
        for lit in c:
            rep = subst.get(abs(lit))
            if rep is None:
                mapped.append(lit)
            else:
                mapped.append(rep if lit > 0 else -rep)
        nc = normalize_clause(mapped)
        if nc is None:
            continue
        key = tuple(sorted(nc))
        if key in seen:
            continue
        seen.add(key)
        clauses.append(nc)
    core = phi.with_clauses(clauses)

    res = bcp(core)
    if res.conflict:
        core = phi.with_clauses([()])
    elif res.implied:
        core = condition(core, res.implied)
        core = core.with_clauses([(l,) for l in res.implied] + list(core.clauses))
    return KernelizationResult(core, list(prime_equs))
