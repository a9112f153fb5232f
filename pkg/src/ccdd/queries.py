"""Polytime queries on a diagram: implicant, consistency, validity, enumeration."""

from __future__ import annotations

import typing as t

from .counter import ModelCount, ct
from .diagram import Diagram

__all__ = [
    "InconsistentTermError",
    "implicant_check",
    "consistency",
    "validity",
    "enumerate_models",
]


class InconsistentTermError(ValueError):
    pass


def _term(lits: t.Iterable[int]) -> t.Dict[int, bool]:
    term: t.Dict[int, bool] = {}
    for lit in lits:
        if lit == 0:
            raise ValueError("0 is not a literal")
        v, b = abs(lit), lit > 0
        if term.get(v, b) != b:
            raise InconsistentTermError(f"term contains {v} and {-v}")
        term[v] = b
    return term


def implicant_check(d: Diagram, term: t.Iterable[int], root: t.Optional[int] = None) -> bool:
    """Whether the consistent term (a set of literals) entails the diagram.

    A decision on a variable the term leaves open needs both branches to be
    entailed; conjunctions need every child; an equivalence ``x <-> l`` is
    entailed only when the term fixes both of its variables consistently.
    """
    tm = _term(term)
    nodes = d.nodes
    memo: t.Dict[int, bool] = {}
    for u in d.reachable(d.root if root is None else root):
        n = nodes[u]
        k = n.kind
        if k == "F":
            r = False
        elif k == "T":
            r = True
        elif k == "E":
            x, y = tm.get(n.var), tm.get(abs(n.lit))
            r = x is not None and y is not None and x == (y == (n.lit > 0))
        elif k == "D":
            b = tm.get(n.var)
            if b is None:
                r = memo[n.lo] and memo[n.hi]
            else:
                r = memo[n.hi] if b else memo[n.lo]
        else:
            r = all(memo[c] for c in n.children)
        memo[u] = r
    return memo[d.root if root is None else root]


def consistency(d: Diagram) -> bool:
    return bool(ct(d).root)


def validity(d: Diagram, scope: t.Optional[t.Iterable[int]] = None) -> bool:
    ann = ct(d, scope)
    return ann.root == ModelCount.power(ann.scope_size)


class _Sat:
    """Satisfiability of a node under a partial assignment.

    Under a kernelized node the equivalences can fix core variables, so
    the assignment passed to the core is extended first; results are
    memoized per node and relevant part of the assignment.
    """

    def __init__(self, d: Diagram) -> None:
        self.d = d
        self.memo: t.Dict[t.Tuple[int, t.Tuple[t.Tuple[int, bool], ...]], bool] = {}

    def __call__(self, u: int, asg: t.Mapping[int, bool]) -> bool:
        d = self.d
        n = d.nodes[u]
        if n.kind == "F":
            return False
        if n.kind == "T":
            return True
        vs = d.vars[u]
        local = tuple(sorted((v, b) for v, b in asg.items() if v in vs))
        key = (u, local)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        loc = dict(local)
        if n.kind == "E":
            x, y = loc.get(n.var), loc.get(abs(n.lit))
            r = x is None or y is None or x == (y == (n.lit > 0))
        elif n.kind == "D":
            b = loc.get(n.var)
            if b is None:
                r = self(n.lo, loc) or self(n.hi, loc)
            else:
                r = self(n.hi if b else n.lo, loc)
        elif n.kind == "A":
            r = all(self(c, loc) for c in n.children)
        else:
            r = self._kernelized(n, loc)
        self.memo[key] = r
        return r

    def _kernelized(self, n, loc: t.Dict[int, bool]) -> bool:
        ext = dict(loc)
        for e in n.children[1:]:
            eq = self.d.nodes[e]
            y = loc.get(abs(eq.lit))
            if y is None:
                continue
            want = y == (eq.lit > 0)
            if ext.get(eq.var, want) != want:
                return False
            ext[eq.var] = want
        for e in n.children[1:]:
            eq = self.d.nodes[e]
            x, y = ext.get(eq.var), ext.get(abs(eq.lit))
            if x is not None and y is not None and x != (y == (eq.lit > 0)):
                return False
        return self(n.children[0], ext)


def enumerate_models(d: Diagram, scope: t.Optional[t.Iterable[int]] = None,
                     limit: t.Optional[int] = None) -> t.Iterator[t.Dict[int, bool]]:
    """Yield models over ``scope`` in lexicographic order, false before true.

    Each prefix is extended only while it stays satisfiable, so the work per
    model is polynomial in the diagram size.
    """
    xs = sorted(set(range(1, d.num_vars + 1)) if scope is None else set(scope))
    if not d.variables() <= set(xs):
        raise ValueError("diagram variables outside the scope")
    if limit is not None and limit <= 0:
        return
    sat = _Sat(d)
    asg: t.Dict[int, bool] = {}
    emitted = 0

    def extend(i: int) -> t.Iterator[t.Dict[int, bool]]:
        if i == len(xs):
            yield dict(asg)
            return
        v = xs[i]
        for b in (False, True):
            asg[v] = b
            if sat(d.root, asg):
                yield from extend(i + 1)
        del asg[v]

    for model in extend(0):
        yield model
        emitted += 1
        if limit is not None and emitted >= limit:
            return
