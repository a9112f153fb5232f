"""Variable ordering heuristics: static minfill and dynamic DLCP scores."""

from __future__ import annotations

import typing as t
from fractions import Fraction

from .formula import CnfFormula

__all__ = ["primal_graph", "minfill_order", "dlcp_scores", "dlcp_score"]


def primal_graph(phi: CnfFormula) -> t.Dict[int, t.Set[int]]:
    """Adjacency sets; variables are adjacent iff they share a clause."""
    adj: t.Dict[int, t.Set[int]] = {v: set() for v in phi.variables}
    for c in phi.clauses:
        vs = [abs(l) for l in c]
        for i, a in enumerate(vs):
            for b in vs[i + 1:]:
                if a != b:
                    adj[a].add(b)
                    adj[b].add(a)
    return adj


def minfill_order(phi: CnfFormula) -> t.Tuple[t.List[int], int]:
    """Greedy min-fill elimination order and its induced width.

    Ties go to the smallest variable.  Declared variables that occur in no
    clause are appended in index order.
    """
    adj = primal_graph(phi)
    order: t.List[int] = []
    width = 0
    remaining = set(adj)
    while remaining:
        best = None
        best_fill = None
        for v in sorted(remaining):
            nbrs = list(adj[v])
            fill = 0
            for i, a in enumerate(nbrs):
                na = adj[a]
                for b in nbrs[i + 1:]:
                    if b not in na:
                        fill += 1
            if best_fill is None or fill < best_fill:
                best, best_fill = v, fill
                if fill == 0:
                    break
        nbrs = list(adj[best])
        width = max(width, len(nbrs))
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1:]:
                adj[a].add(b)
                adj[b].add(a)
        for a in nbrs:
            adj[a].discard(best)
        del adj[best]
        remaining.remove(best)
        order.append(best)
    present = set(order)
    order.extend(v for v in range(1, phi.num_vars + 1) if v not in present)
    return order, width


def _weight(length: int) -> Fraction:
    if length == 2:
        return Fraction(2)
    if length > 2:
        return Fraction(1, length)
    return Fraction(0)


def dlcp_scores(phi: CnfFormula) -> t.Dict[int, Fraction]:
    """DLCP score of every variable of ``phi``.

    The score is the product of the weighted positive and negative
    occurrence counts.  Binary clauses weigh 2 and longer clauses of
    ``m`` literals weigh ``1/m``.  There is no clause learning, so the
    weight class for learnt binary clauses never applies.
    """
    pos: t.Dict[int, Fraction] = {}
    neg: t.Dict[int, Fraction] = {}
    for c in phi.clauses:
        w = _weight(len(c))
        if not w:
            continue
        for lit in c:
            side = pos if lit > 0 else neg
            side[abs(lit)] = side.get(abs(lit), Fraction(0)) + w
    return {v: pos.get(v, Fraction(0)) * neg.get(v, Fraction(0)) for v in phi.variables}


def dlcp_score(phi: CnfFormula, x: int) -> Fraction:
    return dlcp_scores(phi).get(x, Fraction(0))
