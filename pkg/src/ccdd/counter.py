"""Exact model counting, by search or over a compiled diagram."""

from __future__ import annotations

import typing as t
from dataclasses import dataclass, field

from .compiler import Builder, CompilerConfig, Search
from .diagram import Diagram
from .formula import CnfFormula

__all__ = [
    "ModelCount",
    "CountError",
    "CountAnnotation",
    "ct",
    "exact_mc",
    "materialize",
    "COUNTING_CONFIG",
]


class CountError(ArithmeticError):
    """A power-of-two division left a fractional count."""


@dataclass(frozen=True)
class ModelCount:
    """``mantissa * 2**exp2`` with an odd (or zero) mantissa."""

    mantissa: int
    exp2: int = 0
    scope_size: t.Optional[int] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        m, e = self.mantissa, self.exp2
        if m < 0:
            raise ValueError("model counts are nonnegative")
        if m == 0:
            e = 0
        else:
            tz = (m & -m).bit_length() - 1
            m >>= tz
            e += tz
        object.__setattr__(self, "mantissa", m)
        object.__setattr__(self, "exp2", e)

    @classmethod
    def power(cls, k: int, scope_size: t.Optional[int] = None) -> "ModelCount":
        return cls(1, k, scope_size)

    @classmethod
    def of(cls, n: int) -> "ModelCount":
        return cls(n, 0)

    def __bool__(self) -> bool:
        return self.mantissa != 0

    def __add__(self, other: "ModelCount") -> "ModelCount":
        if not other.mantissa:
            return self
        if not self.mantissa:
            return other
        e = min(self.exp2, other.exp2)
        return ModelCount((self.mantissa << (self.exp2 - e)) + (other.mantissa << (other.exp2 - e)), e)

    def __mul__(self, other: "ModelCount") -> "ModelCount":
        return ModelCount(self.mantissa * other.mantissa, self.exp2 + other.exp2)

    def halve(self, k: int = 1) -> "ModelCount":
        """Divide by ``2**k``."""
        return ModelCount(self.mantissa, self.exp2 - k) if self.mantissa else self

    def is_integer(self) -> bool:
        return self.mantissa == 0 or self.exp2 >= 0

    def __int__(self) -> int:
        if not self.is_integer():
            raise CountError(f"count {self.mantissa}*2^{self.exp2} is not an integer")
        return self.mantissa << self.exp2

    def _cmp_key(self, other: "ModelCount") -> t.Tuple[int, int]:
        e = min(self.exp2, other.exp2)
        return self.mantissa << (self.exp2 - e), other.mantissa << (other.exp2 - e)

    def __lt__(self, other: "ModelCount") -> bool:
        a, b = self._cmp_key(other)
        return a < b

    def __le__(self, other: "ModelCount") -> bool:
        a, b = self._cmp_key(other)
        return a <= b

    def with_scope(self, n: int) -> "ModelCount":
        return ModelCount(self.mantissa, self.exp2, n)

    def __str__(self) -> str:
        return materialize(self)


def materialize(mc: ModelCount) -> str:
    """Exact decimal string.

    >>> materialize(ModelCount(5, 2))
    '20'
    """
    return str(int(mc))


class CountAnnotation:
    """Model count over a fixed scope for every node of a diagram."""

    def __init__(self, diagram: Diagram, scope_size: int, counts: t.Dict[int, ModelCount],
                 root: t.Optional[int] = None) -> None:
        self.diagram = diagram
        self.scope_size = scope_size
        self.counts = counts
        self.root_id = diagram.root if root is None else root

    def __getitem__(self, u: int) -> ModelCount:
        return self.counts[u]

    @property
    def root(self) -> ModelCount:
        return self.counts[self.root_id]


def _scope_size(d: Diagram, scope: t.Optional[t.Iterable[int]], root: int) -> int:
    if scope is None:
        xs = set(range(1, d.num_vars + 1))
    else:
        xs = set(scope)
    missing = d.variables(root) - xs
    if missing:
        raise ValueError(f"variables {sorted(missing)} of the diagram are outside the scope")
    return len(xs)


def ct(d: Diagram, scope: t.Optional[t.Iterable[int]] = None, root: t.Optional[int] = None) -> CountAnnotation:
    """Label every node reachable from the root with its count over ``scope``.

    ``scope`` defaults to ``1..d.num_vars``.  One bottom-up pass.
    """
    if root is None:
        root = d.root
    n = _scope_size(d, scope, root)
    full = ModelCount.power(n)
    counts: t.Dict[int, ModelCount] = {}
    nodes = d.nodes
    for u in d.reachable(root):
        node = nodes[u]
        k = node.kind
        if k == "F":
            c = ModelCount(0)
        elif k == "T":
            c = full
        elif k == "E":
            c = ModelCount.power(n - 1)
        elif k == "D":
            c = (counts[node.lo] + counts[node.hi]).halve()
        elif k == "A":
            c = full
            for ch in node.children:
                c = c * counts[ch]
            c = c.halve(len(node.children) * n)
        elif k == "K":
            c = counts[node.children[0]].halve(len(node.children) - 1)
        else:
            raise ValueError(f"unknown node kind {k!r}")
        if not c.is_integer():
            raise CountError(f"node {u}: inexact division")
        counts[u] = c.with_scope(n)
    return CountAnnotation(d, n, counts, root)


class CountBuilder(Builder[ModelCount]):
    """Counts over a fixed scope of ``n`` variables."""

    def __init__(self, n: int) -> None:
        self.n = n
        self.full = ModelCount.power(n)

    def false(self) -> ModelCount:
        return ModelCount(0)

    def true(self) -> ModelCount:
        return self.full

    def units(self, lits: t.Sequence[int], rest: ModelCount) -> ModelCount:
        return rest.halve(len(lits))

    def kernelized(self, core: ModelCount, equivalences: t.Sequence[t.Tuple[int, int]]) -> ModelCount:
        return core.halve(len(equivalences))

    def decomposed(self, parts: t.Sequence[ModelCount]) -> ModelCount:
        c = self.full
        for p in parts:
            c = c * p
        return c.halve(len(parts) * self.n)

    def decision(self, x: int, lo: ModelCount, hi: ModelCount) -> ModelCount:
        return (lo + hi).halve()


# crossover divisor used for counting (compilation uses 5)
COUNTING_CONFIG = CompilerConfig(crossover_divisor=7)


def exact_mc(phi: CnfFormula, config: t.Optional[CompilerConfig] = None) -> ModelCount:
    """Model count of ``phi`` over ``1..phi.num_vars`` without building a diagram."""
    config = config or COUNTING_CONFIG
    n = phi.num_vars
    result = Search(phi, config, CountBuilder(n)).run()
    if not result.is_integer():
        raise CountError("fractional model count")
    return result.with_scope(n)
