"""Uniform sampling of models from a count-annotated diagram.

Randomness comes from :class:`random.Random` (MT19937), used only through
``getrandbits``, whose output is defined bit-for-bit across platforms.
Bernoulli draws compare a uniform integer with an exact count, so no
floating point is involved.
"""

from __future__ import annotations

import random
import typing as t

from .counter import CountAnnotation, ModelCount, ct
from .diagram import Diagram

__all__ = [
    "SamplerState",
    "InconsistentError",
    "exact_bernoulli",
    "sample",
    "sample_sub",
    "format_model",
]


class InconsistentError(ValueError):
    """The diagram has no models."""


def _as_int_pair(num: t.Union[int, ModelCount], den: t.Union[int, ModelCount]) -> t.Tuple[int, int]:
    if isinstance(num, int) and isinstance(den, int):
        return num, den
    if isinstance(num, int):
        num = ModelCount.of(num)
    if isinstance(den, int):
        den = ModelCount.of(den)
    e = min(num.exp2, den.exp2)
    return num.mantissa << (num.exp2 - e), den.mantissa << (den.exp2 - e)


def exact_bernoulli(rng: random.Random, num: t.Union[int, ModelCount],
                    den: t.Union[int, ModelCount]) -> bool:
    """True with probability exactly ``num / den``.

    Draws ``r`` uniformly from ``[0, den)`` by rejection on
    ``bit_length(den - 1)``-bit blocks and returns ``r < num``.
    """
    n, d = _as_int_pair(num, den)
    if d <= 0:
        raise ValueError("denominator must be positive")
    if not 0 <= n <= d:
        raise ValueError("probability outside [0, 1]")
    if n == 0:
        return False
    if n == d:
        return True
    k = (d - 1).bit_length()
    while True:
        r = rng.getrandbits(k)
        if r < d:
            return r < n


class SamplerState:
    """Diagram plus counts over its own variables and a seeded generator.

    ``scope`` widens the variables a sample covers; variables outside the
    diagram are filled with fair bits.
    """

    def __init__(self, diagram: Diagram, seed: t.Optional[int] = 0,
                 scope: t.Optional[t.Iterable[int]] = None,
                 rng: t.Optional[random.Random] = None) -> None:
        self.diagram = diagram
        vs = diagram.variables()
        self.scope = sorted(vs if scope is None else set(scope) | vs)
        self.annotation: CountAnnotation = ct(diagram, vs)
        self.rng = rng if rng is not None else random.Random(seed)

    @property
    def count(self) -> ModelCount:
        return self.annotation.root


def sample_sub(st: SamplerState, u: int) -> t.Dict[int, bool]:
    """Partial model of node ``u`` drawn proportionally to model counts."""
    d = st.diagram
    counts = st.annotation
    omega: t.Dict[int, bool] = {}
    stack = [u]
    while stack:
        u = stack.pop()
        n = d.nodes[u]
        k = n.kind
        if k == "T":
            continue
        if k == "F":
            raise AssertionError(f"sampling reached the false node from node {u}")
        if k == "A":
            stack.extend(reversed(n.children))
        elif k == "K":
            omega.update(sample_sub(st, n.children[0]))
            for e in n.children[1:]:
                _bind_equivalence(st, d.nodes[e], omega)
        elif k == "E":
            _bind_equivalence(st, n, omega)
        elif k == "D":
            lo, hi = counts[n.lo], counts[n.hi]
            b = exact_bernoulli(st.rng, hi, lo + hi)
            omega[n.var] = b
            stack.append(n.hi if b else n.lo)
        else:
            raise ValueError(f"unknown node kind {k!r}")
    return omega


def _bind_equivalence(st: SamplerState, eq, omega: t.Dict[int, bool]) -> None:
    x, lit = eq.var, eq.lit
    if x not in omega:
        omega[x] = st.rng.getrandbits(1) == 1
    omega[abs(lit)] = omega[x] == (lit > 0)


def sample(st: SamplerState) -> t.Dict[int, bool]:
    """One model over ``st.scope``, uniformly at random."""
    if not st.count:
        raise InconsistentError("the diagram has no models")
    omega = sample_sub(st, st.diagram.root)
    for v in st.scope:
        if v not in omega:
            omega[v] = st.rng.getrandbits(1) == 1
    return {v: omega[v] for v in st.scope}


def format_model(omega: t.Mapping[int, bool]) -> str:
    """Signed DIMACS literals in ascending variable order."""
    return " ".join(str(v if omega[v] else -v) for v in sorted(omega))
