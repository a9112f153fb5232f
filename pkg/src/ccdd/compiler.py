"""Top-down compilation of CNF into CCDD.

The search in :class:`Search` is shared with the model counter: it walks
the formula exactly like the compiler and hands each step to a result
builder, which either allocates diagram nodes or combines counts.
"""

from __future__ import annotations

import sys
import typing as t
from contextlib import contextmanager
from dataclasses import dataclass, field

from .diagram import FALSE, TRUE, Diagram
from .equivalence import construct_core, detect_lit_equ, prime
from .formula import CnfFormula, bcp, condition, decompose, non_unit_var_count
from .ordering import dlcp_scores, minfill_order

__all__ = [
    "CompilerConfig",
    "CompileContext",
    "ResourceLimitError",
    "Builder",
    "DiagramBuilder",
    "Search",
    "compile_cnf",
    "should_kernelize",
    "pick_good_var",
    "KernelizedEvent",
]

R = t.TypeVar("R")


class ResourceLimitError(RuntimeError):
    """The configured node budget was exceeded."""


@dataclass
class CompilerConfig:
    kernelization_enabled: bool = True
    # kernelize once on the input formula before any decision
    pre_kernelize: bool = True
    # skip the hardness test and kernelize wherever equivalences exist
    kernelize_always: bool = False
    order_mode: str = "auto"
    crossover_divisor: int = 5
    easy_bound_cap: int = 128
    unit_threshold: int = 48
    unit_decision_ratio: int = 2
    rng_seed: int = 0
    node_budget: int = 50_000_000

    def __post_init__(self) -> None:
        if self.crossover_divisor < 1:
            raise ValueError("crossover_divisor must be >= 1")
        if self.order_mode not in ("auto", "minfill", "dlcp"):
            raise ValueError(f"unknown order mode {self.order_mode!r}")


@dataclass
class CompileContext:
    config: CompilerConfig
    root_non_unit_vars: int = 0
    static_order: t.Optional[t.List[int]] = None
    width: int = 0
    units: int = 0
    decisions: int = 0
    pre_kernelize_pending: bool = False
    cache: t.Dict[t.Any, t.Any] = field(default_factory=dict)

    @classmethod
    def for_formula(cls, phi: CnfFormula, config: CompilerConfig) -> "CompileContext":
        ctx = cls(config, root_non_unit_vars=non_unit_var_count(phi))
        ctx.pre_kernelize_pending = config.kernelization_enabled and config.pre_kernelize
        if config.order_mode != "dlcp" and not phi.is_false and not phi.is_true:
            ctx.static_order, ctx.width = minfill_order(phi)
        return ctx


def should_kernelize(ctx: CompileContext, phi: CnfFormula) -> bool:
    cfg = ctx.config
    if not cfg.kernelization_enabled:
        return False
    if ctx.pre_kernelize_pending:
        ctx.pre_kernelize_pending = False
        return True
    if cfg.kernelize_always:
        return True
    easy_bound = min(cfg.easy_bound_cap, ctx.root_non_unit_vars / 2)
    if len(phi.variables) <= easy_bound:
        return False
    return ctx.units > cfg.unit_threshold and ctx.units > cfg.unit_decision_ratio * ctx.decisions


def pick_good_var(ctx: CompileContext, phi: CnfFormula) -> int:
    """Branching variable: minfill position or best DLCP score.

    In ``auto`` mode DLCP is used when the minfill width exceeds
    ``min(128, root_non_unit_vars / crossover_divisor)``.
    """
    cfg = ctx.config
    mode = cfg.order_mode
    if mode == "auto":
        crossover = min(128, ctx.root_non_unit_vars / cfg.crossover_divisor)
        mode = "dlcp" if ctx.width > crossover else "minfill"
    if mode == "minfill" and ctx.static_order is not None:
        present = set(phi.variables)
        for v in ctx.static_order:
            if v in present:
                return v
    scores = dlcp_scores(phi)
    return min(phi.variables, key=lambda v: (-scores[v], v))


class Builder(t.Generic[R]):
    """Result algebra the search reports to."""

    def false(self) -> R:
        raise NotImplementedError

    def true(self) -> R:
        raise NotImplementedError

    def units(self, lits: t.Sequence[int], rest: R) -> R:
        raise NotImplementedError

    def kernelized(self, core: R, equivalences: t.Sequence[t.Tuple[int, int]]) -> R:
        raise NotImplementedError

    def decomposed(self, parts: t.Sequence[R]) -> R:
        raise NotImplementedError

    def decision(self, x: int, lo: R, hi: R) -> R:
        raise NotImplementedError


@dataclass
class KernelizedEvent:
    """Record of one kernelization step (kept when tracing is on)."""
    formula: CnfFormula
    core: CnfFormula
    equivalences: t.List[t.Tuple[int, int]]


class DiagramBuilder(Builder[int]):
    def __init__(self, num_vars: int, node_budget: int) -> None:
        self.diagram = Diagram(num_vars)
        self.node_budget = node_budget

    def _check(self, u: int) -> int:
        if self.diagram.edges > self.node_budget:
            raise ResourceLimitError(f"node budget of {self.node_budget} edges exceeded")
        return u

    def false(self) -> int:
        return FALSE

    def true(self) -> int:
        return TRUE

    def units(self, lits: t.Sequence[int], rest: int) -> int:
        d = self.diagram
        for lit in reversed(lits):
            if lit > 0:
                rest = d.decision(lit, FALSE, rest)
            else:
                rest = d.decision(-lit, rest, FALSE)
        return self._check(rest)

    def kernelized(self, core: int, equivalences: t.Sequence[t.Tuple[int, int]]) -> int:
        d = self.diagram
        eqs = [d.equivalence(x, l) for x, l in equivalences]
        return self._check(d.kernelized(core, eqs))

    def decomposed(self, parts: t.Sequence[int]) -> int:
        return self._check(self.diagram.decomposed(parts))

    def decision(self, x: int, lo: int, hi: int) -> int:
        return self._check(self.diagram.decision(x, lo, hi))


@contextmanager
def _recursion_room(limit: int = 20_000):
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, limit))
    try:
        yield
    finally:
        sys.setrecursionlimit(old)


class Search(t.Generic[R]):
    """Search over residual formulas with component caching.

    At every step: constant cases, unit propagation (implied literals are
    reported through :meth:`Builder.units`), cache lookup, optional
    kernelization, decomposition into components, and finally a decision.
    """

    def __init__(self, phi: CnfFormula, config: CompilerConfig, builder: Builder[R],
                 trace: bool = False) -> None:
        self.phi = phi
        self.config = config
        self.builder = builder
        self.ctx = CompileContext.for_formula(phi, config)
        self.events: t.Optional[t.List[KernelizedEvent]] = [] if trace else None

    def run(self) -> R:
        with _recursion_room(max(20_000, 20 * self.phi.num_vars + 1000)):
            return self._visit(self.phi)

    def _visit(self, phi: CnfFormula) -> R:
        b = self.builder
        ctx = self.ctx
        if phi.is_false:
            return b.false()
        if phi.is_true:
            return b.true()
        prop = bcp(phi)
        if prop.conflict:
            return b.false()
        if prop.implied:
            saved = ctx.units
            ctx.units += len(prop.implied)
            rest = self._visit(condition(phi, prop.implied))
            ctx.units = saved
            return b.units(prop.implied, rest)

        key = phi.key
        hit = ctx.cache.get(key)
        if hit is not None:
            return hit

        result = self._kernelize(phi) if should_kernelize(ctx, phi) else None
        if result is None:
            comps = decompose(phi)
            if len(comps) > 1:
                result = b.decomposed([self._visit(c) for c in comps])
            else:
                x = pick_good_var(ctx, phi)
                saved = ctx.decisions
                ctx.decisions += 1
                lo = self._visit(condition(phi, [-x]))
                hi = self._visit(condition(phi, [x]))
                ctx.decisions = saved
                result = b.decision(x, lo, hi)
        ctx.cache[key] = result
        return result

    def _kernelize(self, phi: CnfFormula) -> t.Optional[R]:
        ctx = self.ctx
        system = detect_lit_equ(phi)
        forced = list(dict.fromkeys(system.forced))
        if system.contradiction:
            return self.builder.false()
        equs = prime(system)
        if not equs:
            if not forced:
                return None
            # no equivalences but some literals are entailed; let
            # propagation handle them on the strengthened formula
            return self._visit(phi.with_clauses([(l,) for l in forced] + list(phi.clauses)))
        if forced:
            phi_units = phi.with_clauses([(l,) for l in forced] + list(phi.clauses))
        else:
            phi_units = phi
        kern = construct_core(phi_units, equs)
        if self.events is not None:
            self.events.append(KernelizedEvent(phi, kern.core, kern.equivalences))
        saved = ctx.units, ctx.decisions
        ctx.units = ctx.decisions = 0
        core = self._visit(kern.core)
        ctx.units, ctx.decisions = saved
        return self.builder.kernelized(core, kern.equivalences)


def compile_cnf(phi: CnfFormula, config: t.Optional[CompilerConfig] = None) -> Diagram:
    """Compile ``phi`` into a CCDD whose scope is ``1..phi.num_vars``."""
    config = config or CompilerConfig()
    builder = DiagramBuilder(phi.num_vars, config.node_budget)
    root = Search(phi, config, builder).run()
    builder.diagram.root = root
    return builder.diagram
