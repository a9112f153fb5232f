"""Hash-consed CCDD node store.

Nodes live in an append-only table; children always have smaller ids than
their parents.  Node kinds use the one-letter codes of the text format:

``F``/``T``
    the constants.
``E``
    literal equivalence ``x <-> l``.
``D``
    decision on ``x`` with children ``(lo, hi)``.
``A``
    decomposed conjunction; children share no variables.
``K``
    kernelized conjunction; the first child is the core, the others are
    ``E`` nodes forming a prime equivalence system whose right-hand
    variables do not occur in the core.
"""

from __future__ import annotations

import io
import typing as t
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Node",
    "Diagram",
    "DiagramError",
    "CcddFormatError",
    "Violation",
    "FALSE",
    "TRUE",
    "validate",
    "evaluate",
    "evaluate_many",
    "serialize",
    "deserialize",
    "stats",
    "to_dot",
]

FALSE = 0
TRUE = 1


class DiagramError(ValueError):
    """A node would violate a structural invariant."""


class CcddFormatError(ValueError):
    """Malformed CCDD text."""


class Node(t.NamedTuple):
    kind: str
    var: int = 0
    lit: int = 0
    children: t.Tuple[int, ...] = ()

    @property
    def lo(self) -> int:
        return self.children[0]

    @property
    def hi(self) -> int:
        return self.children[1]


class Diagram:
    """Append-only node table with a unique table for structural sharing.

    ``F`` and ``T`` are always nodes 0 and 1.
    """

    def __init__(self, num_vars: int = 0) -> None:
        self.num_vars = num_vars
        self.nodes: t.List[Node] = []
        self.unique: t.Dict[Node, int] = {}
        self.vars: t.List[t.FrozenSet[int]] = []
        self.edges = 0
        self.root = TRUE
        self._intern(Node("F"), frozenset())
        self._intern(Node("T"), frozenset())

    def __len__(self) -> int:
        return len(self.nodes)

    def __getitem__(self, u: int) -> Node:
        return self.nodes[u]

    def _intern(self, node: Node, vs: t.FrozenSet[int]) -> int:
        u = self.unique.get(node)
        if u is None:
            u = len(self.nodes)
            self.nodes.append(node)
            self.vars.append(vs)
            self.unique[node] = u
            self.edges += len(node.children)
        return u

    def _check_child(self, c: int) -> None:
        if not 0 <= c < len(self.nodes):
            raise DiagramError(f"unknown child node {c}")

    # constructors

    def equivalence(self, x: int, lit: int) -> int:
        if x <= 0 or lit == 0 or abs(lit) == x:
            raise DiagramError(f"equivalence {x} <-> {lit} must relate two distinct variables")
        return self._intern(Node("E", x, lit), frozenset((x, abs(lit))))

    def decision(self, x: int, lo: int, hi: int) -> int:
        self._check_child(lo)
        self._check_child(hi)
        if lo == hi:
            return lo
        if x <= 0:
            raise DiagramError(f"bad decision variable {x}")
        if x in self.vars[lo] or x in self.vars[hi]:
            raise DiagramError(f"decision variable {x} occurs below its decision node")
        return self._intern(Node("D", x, 0, (lo, hi)), self.vars[lo] | self.vars[hi] | {x})

    def decomposed(self, children: t.Iterable[int]) -> int:
        kids = set()
        for c in children:
            self._check_child(c)
            if c == FALSE:
                return FALSE
            if c != TRUE:
                kids.add(c)
        if not kids:
            return TRUE
        if len(kids) == 1:
            return kids.pop()
        ordered = tuple(sorted(kids))
        seen: t.Set[int] = set()
        for c in ordered:
            shared = seen & self.vars[c]
            if shared:
                raise DiagramError(
                    f"decomposed conjunction children share variables {sorted(shared)}")
            seen |= self.vars[c]
        return self._intern(Node("A", children=ordered), frozenset(seen))

    def kernelized(self, core: int, equivalences: t.Iterable[int]) -> int:
        self._check_child(core)
        eqs = list(dict.fromkeys(equivalences))
        if core == FALSE:
            return FALSE
        if not eqs:
            return core
        for e in eqs:
            self._check_child(e)
            if self.nodes[e].kind != "E":
                raise DiagramError(f"kernelized child {e} is not an equivalence node")
        eqs.sort(key=lambda e: (self.nodes[e].var, abs(self.nodes[e].lit)))
        problem = _prime_system_problem([(self.nodes[e].var, self.nodes[e].lit) for e in eqs],
                                        self.vars[core])
        if problem:
            raise DiagramError(problem)
        vs = set(self.vars[core])
        for e in eqs:
            vs |= self.vars[e]
        return self._intern(Node("K", children=(core, *eqs)), frozenset(vs))

    def make_node(self, spec: Node) -> int:
        """Intern ``spec`` after checking its local invariants."""
        if spec.kind == "F":
            return FALSE
        if spec.kind == "T":
            return TRUE
        if spec.kind == "E":
            return self.equivalence(spec.var, spec.lit)
        if spec.kind == "D":
            return self.decision(spec.var, *spec.children)
        if spec.kind == "A":
            return self.decomposed(spec.children)
        if spec.kind == "K":
            return self.kernelized(spec.children[0], spec.children[1:])
        raise DiagramError(f"unknown node kind {spec.kind!r}")

    def add_raw(self, spec: Node) -> int:
        """Intern ``spec`` without any checks or reductions.

        Used when reading files and for building deliberately broken
        diagrams; run :func:`validate` afterwards.
        """
        for c in spec.children:
            self._check_child(c)
        if spec.kind in "FT":
            return FALSE if spec.kind == "F" else TRUE
        vs: t.Set[int] = set()
        if spec.kind == "E":
            vs = {spec.var, abs(spec.lit)}
        for c in spec.children:
            vs |= self.vars[c]
        if spec.kind == "D":
            vs.add(spec.var)
        return self._intern(spec, frozenset(vs))

    def reachable(self, root: t.Optional[int] = None) -> t.List[int]:
        """Ids reachable from ``root``, ascending (a topological order)."""
        root = self.root if root is None else root
        seen = {root}
        stack = [root]
        while stack:
            u = stack.pop()
            for c in self.nodes[u].children:
                if c not in seen:
                    seen.add(c)
                    stack.append(c)
        return sorted(seen)

    def variables(self, u: t.Optional[int] = None) -> t.FrozenSet[int]:
        return self.vars[self.root if u is None else u]


def _prime_system_problem(pairs: t.Sequence[t.Tuple[int, int]],
                          core_vars: t.AbstractSet[int]) -> t.Optional[str]:
    rights: t.Set[int] = set()
    lefts = {x for x, _ in pairs}
    for x, lit in pairs:
        r = abs(lit)
        if r <= x:
            return f"equivalence {x} <-> {lit}: left side is not the minimum of its class"
        if r in rights:
            return f"variable {r} is the right side of two equivalences"
        if r in lefts:
            return f"variable {r} is both a left and a right side"
        if r in core_vars:
            return f"right-side variable {r} occurs in the core"
        rights.add(r)
    return None


@dataclass(frozen=True)
class Violation:
    node: int
    kind: str
    message: str


def validate(d: Diagram) -> t.List[Violation]:
    """Check every reachable node; an empty list means the diagram is valid.

    Beyond the local shape rules this checks that no decision variable is
    decided again below itself (``read-once``) and that a decision variable
    does not reappear in an equivalence node below it (``decision-scope``),
    which linear-time counting relies on.
    """
    out: t.List[Violation] = []
    nodes = d.nodes
    decided: t.Dict[int, t.FrozenSet[int]] = {}
    for u in d.reachable():
        n = nodes[u]
        for c in n.children:
            if c >= u:
                out.append(Violation(u, "order", f"child {c} is not below parent {u}"))
        if n.kind in "FT":
            decided[u] = frozenset()
            continue
        below = frozenset().union(*(decided[c] for c in n.children if c < u))
        if n.kind == "E":
            if abs(n.lit) == n.var or n.var <= 0:
                out.append(Violation(u, "equivalence", f"{n.var} <-> {n.lit} is degenerate"))
        elif n.kind == "D":
            if len(n.children) != 2:
                out.append(Violation(u, "arity", "decision needs two children"))
            elif n.var in below:
                out.append(Violation(u, "read-once",
                                     f"variable {n.var} is decided again below node {u}"))
            elif n.var in d.vars[n.lo] or n.var in d.vars[n.hi]:
                out.append(Violation(u, "decision-scope",
                                     f"variable {n.var} occurs below its decision node {u}"))
            below = below | {n.var}
        elif n.kind == "A":
            if len(n.children) < 2:
                out.append(Violation(u, "arity", "decomposed conjunction needs two children"))
            seen: t.Set[int] = set()
            for c in n.children:
                shared = seen & d.vars[c]
                if shared:
                    out.append(Violation(u, "decomposable",
                                         f"children share variables {sorted(shared)}"))
                seen |= d.vars[c]
        elif n.kind == "K":
            if len(n.children) < 2:
                out.append(Violation(u, "arity", "kernelized conjunction needs a core and equivalences"))
            else:
                eqs = n.children[1:]
                bad = [e for e in eqs if nodes[e].kind != "E"]
                if bad:
                    out.append(Violation(u, "kernelized", f"children {bad} are not equivalences"))
                else:
                    problem = _prime_system_problem(
                        [(nodes[e].var, nodes[e].lit) for e in eqs], d.vars[n.children[0]])
                    if problem:
                        out.append(Violation(u, "kernelized", problem))
        else:
            out.append(Violation(u, "kind", f"unknown kind {n.kind!r}"))
        decided[u] = below
    return out


def evaluate(d: Diagram, u: t.Optional[int], omega: t.Mapping[int, bool]) -> bool:
    """Truth value of node ``u`` (the root by default) under ``omega``."""
    u = d.root if u is None else u
    memo: t.Dict[int, bool] = {}

    def val(v: int) -> bool:
        try:
            return omega[v]
        except KeyError:
            raise KeyError(f"variable {v} is unbound") from None

    for w in d.reachable(u):
        n = d.nodes[w]
        k = n.kind
        if k == "F":
            r = False
        elif k == "T":
            r = True
        elif k == "E":
            r = val(n.var) == (val(abs(n.lit)) == (n.lit > 0))
        elif k == "D":
            r = memo[n.hi] if val(n.var) else memo[n.lo]
        else:
            r = all(memo[c] for c in n.children)
        memo[w] = r
    return memo[u]


def evaluate_many(d: Diagram, u: t.Optional[int], columns: t.Mapping[int, np.ndarray]) -> np.ndarray:
    """Vectorized :func:`evaluate`: ``columns[v]`` holds one bool per assignment."""
    u = d.root if u is None else u
    size = len(next(iter(columns.values()))) if columns else 1
    memo: t.Dict[int, np.ndarray] = {}
    for w in d.reachable(u):
        n = d.nodes[w]
        k = n.kind
        if k == "F":
            r = np.zeros(size, dtype=bool)
        elif k == "T":
            r = np.ones(size, dtype=bool)
        elif k == "E":
            other = columns[abs(n.lit)]
            r = columns[n.var] == (other if n.lit > 0 else ~other)
        elif k == "D":
            r = np.where(columns[n.var], memo[n.hi], memo[n.lo])
        else:
            r = np.logical_and.reduce([memo[c] for c in n.children])
        memo[w] = r
    return memo[u]


def serialize(d: Diagram) -> bytes:
    """Text form: header, one node per line, root last.

    >>> serialize(Diagram(1))
    b'ccdd 1 1\\nT\\n'
    """
    ids = d.reachable()
    renum = {u: i for i, u in enumerate(ids)}
    buf = io.StringIO()
    buf.write(f"ccdd {d.num_vars} {len(ids)}\n")
    for u in ids:
        n = d.nodes[u]
        if n.kind in "FT":
            buf.write(n.kind)
        elif n.kind == "E":
            buf.write(f"E {n.var} {n.lit}")
        elif n.kind == "D":
            buf.write(f"D {n.var} {renum[n.lo]} {renum[n.hi]}")
        else:
            buf.write(f"{n.kind} {len(n.children)} " + " ".join(str(renum[c]) for c in n.children))
        buf.write("\n")
    return buf.getvalue().encode("ascii")


def deserialize(data: t.Union[bytes, str]) -> Diagram:
    """Parse the text form and validate the result."""
    if isinstance(data, bytes):
        data = data.decode("ascii")
    lines = data.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise CcddFormatError("empty input")
    head = lines[0].split()
    if len(head) != 3 or head[0] != "ccdd":
        raise CcddFormatError(f"bad header {lines[0]!r}")
    try:
        num_vars, num_nodes = int(head[1]), int(head[2])
    except ValueError:
        raise CcddFormatError(f"bad header {lines[0]!r}") from None
    body = lines[1:]
    if len(body) != num_nodes or num_nodes == 0:
        raise CcddFormatError(f"header declares {num_nodes} nodes, found {len(body)}")

    d = Diagram(num_vars)
    ids: t.List[int] = []

    def ref(tok: str, lineno: int) -> int:
        i = int(tok)
        if not 0 <= i < len(ids):
            raise CcddFormatError(f"line {lineno}: reference to undefined node {i}")
        return ids[i]

    for lineno, line in enumerate(body, 2):
        parts = line.split(" ")
        try:
            kind = parts[0]
            if kind in ("F", "T") and len(parts) == 1:
                spec = Node(kind)
            elif kind == "E" and len(parts) == 3:
                spec = Node("E", int(parts[1]), int(parts[2]))
                if not (0 < spec.var <= num_vars and 0 < abs(spec.lit) <= num_vars):
                    raise CcddFormatError(f"line {lineno}: variable out of range")
            elif kind == "D" and len(parts) == 4:
                x = int(parts[1])
                if not 0 < x <= num_vars:
                    raise CcddFormatError(f"line {lineno}: variable out of range")
                spec = Node("D", x, 0, (ref(parts[2], lineno), ref(parts[3], lineno)))
            elif kind in ("A", "K") and len(parts) >= 2:
                k = int(parts[1])
                if len(parts) != k + 2:
                    raise CcddFormatError(f"line {lineno}: expected {k} children")
                spec = Node(kind, children=tuple(ref(p, lineno) for p in parts[2:]))
            else:
                raise CcddFormatError(f"line {lineno}: malformed node {line!r}")
        except ValueError as e:
            if isinstance(e, CcddFormatError):
                raise
            raise CcddFormatError(f"line {lineno}: malformed node {line!r}") from None
        ids.append(d.add_raw(spec))
    d.root = ids[-1]
    problems = validate(d)
    if problems:
        p = problems[0]
        raise DiagramError(f"node {p.node}: {p.kind}: {p.message}")
    return d


def stats(d: Diagram) -> t.Dict[str, int]:
    ids = d.reachable()
    depth: t.Dict[int, int] = {}
    edges = knodes = decisions = 0
    for u in ids:
        n = d.nodes[u]
        edges += len(n.children)
        knodes += n.kind == "K"
        decisions += n.kind == "D"
        depth[u] = 1 + max((depth[c] for c in n.children), default=-1)
    return {
        "nodes": len(ids),
        "edges": edges,
        "kernelized_node_count": knodes,
        "decision_count": decisions,
        "max_depth": depth[d.root],
    }


def _label(n: Node) -> str:
    if n.kind == "F":
        return "⊥"
    if n.kind == "T":
        return "⊤"
    if n.kind == "E":
        return f"x{n.var} ↔ {'¬' if n.lit < 0 else ''}x{abs(n.lit)}"
    if n.kind == "D":
        return f"x{n.var}"
    return "∧d" if n.kind == "A" else "∧k"


def to_dot(d: Diagram) -> bytes:
    """Graphviz description; decision lo-edges are dashed."""
    lines = ["digraph ccdd {"]
    for u in reversed(d.reachable()):
        n = d.nodes[u]
        shape = "box" if n.kind in "FT" else "ellipse"
        lines.append(f'  n{u} [label="{_label(n)}", shape={shape}];')
        for i, c in enumerate(n.children):
            style = "dashed" if n.kind == "D" and i == 0 else "solid"
            lines.append(f"  n{u} -> n{c} [style={style}];")
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")
