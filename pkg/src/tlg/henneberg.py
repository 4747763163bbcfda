"""Restricted Henneberg constructions (RHC) and general Henneberg sequences.

An RHC starts from a triangle and repeatedly attaches a new node to both
endpoints of an existing edge. Programs keep exact node labels: a step's
``node`` is any label not used yet, and the finished graph must use exactly
the labels ``0..n-1``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import InvalidStep, InvariantViolation, NotTlg, TlgError
from .graph import (
    Edge,
    Graph,
    Triangle,
    is_simple_edge,
    is_triangle,
    is_tlg,
    norm_edge,
)


@dataclass(frozen=True)
class RhcStep:
    edge: Edge
    node: int


@dataclass(frozen=True)
class RhcProgram:
    initial: Triangle
    steps: tuple[RhcStep, ...] = ()

    @property
    def n(self) -> int:
        return 3 + len(self.steps)

    def node_order(self) -> list[int]:
        return [*self.initial, *(s.node for s in self.steps)]

    def triangle_order(self) -> list[Triangle]:
        """Triangles in order of appearance."""
        out = [tuple(sorted(self.initial))]
        out += [tuple(sorted((*s.edge, s.node))) for s in self.steps]
        return out

    def to_json(self) -> dict:
        return {
            "initial": list(self.initial),
            "steps": [{"edge": list(s.edge), "node": s.node} for s in self.steps],
        }

    @classmethod
    def from_json(cls, data: dict) -> RhcProgram:
        try:
            initial = tuple(int(x) for x in data["initial"])
            steps = tuple(
                RhcStep(norm_edge(*(int(x) for x in s["edge"])), int(s["node"]))
                for s in data["steps"]
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise TlgError(f"malformed RHC program JSON: {exc!r}") from None
        if len(initial) != 3:
            raise TlgError("RHC program 'initial' must list three nodes")
        return cls(initial, steps)


def rhc_execute(p: RhcProgram) -> Graph:
    """Run an RHC program and return the resulting graph."""
    a, b, c = p.initial
    if len({a, b, c}) != 3 or min(a, b, c) < 0:
        raise InvalidStep(0, f"initial triangle {p.initial} needs three distinct nodes")
    nodes = {a, b, c}
    edges = {norm_edge(a, b), norm_edge(b, c), norm_edge(a, c)}
    for k, step in enumerate(p.steps):
        u, v = step.edge
        if norm_edge(u, v) not in edges:
            raise InvalidStep(k, f"base edge {step.edge} not present")
        if step.node in nodes or step.node < 0:
            raise InvalidStep(k, f"node {step.node} already used")
        nodes.add(step.node)
        edges.add(norm_edge(u, step.node))
        edges.add(norm_edge(v, step.node))
    n = len(nodes)
    if nodes != set(range(n)):
        raise InvalidStep(len(p.steps), f"node labels {sorted(nodes)} are not 0..{n - 1}")
    return Graph(n, frozenset(edges))


def _removable(adj, alive):
    """Alive nodes of degree 2 (within ``alive``) whose two neighbours are adjacent."""
    out = []
    for v in alive:
        nb = [w for w in adj[v] if w in alive]
        if len(nb) == 2 and nb[1] in adj[nb[0]]:
            out.append((v, nb))
    return out


def _peel(g: Graph) -> tuple[Triangle, list[RhcStep]]:
    if g.n < 3:
        raise NotTlg(f"{g.n} nodes; at least 3 required")
    if g.m != 2 * g.n - 3:
        raise NotTlg(f"edge count {g.m} != {2 * g.n - 3}")
    adj = g.adj
    alive = set(range(g.n))
    removed = []
    while len(alive) > 3:
        cands = _removable(adj, alive)
        if not cands:
            raise NotTlg(f"no removable degree-2 node among {len(alive)} remaining")
        v, nb = max(cands)
        alive.discard(v)
        removed.append(RhcStep(norm_edge(*nb), v))
    tri = tuple(sorted(alive))
    if not is_triangle(g, tri):
        raise NotTlg(f"residue {tri} is not a triangle")
    return tri, removed[::-1]


def rhc_recognize(g: Graph) -> RhcProgram:
    """Certificate that ``g`` is a TLG, or :class:`NotTlg`.

    Repeatedly removes the largest-index degree-2 node whose neighbours are
    adjacent, then reverses the removal order. Labels are preserved exactly.
    """
    tri, steps = _peel(g)
    return RhcProgram(tri, tuple(steps))


def rhc_from_triangle(g: Graph, t) -> RhcProgram:
    """An RHC program for ``g`` whose initial triangle is ``t``.

    Peels the last node of some RHC; if ``t`` survives the peel, recurse on
    the smaller graph and re-attach the node. Otherwise ``t`` is the last
    triangle: grow from ``t`` to a neighbouring triangle sharing its base
    edge and recurse from that one.
    """
    t = tuple(sorted(t))
    if not is_triangle(g, t):
        raise TlgError(f"{t} is not a triangle of the graph")
    if not is_tlg(g):
        raise NotTlg("graph fails the chordality or Laman test")
    adj = g.adj
    return RhcProgram(t, tuple(_reroot(adj, set(range(g.n)), t)))


def _reroot(adj, alive: set, t: Triangle) -> list[RhcStep]:
    if len(alive) == 3:
        return []
    v, (p, q) = max(_removable(adj, alive))
    rest = alive - {v}
    base = norm_edge(p, q)
    if v not in t:
        return _reroot(adj, rest, t) + [RhcStep(base, v)]
    # t = {p, q, v}; pick another triangle on the base edge inside the rest
    k = min(w for w in adj[p] & adj[q] if w in rest)
    other = tuple(sorted((p, q, k)))
    return [RhcStep(base, k)] + _reroot(adj, rest, other)


def random_rhc(n: int, rng: np.random.Generator) -> RhcProgram:
    """RHC on ``n`` nodes from triangle (0, 1, 2); base edges drawn uniformly."""
    if n < 3:
        raise TlgError("an RHC needs at least 3 nodes")
    edges = [(0, 1), (0, 2), (1, 2)]
    steps = []
    for v in range(3, n):
        e = edges[int(rng.integers(len(edges)))]
        steps.append(RhcStep(e, v))
        edges += [(e[0], v), (e[1], v)]
    return RhcProgram((0, 1, 2), tuple(steps))


# -- general Henneberg constructions -------------------------------------------


@dataclass(frozen=True)
class NodeAdd:
    i: int
    j: int


@dataclass(frozen=True)
class EdgeSplit:
    edge: Edge
    k: int


HennebergStep = Union[NodeAdd, EdgeSplit]


class Violation(enum.Enum):
    """The three Henneberg moves that destroy chordality."""

    OPTION1 = "node-add on non-adjacent nodes"
    OPTION2 = "edge-split on a non-simple edge"
    OPTION3 = "edge-split whose edge and node do not form a triangle"


def _apply(nodes: int, edges: set, step: HennebergStep, index: int) -> None:
    """Apply ``step`` in place; the new node is labelled ``nodes``."""
    new = nodes
    if isinstance(step, NodeAdd):
        i, j = step.i, step.j
        if i == j or not (0 <= i < new and 0 <= j < new):
            raise InvalidStep(index, f"node-add on invalid pair ({i}, {j})")
        edges.update((norm_edge(i, new), norm_edge(j, new)))
    elif isinstance(step, EdgeSplit):
        e = norm_edge(*step.edge)
        if e not in edges:
            raise InvalidStep(index, f"edge-split on missing edge {e}")
        if not (0 <= step.k < new) or step.k in e:
            raise InvalidStep(index, f"edge-split node {step.k} invalid for edge {e}")
        edges.discard(e)
        edges.update((norm_edge(e[0], new), norm_edge(e[1], new), norm_edge(step.k, new)))
    else:
        raise InvalidStep(index, f"unknown step {step!r}")


def henneberg_execute(steps: Sequence[HennebergStep], initial: Edge = (0, 1)) -> Graph:
    """Run a Henneberg sequence starting from the single edge ``initial``.

    The initial edge must join nodes 0 and 1; each step adds the next label.
    """
    if norm_edge(*initial) != (0, 1):
        raise InvalidStep(0, f"initial edge must be (0, 1), got {initial}")
    edges = {(0, 1)}
    for k, step in enumerate(steps):
        _apply(2 + k, edges, step, k)
    return Graph(2 + len(steps), frozenset(edges))


def classify_step_violation(g: Graph, s: HennebergStep) -> Violation | None:
    """Which chordality-breaking option ``s`` is when applied to ``g``, if any."""
    _apply(g.n, set(g.edges), s, 0)  # applicability check
    if isinstance(s, NodeAdd):
        return None if g.has_edge(s.i, s.j) else Violation.OPTION1
    if not is_simple_edge(g, s.edge):
        return Violation.OPTION2
    if not is_triangle(g, (*s.edge, s.k)):
        return Violation.OPTION3
    return None


def henneberg_to_rhc(steps: Sequence[HennebergStep], initial: Edge = (0, 1)) -> RhcProgram:
    """Rewrite a Henneberg sequence producing a TLG into an RHC program.

    Each admissible edge-split of ``(i, j)`` with apex ``k`` (new node ``q``)
    is removed by re-rooting the RHC built so far at triangle ``{i, j, k}``
    and replacing its start with triangle ``{i, k, q}`` followed by a node-add
    of ``j`` on ``(k, q)``. Later steps never use ``(i, j)`` because it was
    simple, so the rewritten program builds the same graph.
    """
    final = henneberg_execute(steps, initial)
    if not is_tlg(final):
        raise NotTlg("the Henneberg sequence does not produce a TLG")
    if not steps or steps[0] != NodeAdd(0, 1) and steps[0] != NodeAdd(1, 0):
        raise InvariantViolation("a TLG sequence must open with a node-add on the initial edge")
    prog = RhcProgram((0, 1, 2))
    for k, step in enumerate(steps[1:], start=1):
        q = 2 + k
        current = rhc_execute(prog)
        if isinstance(step, NodeAdd):
            if not current.has_edge(step.i, step.j):
                raise InvariantViolation(f"step {k}: node-add on non-adjacent pair in a TLG sequence")
            prog = RhcProgram(prog.initial, prog.steps + (RhcStep(norm_edge(step.i, step.j), q),))
            continue
        i, j = step.edge
        if classify_step_violation(current, step) is not None:
            raise InvariantViolation(f"step {k}: inadmissible edge-split in a TLG sequence")
        rooted = rhc_from_triangle(current, (i, j, step.k))
        prog = RhcProgram(
            tuple(sorted((i, step.k, q))),
            (RhcStep(norm_edge(step.k, q), j),) + rooted.steps,
        )
    return prog


def rhc_to_henneberg(p: RhcProgram) -> list[HennebergStep]:
    """Node-add sequence equivalent to a canonically labelled RHC program."""
    if sorted(p.initial) != [0, 1, 2] or any(s.node != 3 + k for k, s in enumerate(p.steps)):
        raise TlgError("program must use labels in construction order")
    return [NodeAdd(0, 1)] + [NodeAdd(*s.edge) for s in p.steps]


__all__ = [
    "RhcStep",
    "RhcProgram",
    "rhc_execute",
    "rhc_recognize",
    "rhc_from_triangle",
    "random_rhc",
    "NodeAdd",
    "EdgeSplit",
    "HennebergStep",
    "Violation",
    "henneberg_execute",
    "classify_step_violation",
    "henneberg_to_rhc",
    "rhc_to_henneberg",
]
