"""Undirected simple graphs and the structural tests used on them.

Nodes are dense integers ``0..n-1``. Graphs are immutable; every
construction step elsewhere in the package returns a new :class:`Graph`.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path
from typing import Iterable

from .errors import InvalidGraph, TlgError

Edge = tuple[int, int]
Triangle = tuple[int, int, int]


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset

    def __post_init__(self):
        if self.n < 0:
            raise InvalidGraph(f"negative node count {self.n}")
        for e in self.edges:
            u, v = e
            if not (0 <= u < v < self.n):
                raise InvalidGraph(f"edge {e} is not a canonical pair of nodes < {self.n}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Iterable[int]]) -> Graph:
        """Build a graph, rejecting self-loops and duplicate edges."""
        seen = set()
        for raw in edges:
            pair = tuple(int(x) for x in raw)
            if len(pair) != 2:
                raise InvalidGraph(f"edge {raw!r} does not have two endpoints")
            u, v = pair
            if u == v:
                raise InvalidGraph(f"self-loop at node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidGraph(f"edge {pair} references a node outside 0..{n - 1}")
            e = norm_edge(u, v)
            if e in seen:
                raise InvalidGraph(f"duplicate edge {e}")
            seen.add(e)
        return cls(n, frozenset(seen))

    @cached_property
    def adj(self) -> tuple[frozenset, ...]:
        nbrs = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return norm_edge(u, v) in self.edges

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def induced_edge_count(self, nodes: Iterable[int]) -> int:
        s = set(nodes)
        return sum(1 for u, v in self.edges if u in s and v in s)

    def with_edges(self, add=(), remove=(), n=None) -> Graph:
        edges = set(self.edges)
        edges.difference_update(norm_edge(*e) for e in remove)
        edges.update(norm_edge(*e) for e in add)
        return Graph.from_edges(self.n if n is None else n, edges)

    def relabel(self, perm) -> Graph:
        return Graph.from_edges(self.n, [(perm[u], perm[v]) for u, v in self.edges])

    # -- serialization -------------------------------------------------
    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_json(cls, data: dict) -> Graph:
        try:
            n = data["n"]
            edges = data["edges"]
        except (KeyError, TypeError) as exc:
            raise InvalidGraph(f"graph JSON needs 'n' and 'edges': {exc}") from None
        if not isinstance(n, int) or isinstance(n, bool):
            raise InvalidGraph(f"'n' must be an integer, got {n!r}")
        return cls.from_edges(n, edges)


def load_json_file(path) -> object:
    """Read JSON, turning decode errors into :class:`TlgError` with line context."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise TlgError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        line = text.splitlines()[exc.lineno - 1] if text.splitlines() else ""
        raise TlgError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}\n    {line}") from None


def load_graph(path) -> Graph:
    return Graph.from_json(load_json_file(path))


# -- triangles ---------------------------------------------------------------


def enumerate_triangles(g: Graph) -> list[Triangle]:
    """All triangles of ``g`` as sorted node triples, in lexicographic order."""
    out = []
    adj = g.adj
    for u in range(g.n):
        hi = sorted(x for x in adj[u] if x > u)
        for i, v in enumerate(hi):
            for w in hi[i + 1 :]:
                if w in adj[v]:
                    out.append((u, v, w))
    return out


def triangles_containing(g: Graph, u: int, v: int) -> list[Triangle]:
    if not g.has_edge(u, v):
        raise TlgError(f"edge ({u}, {v}) is not in the graph")
    common = g.adj[u] & g.adj[v]
    return sorted(tuple(sorted((u, v, w))) for w in common)


def is_simple_edge(g: Graph, e: Edge) -> bool:
    """True iff exactly one triangle of ``g`` contains edge ``e``."""
    return len(triangles_containing(g, *e)) == 1


def is_triangle(g: Graph, nodes) -> bool:
    a, b, c = nodes
    return len({a, b, c}) == 3 and g.has_edge(a, b) and g.has_edge(b, c) and g.has_edge(a, c)


# -- chordality --------------------------------------------------------------


def mcs_order(g: Graph) -> list[int]:
    """Maximum cardinality search; returns nodes in visit order (reverse it for a PEO)."""
    weight = [0] * g.n
    done = [False] * g.n
    order = []
    for _ in range(g.n):
        # ties broken by smallest index for determinism
        best = max((v for v in range(g.n) if not done[v]), key=lambda v: (weight[v], -v))
        done[best] = True
        order.append(best)
        for w in g.adj[best]:
            if not done[w]:
                weight[w] += 1
    return order


def is_perfect_elimination_order(g: Graph, order: list[int]) -> bool:
    pos = {v: i for i, v in enumerate(order)}
    for v in order:
        later = [w for w in g.adj[v] if pos[w] > pos[v]]
        if not later:
            continue
        parent = min(later, key=pos.__getitem__)
        for w in later:
            if w != parent and w not in g.adj[parent]:
                return False
    return True


def is_chordal(g: Graph) -> bool:
    """Every cycle of length > 3 has a chord (MCS + PEO verification)."""
    return is_perfect_elimination_order(g, mcs_order(g)[::-1])


def chordless_cycle(g: Graph) -> tuple[int, ...] | None:
    """A chordless cycle of length >= 4, or ``None`` if ``g`` is chordal.

    For each node ``v`` and each non-adjacent pair ``a, b`` of its neighbours,
    a shortest ``a``-``b`` path avoiding the rest of ``N[v]`` closes an
    induced cycle through ``v``. Every chordless cycle yields such a triple.
    """
    if is_chordal(g):
        return None
    adj = g.adj
    for v in range(g.n):
        for a, b in combinations(sorted(adj[v]), 2):
            if b in adj[a]:
                continue
            blocked = (adj[v] | {v}) - {a, b}
            path = _bfs_path(adj, a, b, blocked)
            if path is not None:
                return (v, *path)
    raise AssertionError("MCS reported a non-chordal graph but no chordless cycle was found")


def _bfs_path(adj, src, dst, blocked):
    parent = {src: None}
    queue = deque([src])
    while queue:
        x = queue.popleft()
        if x == dst:
            path = []
            while x is not None:
                path.append(x)
                x = parent[x]
            return path[::-1]
        for y in sorted(adj[x]):
            if y not in parent and y not in blocked:
                parent[y] = x
                queue.append(y)
    return None


# -- Laman counting via the (2,3)-pebble game -------------------------------


class PebbleGame:
    """(k, l) = (2, 3) pebble game for planar minimal rigidity.

    Each node starts with two pebbles. An edge is accepted when four pebbles
    can be gathered on its endpoints; accepted edges are independent in the
    generic rigidity matroid.
    """

    def __init__(self, n: int):
        self.pebbles = [2] * n
        self.out = [set() for _ in range(n)]
        self.rejected = 0

    def _gather(self, root: int, keep: int) -> bool:
        # DFS along covered-edge directions for a free pebble, then reverse the path
        parent = {root: None, keep: None}
        stack = [root]
        while stack:
            x = stack.pop()
            for y in self.out[x]:
                if y in parent:
                    continue
                parent[y] = x
                if self.pebbles[y] > 0:
                    self.pebbles[y] -= 1
                    while y != root:
                        px = parent[y]
                        self.out[px].discard(y)
                        self.out[y].add(px)
                        y = px
                    self.pebbles[root] += 1
                    return True
                stack.append(y)
        return False

    def add_edge(self, u: int, v: int) -> bool:
        while self.pebbles[u] < 2 and self._gather(u, v):
            pass
        while self.pebbles[v] < 2 and self._gather(v, u):
            pass
        if self.pebbles[u] + self.pebbles[v] < 4:
            self.rejected += 1
            return False
        self.pebbles[u] -= 1
        self.out[u].add(v)
        return True


def is_laman(g: Graph) -> bool:
    """|E| = 2n-3 and every induced subgraph on k >= 2 nodes has <= 2k-3 edges."""
    if g.n < 2 or g.m != 2 * g.n - 3:
        return False
    game = PebbleGame(g.n)
    return all(game.add_edge(u, v) for u, v in g.sorted_edges())


def is_tlg(g: Graph) -> bool:
    """Triangulated Laman graph: chordal and minimally rigid."""
    if g.n < 3:
        return False
    return is_laman(g) and is_chordal(g)
