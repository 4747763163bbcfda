"""Derived graph of a TLG: triangles as nodes, adjacency by a shared edge."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

from .errors import InvariantViolation, NoCommonEdge, NotAWalk, NotTlg, TlgError
from .graph import Edge, Graph, Triangle, enumerate_triangles, is_tlg, norm_edge


@dataclass(frozen=True)
class DerivedGraph:
    base: Graph
    triangles: tuple[Triangle, ...]
    neighbors: tuple[tuple[int, ...], ...]
    shared_edge: dict  # (i, j) with i < j -> edge of the base graph

    @property
    def size(self) -> int:
        return len(self.triangles)

    @cached_property
    def index(self) -> dict:
        return {t: i for i, t in enumerate(self.triangles)}

    @cached_property
    def adjacency(self) -> frozenset:
        return frozenset(self.shared_edge)

    @cached_property
    def node_triangles(self) -> tuple[tuple[int, ...], ...]:
        out = [[] for _ in range(self.base.n)]
        for i, t in enumerate(self.triangles):
            for v in t:
                out[v].append(i)
        return tuple(tuple(x) for x in out)

    @cached_property
    def tri_array(self) -> np.ndarray:
        return np.array(self.triangles, dtype=np.int64).reshape(-1, 3)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        indptr = np.zeros(self.size + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(nb) for nb in self.neighbors])
        indices = np.array([j for nb in self.neighbors for j in nb], dtype=np.int64)
        return indptr, indices

    def are_adjacent(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.shared_edge

    def edge_between(self, i: int, j: int) -> Edge:
        try:
            return self.shared_edge[(min(i, j), max(i, j))]
        except KeyError:
            raise TlgError(f"triangles {i} and {j} are not adjacent") from None

    def check_walk(self, walk) -> None:
        """Consecutive entries must be adjacent or equal (staying put is allowed)."""
        for k in range(len(walk) - 1):
            a, b = int(walk[k]), int(walk[k + 1])
            if not (0 <= a < self.size):
                raise NotAWalk(f"triangle index {a} out of range")
            if a != b and not self.are_adjacent(a, b):
                raise NotAWalk(f"steps {k}->{k + 1} ({a}, {b}) are not adjacent")
        if len(walk) and not (0 <= int(walk[-1]) < self.size):
            raise NotAWalk(f"triangle index {walk[-1]} out of range")

    def shortest_path(self, src: int, dst: int, exclude=frozenset()) -> list[int] | None:
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
            for y in self.neighbors[x]:
                if y not in parent and y not in exclude:
                    parent[y] = x
                    queue.append(y)
        return None

    def to_json(self) -> dict:
        return {
            "triangles": [list(t) for t in self.triangles],
            "adjacency": [list(nb) for nb in self.neighbors],
            "shared_edges": [
                {"pair": [i, j], "edge": list(e)} for (i, j), e in sorted(self.shared_edge.items())
            ],
        }


def derived_structure(g: Graph, triangles=None) -> DerivedGraph:
    """Shared-edge adjacency of the triangles of any graph (no TLG check)."""
    tris = tuple(enumerate_triangles(g) if triangles is None else triangles)
    by_edge = {}
    for i, (a, b, c) in enumerate(tris):
        for e in ((a, b), (a, c), (b, c)):
            by_edge.setdefault(e, []).append(i)
    shared = {}
    for e, owners in by_edge.items():
        for i, j in combinations(owners, 2):
            shared[(min(i, j), max(i, j))] = e
    nbrs = [[] for _ in tris]
    for i, j in shared:
        nbrs[i].append(j)
        nbrs[j].append(i)
    return DerivedGraph(g, tris, tuple(tuple(sorted(x)) for x in nbrs), shared)


def build_derived(g: Graph) -> DerivedGraph:
    """Derived graph of a TLG, triangles in canonical (lexicographic) order."""
    if not is_tlg(g):
        raise NotTlg("derived graphs are built for TLGs only")
    return derived_structure(g)


def subgraph_for_node(d: DerivedGraph, v: int) -> frozenset:
    """Indices of the triangles containing node ``v``."""
    if not (0 <= v < d.base.n):
        raise TlgError(f"node {v} is not in the graph")
    return frozenset(d.node_triangles[v])


def _reaches(d: DerivedGraph, sources, target, removed) -> bool:
    seen = set(sources) - {removed}
    queue = deque(seen)
    while queue:
        x = queue.popleft()
        if x == target:
            return True
        for y in d.neighbors[x]:
            if y != removed and y not in seen:
                seen.add(y)
                queue.append(y)
    return False


def bottleneck(d: DerivedGraph, v: int, target: int) -> int:
    """The triangle of D_G(v) that every walk from D_G(v) to ``target`` visits.

    Each candidate ``b`` is deleted in turn; ``b`` is the bottleneck when no
    other triangle containing ``v`` can still reach ``target``.
    """
    s = subgraph_for_node(d, v)
    if target in s:
        return target
    found = [b for b in sorted(s) if not _reaches(d, s - {b}, target, b)]
    if len(found) != 1:
        raise InvariantViolation(f"node {v}, target {target}: bottleneck candidates {found}")
    return found[0]


def verify_cycle_common_edge(d: DerivedGraph, cycle) -> Edge:
    """The base-graph edge shared by every triangle of a derived-graph cycle."""
    nodes = [int(x) for x in cycle]
    if len(nodes) > 1 and nodes[0] == nodes[-1]:
        nodes = nodes[:-1]
    if len(nodes) < 3 or len(set(nodes)) != len(nodes):
        raise TlgError(f"{cycle} is not a cycle of length >= 3")
    for a, b in zip(nodes, nodes[1:] + nodes[:1]):
        if not d.are_adjacent(a, b):
            raise TlgError(f"{cycle} is not a cycle: {a} and {b} are not adjacent")
    common = None
    for i in nodes:
        a, b, c = d.triangles[i]
        es = {(a, b), (a, c), (b, c)}
        common = es if common is None else common & es
    if not common or len(common) != 1:
        raise NoCommonEdge(f"triangles {nodes} share edges {sorted(common or [])}")
    for a, b in combinations(nodes, 2):
        if not d.are_adjacent(a, b):
            raise NoCommonEdge(f"induced subgraph on {nodes} misses edge ({a}, {b})")
    return next(iter(common))


def is_connected(d: DerivedGraph, nodes=None) -> bool:
    nodes = set(range(d.size)) if nodes is None else set(nodes)
    if not nodes:
        return True
    start = next(iter(nodes))
    seen = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in d.neighbors[x]:
            if y in nodes and y not in seen:
                seen.add(y)
                queue.append(y)
    return seen == nodes


def as_graph(d: DerivedGraph) -> Graph:
    """The derived graph itself as a :class:`Graph` on triangle indices."""
    return Graph(d.size, frozenset(norm_edge(i, j) for i, j in d.shared_edge))
