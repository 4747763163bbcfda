"""Closed-form limit vectors of exhaustive walk products.

For triangle ``i`` the unnormalized vector ``w_i`` has, for every node ``v``,
entry ``a_{b, v} * R(b -> i)`` where ``b`` is the bottleneck of the triangles
containing ``v`` with respect to ``i`` and ``R`` multiplies the shared-edge
weight ratios along any walk from ``b`` to ``i``. Everything here is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .derived import DerivedGraph, bottleneck
from .errors import (
    AssumptionViolated,
    IdentityViolation,
    InvalidTarget,
    NotAdjacent,
    NotAWalk,
    TlgError,
)
from .henneberg import rhc_from_triangle
from .stoch import (
    WeightAssignment,
    check_assumption,
    fraction_to_json,
    local_matrix,
    weight_of,
)


def ratio(d: DerivedGraph, assign: WeightAssignment, i: int, j: int) -> Fraction:
    """Shared-edge weight sum of ``j`` over that of ``i``."""
    if not d.are_adjacent(i, j):
        raise NotAdjacent(f"triangles {i} and {j} are not adjacent")
    p, q = d.edge_between(i, j)
    num = weight_of(d, assign, j, p) + weight_of(d, assign, j, q)
    den = weight_of(d, assign, i, p) + weight_of(d, assign, i, q)
    if den == 0:
        raise AssumptionViolated([(i, (p, q))])
    return num / den


def path_ratio(d: DerivedGraph, assign: WeightAssignment, walk: Sequence[int]) -> Fraction:
    """Product of ratios along consecutive pairs; 1 for a single triangle.

    Staying on the same triangle contributes a factor of 1."""
    if len(walk) == 0:
        raise NotAWalk("empty walk")
    d.check_walk(walk)
    out = Fraction(1)
    for a, b in zip(walk, walk[1:]):
        if a != b:
            out *= ratio(d, assign, int(a), int(b))
    return out


@dataclass(frozen=True)
class ApvVector:
    tri: int
    w: tuple[Fraction, ...]

    @property
    def total(self) -> Fraction:
        return sum(self.w, Fraction(0))

    @property
    def w_bar(self) -> tuple[Fraction, ...]:
        s = self.total
        return tuple(x / s for x in self.w)

    def to_json(self) -> dict:
        wb = self.w_bar
        return {
            "triangle": self.tri,
            "w": [fraction_to_json(x) for x in self.w],
            "w_bar": [fraction_to_json(x) for x in wb],
            "w_bar_float": [float(x) for x in wb],
        }


def _require_assumption(d, assign):
    report = check_assumption(d, assign)
    if not report.ok:
        raise AssumptionViolated(report.violations)


def unnormalized_apv(d: DerivedGraph, assign: WeightAssignment, i: int) -> ApvVector:
    _require_assumption(d, assign)
    if not (0 <= i < d.size):
        raise TlgError(f"triangle index {i} out of range")
    # ratio to triangle i from every triangle along BFS paths; any walk gives the same value
    to_i = {i: Fraction(1)}
    frontier = [i]
    while frontier:
        nxt = []
        for x in frontier:
            for y in d.neighbors[x]:
                if y not in to_i:
                    to_i[y] = ratio(d, assign, y, x) * to_i[x]
                    nxt.append(y)
        frontier = nxt
    w = []
    for v in range(d.base.n):
        b = bottleneck(d, v, i)
        w.append(weight_of(d, assign, b, v) * to_i[b])
    return ApvVector(i, tuple(w))


def normalized_apv(d: DerivedGraph, assign: WeightAssignment, i: int) -> tuple[Fraction, ...]:
    return unnormalized_apv(d, assign, i).w_bar


def all_apvs(d: DerivedGraph, assign: WeightAssignment) -> list[ApvVector]:
    return [unnormalized_apv(d, assign, i) for i in range(d.size)]


# -- identity checks -----------------------------------------------------------


@dataclass
class IdentityReport:
    fixed_point_checks: int = 0
    neighbour_checks: int = 0
    closed_walk_checks: int = 0


def _local(d, assign, t):
    return local_matrix(d.triangles[t], assign.weights[t], d.base.n, exact=True)


def _closed_walk(d: DerivedGraph, i: int, rng: np.random.Generator, max_len: int) -> list[int]:
    walk = [i]
    for _ in range(int(rng.integers(0, max_len))):
        nb = d.neighbors[walk[-1]]
        if not nb:
            break
        walk.append(int(nb[rng.integers(len(nb))]))
    back = d.shortest_path(walk[-1], i)
    walk += back[1:]
    if rng.random() < 0.5 and len(walk) > 1:
        walk.pop()  # end on a neighbour of i instead of i itself
    return walk


def verify_eigen_identities(
    d: DerivedGraph,
    assign: WeightAssignment,
    closed_walks: int = 10,
    seed: int = 0,
    max_len: int = 12,
) -> IdentityReport:
    """Check ``w_i A_i = w_i``, ``w_j A_i = r_ij w_i`` and ``w_i P = w_i`` exactly.

    The last identity is tested on ``closed_walks`` random walks per triangle
    that start at ``i`` and end at ``i`` or one of its neighbours.
    """
    ws = [np.array(v.w, dtype=object) for v in all_apvs(d, assign)]
    mats = [_local(d, assign, t) for t in range(d.size)]
    report = IdentityReport()
    for i in range(d.size):
        if list(ws[i] @ mats[i]) != list(ws[i]):
            raise IdentityViolation(i, detail="w_i A_i != w_i")
        report.fixed_point_checks += 1
        for j in d.neighbors[i]:
            r = ratio(d, assign, i, j)
            if list(ws[j] @ mats[i]) != list(r * ws[i]):
                raise IdentityViolation(i, j, "w_j A_i != r_ij w_i")
            report.neighbour_checks += 1
    rng = np.random.default_rng(seed)
    for i in range(d.size):
        for _ in range(closed_walks):
            walk = _closed_walk(d, i, rng, max_len)
            v = ws[i]
            # row vector times A_{walk[-1]} ... A_{walk[0]}
            for t in reversed(walk):
                v = v @ mats[t]
            if list(v) != list(ws[i]):
                raise IdentityViolation(i, detail=f"w_i P != w_i on walk {walk}")
            report.closed_walk_checks += 1
    return report


def apv_sequence(d: DerivedGraph, assign: WeightAssignment, walk) -> list[tuple[Fraction, ...]]:
    """``x_s = w_bar[walk[s]]``: the absolute probability vectors of the walk product."""
    walk = [int(x) for x in walk]
    d.check_walk(walk)
    bars = {}
    out = []
    for t in walk:
        if t not in bars:
            bars[t] = normalized_apv(d, assign, t)
        out.append(bars[t])
    return out


def check_apv_relation(
    d: DerivedGraph, assign: WeightAssignment, walk, xs, s: int, t: int
) -> bool:
    """Exact test of ``x_t P(t:s) = x_s`` where ``P(t:s) = A_{walk[t-1]} ... A_{walk[s]}``."""
    if not 0 <= s < t < len(xs):
        raise TlgError(f"need 0 <= s < t < {len(xs)}, got s={s}, t={t}")
    v = np.array(xs[t], dtype=object)
    for k in range(t - 1, s - 1, -1):
        v = v @ _local(d, assign, int(walk[k]))
    return list(v) == list(xs[s])


# -- inverse design ------------------------------------------------------------


def _validate_target(target, n) -> tuple[Fraction, ...]:
    target = list(target)
    if any(isinstance(x, float) for x in target):
        raise InvalidTarget("target entries must be exact rationals, not floats")
    try:
        tgt = tuple(Fraction(x) for x in target)
    except (TypeError, ValueError) as exc:
        raise InvalidTarget(f"target entries must be rationals: {exc}") from None
    if len(tgt) != n:
        raise InvalidTarget(f"target has length {len(tgt)}, graph has {n} nodes")
    if any(x <= 0 for x in tgt):
        raise InvalidTarget("target entries must be strictly positive")
    if sum(tgt) != 1:
        raise InvalidTarget(f"target sums to {sum(tgt)}, not 1")
    return tgt


def design_weights(d: DerivedGraph, target, i: int) -> WeightAssignment:
    """Local weights whose limit vector for triangle ``i`` is exactly ``target``.

    Re-roots an RHC at triangle ``i`` and walks its steps. Each new node ``q``
    attached to base edge ``(p1, p2)`` of an earlier triangle ``m`` gets
    ``w_{i,q} = a_q / (1 - a_q) * C`` with ``C = (a_m[p1] + a_m[p2]) R(m -> i)``
    fixed by earlier choices, so ``a_q`` is solved for directly; the remaining
    mass is split equally between ``p1`` and ``p2``.
    """
    n = d.base.n
    tgt = _validate_target(target, n)
    if not (0 <= i < d.size):
        raise InvalidTarget(f"triangle index {i} out of range")
    prog = rhc_from_triangle(d.base, d.triangles[i])
    root = d.triangles[i]
    weights: dict[int, tuple[Fraction, ...]] = {}
    base_mass = sum(tgt[v] for v in root)
    weights[i] = tuple(tgt[v] / base_mass for v in root)
    scale = 1 / base_mass  # w_i = scale * target on every node placed so far
    to_i = {i: Fraction(1)}
    for step in prog.steps:
        p1, p2 = step.edge
        q = step.node
        new = d.index[tuple(sorted((p1, p2, q)))]
        m = next(
            t for t in d.node_triangles[p1]
            if t in weights and p2 in d.triangles[t]
        )
        a_m = dict(zip(d.triangles[m], weights[m]))
        shared = a_m[p1] + a_m[p2]
        c = shared * to_i[m]
        wanted = scale * tgt[q]
        a_q = wanted / (c + wanted)
        rest = (1 - a_q) / 2
        local = {p1: rest, p2: rest, q: a_q}
        weights[new] = tuple(local[v] for v in d.triangles[new])
        to_i[new] = shared / (1 - a_q) * to_i[m]
    if len(weights) != d.size:
        raise TlgError("RHC did not cover every triangle")
    return WeightAssignment(tuple(weights[t] for t in range(d.size)))
