"""Local stochastic matrices and products along walks.

Weights are exact rationals. Products come in two flavours: exact
(``numpy`` object arrays of :class:`~fractions.Fraction`) for identity checks,
and float64 through :mod:`tlg._kernels` for long walks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

import numpy as np

from . import _kernels
from .derived import DerivedGraph
from .errors import MonotonicityViolation, NonAdjacentStep, TlgError
from .graph import Graph, is_simple_edge

LocalWeights = tuple[Fraction, Fraction, Fraction]

MONOTONE_SLACK = 1e-14
DEFAULT_TOL = 1e-12


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return Fraction(int(x[0]), int(x[1]))
    if isinstance(x, float):
        raise TlgError(f"weights must be exact; got float {x!r}")
    return Fraction(x)


def fraction_to_json(x: Fraction) -> list[str]:
    return [str(x.numerator), str(x.denominator)]


def fraction_from_json(pair) -> Fraction:
    try:
        p, q = pair
        return Fraction(int(p), int(q))
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise TlgError(f"bad rational {pair!r}: {exc}") from None


@dataclass(frozen=True)
class WeightAssignment:
    """One probability 3-vector per triangle, ordered like the triangle's nodes."""

    weights: tuple[LocalWeights, ...]

    def __post_init__(self):
        for t, a in enumerate(self.weights):
            if len(a) != 3:
                raise TlgError(f"triangle {t}: expected 3 weights, got {len(a)}")
            if any(x < 0 for x in a):
                raise TlgError(f"triangle {t}: negative weight in {a}")
            if sum(a) != 1:
                raise TlgError(f"triangle {t}: weights sum to {sum(a)}, not 1")

    @classmethod
    def from_values(cls, rows: Iterable[Iterable]) -> WeightAssignment:
        return cls(tuple(tuple(_frac(x) for x in row) for row in rows))

    def __len__(self):
        return len(self.weights)

    @property
    def a_min(self) -> Fraction:
        """Smallest non-zero local weight over all triangles."""
        return min(x for a in self.weights for x in a if x != 0)

    def as_array(self) -> np.ndarray:
        return np.array([[float(x) for x in a] for a in self.weights], dtype=np.float64).reshape(
            -1, 3
        )

    def to_json(self) -> dict:
        return {
            "weights": {
                str(t): [fraction_to_json(x) for x in a] for t, a in enumerate(self.weights)
            }
        }

    @classmethod
    def from_json(cls, data: dict, size: int | None = None) -> WeightAssignment:
        try:
            table = data["weights"]
            keyed = {int(k): v for k, v in table.items()}
        except (KeyError, TypeError, AttributeError, ValueError) as exc:
            raise TlgError(f"weights JSON needs a 'weights' object keyed by index: {exc}") from None
        count = len(keyed) if size is None else size
        if sorted(keyed) != list(range(count)):
            raise TlgError(f"weights given for triangles {sorted(keyed)}, expected 0..{count - 1}")
        return cls(tuple(tuple(fraction_from_json(x) for x in keyed[t]) for t in range(count)))


def weight_of(d: DerivedGraph, assign: WeightAssignment, t: int, v: int) -> Fraction:
    return assign.weights[t][d.triangles[t].index(v)]


def check_size(d: DerivedGraph, assign: WeightAssignment) -> None:
    if len(assign) != d.size:
        raise TlgError(f"{len(assign)} weight vectors for {d.size} triangles")


class AssumptionReport(NamedTuple):
    ok: bool
    violations: list


def check_assumption(d: DerivedGraph, assign: WeightAssignment) -> AssumptionReport:
    """Weights on both ends of every non-simple triangle edge must not both vanish."""
    check_size(d, assign)
    bad = []
    g = d.base
    for t, (a, b, c) in enumerate(d.triangles):
        w = dict(zip((a, b, c), assign.weights[t]))
        for e in ((a, b), (a, c), (b, c)):
            if w[e[0]] + w[e[1]] == 0 and not is_simple_edge(g, e):
                bad.append((t, e))
    return AssumptionReport(not bad, bad)


def local_matrix(triangle, a, n: int, exact: bool = False) -> np.ndarray:
    """Identity except for the rank-one block ``1 a^T`` on ``triangle``'s rows/columns."""
    if len(triangle) != 3 or len(a) != 3:
        raise TlgError("a local matrix needs a triangle and a 3-vector")
    if max(triangle) >= n:
        raise TlgError(f"triangle {triangle} does not fit in dimension {n}")
    if exact:
        M = np.empty((n, n), dtype=object)
        M[:] = Fraction(0)
        for v in range(n):
            M[v, v] = Fraction(1)
        a = [_frac(x) for x in a]
    else:
        M = np.eye(n)
        a = [float(x) for x in a]
    for r in triangle:
        for col, x in zip(triangle, a):
            M[r, col] = x
    return M


def seminorm(m) -> float:
    """Largest spread (max - min) of any column."""
    m = np.asarray(m)
    if m.dtype == object:
        return max((max(col) - min(col) for col in m.T), default=0)
    return float(_kernels.seminorm(np.ascontiguousarray(m, dtype=np.float64)))


def _check_strict(d: DerivedGraph, walk) -> None:
    for k in range(len(walk) - 1):
        a, b = int(walk[k]), int(walk[k + 1])
        # a repeated factor is harmless: A_i is idempotent
        if a != b and not d.are_adjacent(a, b):
            raise NonAdjacentStep(k + 1, (a, b))


def product_along_walk(
    d: DerivedGraph,
    assign: WeightAssignment,
    walk,
    strict: bool = True,
    initial: np.ndarray | None = None,
    exact: bool = False,
) -> np.ndarray:
    """Left product ``A_{walk[-1]} ... A_{walk[0]}`` (times ``initial`` if given).

    Passing the result back as ``initial`` continues the accumulation, so
    ``P(t:s)`` can be built incrementally.
    """
    walk = np.asarray(walk, dtype=np.int64)
    if walk.ndim != 1 or (walk.size and (walk.min() < 0 or walk.max() >= d.size)):
        raise TlgError("walk must be a flat sequence of triangle indices")
    check_size(d, assign)
    if strict:
        _check_strict(d, walk)
    n = d.base.n
    if exact:
        P = _exact_identity(n) if initial is None else np.array(initial, dtype=object)
        for t in walk:
            rows = list(d.triangles[t])
            a = assign.weights[t]
            combined = a[0] * P[rows[0]] + a[1] * P[rows[1]] + a[2] * P[rows[2]]
            for r in rows:
                P[r] = combined
        return P
    P = np.eye(n) if initial is None else np.array(initial, dtype=np.float64)
    return _kernels.rank_one_walk(P, d.tri_array, assign.as_array(), walk)


def _exact_identity(n: int) -> np.ndarray:
    P = np.empty((n, n), dtype=object)
    P[:] = Fraction(0)
    for v in range(n):
        P[v, v] = Fraction(1)
    return P


def seminorm_trace(d: DerivedGraph, assign: WeightAssignment, walk, strict: bool = True):
    """Final product and the seminorm after each factor."""
    walk = np.asarray(walk, dtype=np.int64)
    if strict:
        _check_strict(d, walk)
    P = np.eye(d.base.n)
    trace = _kernels.rank_one_trace(P, d.tri_array, assign.as_array(), walk)
    return P, trace


def partial_products(d: DerivedGraph, assign: WeightAssignment, walk, strict: bool = True):
    """Yield ``P(s:0)`` for s = 1, 2, ... (each a fresh copy)."""
    walk = np.asarray(walk, dtype=np.int64)
    if strict:
        _check_strict(d, walk)
    P = np.eye(d.base.n)
    tri, w = d.tri_array, assign.as_array()
    for s in range(len(walk)):
        _kernels.rank_one_walk(P, tri, w, walk[s : s + 1])
        yield P.copy()


def rank_one_limit(P: np.ndarray) -> np.ndarray:
    """Row average; rows agree to within the seminorm."""
    return np.asarray(P, dtype=np.float64).mean(axis=0)


def min_positive_column(m) -> tuple[int, float] | None:
    """Column whose entries are all positive, with its minimum (best such column)."""
    m = np.asarray(m, dtype=np.float64)
    mins = m.min(axis=0)
    if mins.size == 0 or mins.max() <= 0:
        return None
    j = int(np.argmax(mins))
    return j, float(mins[j])


class Convergence(NamedTuple):
    converged: bool
    steps: int
    seminorm: float


def convergence_monitor(products: Iterable, tol: float = DEFAULT_TOL) -> Convergence:
    """Consume partial products until the seminorm drops below ``tol``.

    Raises :class:`MonotonicityViolation` if the seminorm ever grows by more
    than float slack; for products of stochastic matrices it cannot.
    """
    if not tol > 0:
        raise TlgError("tolerance must be positive")
    prev = None
    s = 0
    value = float("nan")
    for s, P in enumerate(products, start=1):
        value = seminorm(P)
        if prev is not None and value > prev + MONOTONE_SLACK:
            raise MonotonicityViolation(s, prev, value)
        if value < tol:
            return Convergence(True, s, value)
        prev = value
    return Convergence(False, s, value)


# -- random weight generation --------------------------------------------------


def random_weights(size: int, rng: np.random.Generator, kind: str = "integer", scale: int = 20):
    """Random strictly positive rational weight vectors.

    ``kind="integer"``: ``(k1, k2, k3) / (k1 + k2 + k3)`` with ``k`` uniform
    in ``1..scale``. ``kind="simplex"``: uniform on the simplex, rounded to
    denominator ``scale`` (use a large scale, e.g. 10**6).
    """
    rows = []
    for _ in range(size):
        if kind == "integer":
            k = rng.integers(1, scale + 1, size=3)
            tot = int(k.sum())
            rows.append(tuple(Fraction(int(x), tot) for x in k))
        elif kind == "simplex":
            while True:
                x = rng.dirichlet(np.ones(3))
                p = Fraction(round(x[0] * scale), scale)
                q = Fraction(round(x[1] * scale), scale)
                r = 1 - p - q
                if p > 0 and q > 0 and r > 0:
                    break
            rows.append((p, q, r))
        else:
            raise TlgError(f"unknown weight distribution {kind!r}")
    return WeightAssignment(tuple(rows))


def random_blocks(size: int, rng: np.random.Generator) -> np.ndarray:
    """Full 3x3 stochastic blocks, rows i.i.d. uniform on the simplex."""
    return rng.dirichlet(np.ones(3), size=(size, 3))
