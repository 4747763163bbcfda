"""Walks and sequences on derived graphs.

Randomness comes from numpy's PCG64 bit generator seeded with the 64-bit
seed directly (``Generator(PCG64(seed))``), so streams are reproducible
across runs and machines.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .derived import DerivedGraph
from .errors import TlgError

SEED_MASK = (1 << 64) - 1


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(int(seed) & SEED_MASK))


class WalkKind(str, enum.Enum):
    PERIODIC_EXHAUSTIVE = "PeriodicExhaustive"
    SIMPLE_RANDOM_WALK = "SimpleRandomWalk"
    UNIFORM_RANDOM_SEQUENCE = "UniformRandomSequence"


@dataclass(frozen=True)
class WalkSpec:
    kind: WalkKind
    start: int = 0
    length: int = 1
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", WalkKind(self.kind))
        if self.length < 1:
            raise TlgError(f"walk length must be >= 1, got {self.length}")
        if self.start < 0:
            raise TlgError(f"invalid start triangle {self.start}")

    def generate(self, d: DerivedGraph) -> np.ndarray:
        if self.start >= d.size:
            raise TlgError(f"start {self.start} out of range for {d.size} triangles")
        if self.kind is WalkKind.PERIODIC_EXHAUSTIVE:
            return periodic_exhaustive_walk(d, self.start, self.length)
        if self.kind is WalkKind.SIMPLE_RANDOM_WALK:
            return simple_random_walk(d, self.start, self.length, self.seed)
        return uniform_random_sequence(d, self.length, self.seed)

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "start": self.start, "length": self.length, "seed": self.seed}

    @classmethod
    def from_json(cls, data: dict) -> WalkSpec:
        try:
            return cls(WalkKind(data["kind"]), int(data.get("start", 0)), int(data["length"]),
                       int(data.get("seed", 0)))
        except (KeyError, ValueError, TypeError) as exc:
            raise TlgError(f"malformed walk spec: {exc}") from None


def exhaustive_pattern(d: DerivedGraph, start: int) -> list[int]:
    """Depth-first tour of a spanning tree from ``start``, minus the final return.

    The last element is a tree neighbour of ``start``, so the pattern can be
    repeated back to back.
    """
    if not (0 <= start < d.size):
        raise TlgError(f"start {start} out of range")
    tour = [start]
    seen = {start}
    stack = [(start, iter(d.neighbors[start]))]
    while stack:
        node, it = stack[-1]
        child = next((y for y in it if y not in seen), None)
        if child is None:
            stack.pop()
            if stack:
                tour.append(stack[-1][0])
            continue
        seen.add(child)
        tour.append(child)
        stack.append((child, iter(d.neighbors[child])))
    if len(seen) != d.size:
        raise TlgError("derived graph is not connected")
    return tour[:-1] if len(tour) > 1 else tour


def periodic_exhaustive_walk(d: DerivedGraph, start: int, length: int) -> np.ndarray:
    pattern = np.array(exhaustive_pattern(d, start), dtype=np.int64)
    reps = -(-length // len(pattern))
    return np.tile(pattern, reps)[:length]


def simple_random_walk(d: DerivedGraph, start: int, length: int, seed: int) -> np.ndarray:
    """Each step moves to a uniformly chosen neighbour (stays put if there is none)."""
    if not (0 <= start < d.size):
        raise TlgError(f"start {start} out of range")
    uniforms = make_rng(seed).random(length - 1)
    indptr, indices = d.csr
    return _kernels.random_walk(indptr, indices, np.int64(start), uniforms)


def uniform_random_sequence(d: DerivedGraph, length: int, seed: int) -> np.ndarray:
    """I.i.d. uniform triangle indices; generally not a walk."""
    return make_rng(seed).integers(0, d.size, size=length, dtype=np.int64)


def is_exhaustive(d: DerivedGraph, walk, mode: str = "finite", period: int | None = None) -> bool:
    """``finite``: every triangle appears. ``window``: every triangle appears in
    each consecutive block of ``period`` entries (a trailing partial block is ignored)."""
    walk = np.asarray(walk, dtype=np.int64)
    if mode == "finite":
        return len(np.unique(walk)) == d.size and walk.size > 0
    if mode == "window":
        if not period or period < 1:
            raise TlgError("window mode needs a positive period")
        full = len(walk) // period
        if full == 0:
            return False
        return all(
            len(np.unique(walk[k * period : (k + 1) * period])) == d.size for k in range(full)
        )
    raise TlgError(f"unknown mode {mode!r}")
