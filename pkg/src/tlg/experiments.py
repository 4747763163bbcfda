"""Monte Carlo batches of walk products and their limit statistics.

Three builtin scenarios contrast the single limit of adjacency-respecting
walks on a TLG with the spread of limits obtained when one ingredient is
broken:

``exp1``
    5-wheel (hub plus 5-cycle; 6 nodes, 10 edges, derived graph a 5-cycle).
    Rigid but not minimally rigid. Reconstructed topology.
``exp2``
    Strip of 4 triangles (derived graph a path) with full random 3x3
    stochastic blocks instead of rank-one blocks.
``exp3``
    Seeded random 18-node TLG; random walks from triangle (0, 1, 2) versus
    i.i.d. uniform triangle sequences. Stand-in for an unspecified 18-node graph.
"""

from __future__ import annotations

import copy
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.cluster.hierarchy import DisjointSet
from scipy.spatial.distance import pdist

from . import _kernels
from .derived import DerivedGraph, build_derived, derived_structure
from .errors import TlgError
from .graph import Graph, is_tlg, load_json_file
from .henneberg import random_rhc, rhc_execute
from .stoch import WeightAssignment, random_blocks, random_weights
from .walks import WalkKind, WalkSpec, make_rng

DEFAULT_COUNT = 200
DEFAULT_LENGTH = 5000


def example5() -> Graph:
    """Three triangles {0,1,2}, {0,1,3}, {1,2,4}."""
    return Graph.from_edges(5, [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (1, 4), (2, 4)])


def wheel5() -> Graph:
    rim = [(k, k % 5 + 1) for k in range(1, 6)]
    return Graph.from_edges(6, [(0, k) for k in range(1, 6)] + rim)


def strip4() -> Graph:
    return Graph.from_edges(6, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4), (3, 5), (4, 5)])


BUILTIN_GRAPHS = {
    "triangle": lambda: Graph.from_edges(3, [(0, 1), (0, 2), (1, 2)]),
    "example5": example5,
    "wheel5": wheel5,
    "strip4": strip4,
}

SCENARIOS = {
    "exp1": {
        "label": "5-wheel: triangulated and rigid but not Laman (reconstructed topology)",
        "graph": {"builtin": "wheel5"},
        "local": "rank_one",
        "weights": {"random": {"kind": "simplex", "scale": 10**6}},
        "batches": [{"name": "walks", "kind": "SimpleRandomWalk", "start": 0}],
    },
    "exp2": {
        "label": "4-triangle strip TLG with full-rank local blocks",
        "graph": {"builtin": "strip4"},
        "local": "full",
        "weights": {"random": {}},
        "batches": [{"name": "walks", "kind": "SimpleRandomWalk", "start": 0}],
    },
    "exp3": {
        "label": "18-node TLG from a seeded random RHC (substitute topology)",
        "graph": {"random_rhc": {"n": 18}},
        "local": "rank_one",
        "weights": {"random": {"kind": "simplex", "scale": 10**6}},
        "batches": [
            {"name": "walks", "kind": "SimpleRandomWalk", "start": 0},
            {"name": "sequences", "kind": "UniformRandomSequence", "start": 0},
        ],
    },
}


@dataclass
class BatchSpec:
    name: str
    kind: WalkKind
    count: int = DEFAULT_COUNT
    length: int = DEFAULT_LENGTH
    start: int = 0

    def __post_init__(self):
        self.kind = WalkKind(self.kind)
        if self.count < 1 or self.length < 1:
            raise TlgError(f"batch {self.name!r}: count and length must be >= 1")


@dataclass
class ExperimentConfig:
    graph: dict
    weights: dict
    batches: list[BatchSpec]
    local: str = "rank_one"
    seed: int = 0
    # rows of P lie within the seminorm of the limit, so 1e-9 keeps estimates well
    # inside the 1e-6 clustering scale while letting 5000-step walks qualify
    tolerance: float = 1e-9
    cluster_tol: float = 1e-6
    bins: int = 50
    workers: int = 1
    label: str = ""
    base_dir: Path = field(default_factory=Path)

    def __post_init__(self):
        if not self.tolerance > 0 or not self.cluster_tol > 0:
            raise TlgError("tolerances must be positive")
        if self.local not in ("rank_one", "full"):
            raise TlgError(f"unknown local block type {self.local!r}")
        if not self.batches:
            raise TlgError("at least one batch is required")

    @classmethod
    def from_dict(cls, raw: dict, base_dir=".") -> ExperimentConfig:
        data = {}
        if "scenario" in raw:
            try:
                data = copy.deepcopy(SCENARIOS[raw["scenario"]])
            except KeyError:
                raise TlgError(f"unknown scenario {raw['scenario']!r}") from None
        data.update({k: v for k, v in raw.items() if k != "scenario"})
        count = data.pop("count", None)
        length = data.pop("length", None)
        batches = []
        try:
            for b in data.pop("batches"):
                b = dict(b)
                if count is not None:
                    b["count"] = count
                if length is not None:
                    b["length"] = length
                batches.append(BatchSpec(**b))
            return cls(batches=batches, base_dir=Path(base_dir), **data)
        except (KeyError, TypeError, ValueError) as exc:
            raise TlgError(f"invalid experiment config: {exc}") from None


# -- setup --------------------------------------------------------------------


def resolve_graph(spec: dict, seed: int, base_dir=Path(".")) -> Graph:
    if "builtin" in spec:
        try:
            return BUILTIN_GRAPHS[spec["builtin"]]()
        except KeyError:
            raise TlgError(f"unknown builtin graph {spec['builtin']!r}") from None
    if "file" in spec:
        return Graph.from_json(load_json_file(Path(base_dir) / spec["file"]))
    if "random_rhc" in spec:
        opts = spec["random_rhc"]
        rng = make_rng(opts.get("seed", seed))
        return rhc_execute(random_rhc(int(opts["n"]), rng))
    raise TlgError(f"graph source must be builtin, file or random_rhc: {spec!r}")


def resolve_weights(spec: dict, d: DerivedGraph, local: str, seed: int, base_dir=Path(".")):
    if "file" in spec:
        if local != "rank_one":
            raise TlgError("weight files describe rank-one blocks only")
        return WeightAssignment.from_json(load_json_file(Path(base_dir) / spec["file"]), d.size)
    if "random" in spec:
        opts = dict(spec["random"])
        rng = make_rng(opts.pop("seed", seed + 1))
        if local == "full":
            return random_blocks(d.size, rng)
        return random_weights(d.size, rng, **opts)
    raise TlgError(f"weight source must be file or random: {spec!r}")


# -- running ------------------------------------------------------------------


@dataclass
class BatchResult:
    name: str
    kind: str
    limits: np.ndarray  # (converged, n)
    seminorms: np.ndarray  # (count,)
    converged: np.ndarray  # (count,) bool
    clusters: list  # representatives, one per cluster
    cluster_sizes: list

    @property
    def distinct_limit_count(self) -> int:
        return len(self.clusters)

    @property
    def spread(self) -> float:
        if len(self.limits) == 0:
            return 0.0
        return float(np.max(self.limits.max(axis=0) - self.limits.min(axis=0)))

    @property
    def convergence_rate(self) -> float:
        return float(self.converged.mean())

    def summary(self) -> dict:
        return {
            "kind": self.kind,
            "runs": int(len(self.converged)),
            "converged": int(self.converged.sum()),
            "convergence_rate": self.convergence_rate,
            "distinct_limit_count": self.distinct_limit_count,
            "spread": self.spread,
            "max_final_seminorm": float(self.seminorms.max()),
            "cluster_sizes": self.cluster_sizes,
            "limits": [[float(x) for x in c] for c in self.clusters[:50]],
        }


def cluster_limits(limits: np.ndarray, tol: float):
    """Union-find over limit vectors joined when their infinity-norm distance <= tol."""
    k = len(limits)
    if k == 0:
        return [], []
    ds = DisjointSet(range(k))
    if k > 1:
        dist = pdist(limits, metric="chebyshev")
        ii, jj = np.triu_indices(k, 1)
        for a, b in zip(ii[dist <= tol], jj[dist <= tol]):
            ds.merge(int(a), int(b))
    reps, sizes = [], []
    for subset in sorted(ds.subsets(), key=min):
        reps.append(limits[min(subset)])
        sizes.append(len(subset))
    return reps, sizes


def _walk(d: DerivedGraph, batch: BatchSpec, seed: int) -> np.ndarray:
    return WalkSpec(batch.kind, batch.start, batch.length, seed).generate(d)


def _run_one(d, local, weights_arr, batch, seed):
    walk = _walk(d, batch, seed)
    P = np.eye(d.base.n)
    if local == "full":
        _kernels.block_walk(P, d.tri_array, weights_arr, walk)
    else:
        _kernels.rank_one_walk(P, d.tri_array, weights_arr, walk)
    return float(_kernels.seminorm(P)), P.mean(axis=0)


def run_batch(d: DerivedGraph, local: str, weights, batch: BatchSpec, seed: int,
              tol: float, cluster_tol: float, workers: int = 1) -> BatchResult:
    weights_arr = weights if local == "full" else weights.as_array()
    seeds = [seed + k for k in range(batch.count)]
    job = lambda s: _run_one(d, local, weights_arr, batch, s)  # noqa: E731
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            results = list(ex.map(job, seeds))
    else:
        results = [job(s) for s in seeds]
    seminorms = np.array([r[0] for r in results])
    converged = seminorms < tol
    limits = np.array([r[1] for r, ok in zip(results, converged) if ok]).reshape(-1, d.base.n)
    reps, sizes = cluster_limits(limits, cluster_tol)
    return BatchResult(batch.name, batch.kind.value, limits, seminorms, converged, reps, sizes)


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    graph: Graph
    derived: DerivedGraph
    weights: object
    batches: list[BatchResult]

    def summary(self) -> dict:
        return {
            "label": self.config.label,
            "backend": _kernels.BACKEND,
            "seed": self.config.seed,
            "graph": {"n": self.graph.n, "edges": self.graph.m, "is_tlg": is_tlg(self.graph),
                      "triangles": self.derived.size},
            "local": self.config.local,
            "tolerance": self.config.tolerance,
            "cluster_tol": self.config.cluster_tol,
            "batches": {b.name: b.summary() for b in self.batches},
        }


def run_experiment(config: ExperimentConfig) -> ExperimentResult:
    g = resolve_graph(config.graph, config.seed, config.base_dir)
    d = build_derived(g) if is_tlg(g) else derived_structure(g)
    if d.size == 0:
        raise TlgError("graph has no triangles")
    weights = resolve_weights(config.weights, d, config.local, config.seed, config.base_dir)
    results = []
    for b in config.batches:
        if not (0 <= b.start < d.size):
            raise TlgError(f"batch {b.name!r}: start {b.start} out of range")
        results.append(run_batch(d, config.local, weights, b, config.seed, config.tolerance,
                                 config.cluster_tol, config.workers))
    return ExperimentResult(config, g, d, weights, results)


def histogram(values: np.ndarray, bins: int) -> tuple[np.ndarray, np.ndarray]:
    counts, edges = np.histogram(np.clip(values, 0.0, 1.0), bins=bins, range=(0.0, 1.0))
    return counts, edges


def write_outputs(result: ExperimentResult, out_dir) -> Path:
    """One CSV per batch and coordinate (``bin_lo,bin_hi,count``) plus ``summary.json``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    n = result.graph.n
    for b in result.batches:
        bdir = out / b.name
        bdir.mkdir(exist_ok=True)
        for j in range(n):
            counts, edges = histogram(b.limits[:, j], result.config.bins)
            lines = ["bin_lo,bin_hi,count"]
            lines += [f"{float(lo)!r},{float(hi)!r},{int(c)}" for lo, hi, c in zip(edges[:-1], edges[1:], counts)]
            (bdir / f"coord_{j:02d}.csv").write_text("\n".join(lines) + "\n")
    path = out / "summary.json"
    path.write_text(json.dumps(result.summary(), indent=2) + "\n")
    return path


def env_seed(default: int) -> int:
    raw = os.environ.get("TLG_SEED")
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise TlgError(f"TLG_SEED must be an integer, got {raw!r}") from None
