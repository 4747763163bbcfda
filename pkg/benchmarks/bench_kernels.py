"""Compare the numba and numpy backends of the walk kernels.

Usage: python3 benchmarks/bench_kernels.py [--n 18] [--length 5000] [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from tlg import _kernels as k
from tlg.derived import build_derived
from tlg.henneberg import random_rhc, rhc_execute
from tlg.stoch import random_blocks, random_weights
from tlg.walks import make_rng


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--n", type=int, default=18)
    p.add_argument("--length", type=int, default=5000)
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args()

    rng = make_rng(0)
    d = build_derived(rhc_execute(random_rhc(args.n, rng)))
    w = random_weights(d.size, rng, kind="simplex", scale=10**6).as_array()
    blocks = random_blocks(d.size, rng)
    walk = rng.integers(0, d.size, size=args.length).astype(np.int64)
    uniforms = rng.random(args.length)
    indptr, indices = d.csr
    tri = d.tri_array
    n = args.n

    cases = {
        "rank_one_walk": lambda impl: impl(np.eye(n), tri, w, walk),
        "block_walk": lambda impl: impl(np.eye(n), tri, blocks, walk),
        "rank_one_trace": lambda impl: impl(np.eye(n), tri, w, walk),
        "random_walk": lambda impl: impl(indptr, indices, np.int64(0), uniforms),
    }
    print(f"n={n} triangles={d.size} length={args.length} (best of {args.repeat})")
    print(f"{'kernel':<16}{'numba ms':>10}{'numpy ms':>10}{'speedup':>9}")
    for name, call in cases.items():
        fast, slow = getattr(k, f"{name}_numba"), getattr(k, f"{name}_numpy")
        call(fast)  # compile outside the timing
        t_fast = min(timeit.repeat(lambda: call(fast), number=1, repeat=args.repeat))
        t_slow = min(timeit.repeat(lambda: call(slow), number=1, repeat=args.repeat))
        print(f"{name:<16}{t_fast * 1e3:>10.2f}{t_slow * 1e3:>10.2f}{t_slow / t_fast:>8.0f}x")


if __name__ == "__main__":
    main()
