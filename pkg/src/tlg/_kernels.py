"""Hot loops for walk products.

Every kernel has a numba ``@njit`` implementation and a pure-numpy fallback.
The public names bind to the numba versions unless numba is missing or
``TLG_DISABLE_NUMBA`` is set to a truthy value; both variants stay importable
as ``<name>_numba`` / ``<name>_numpy`` for cross-checking and benchmarks.

Left-multiplying the accumulator ``P`` by a local matrix only rewrites the
three rows of its triangle, so one step costs O(3n) instead of O(n^3).
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("TLG_DISABLE_NUMBA", "").lower() not in (
    "1",
    "true",
    "yes",
)


# -- numpy fallbacks ----------------------------------------------------------


def rank_one_walk_numpy(P, tri, weights, walk):
    for t in walk:
        rows = tri[t]
        P[rows] = weights[t] @ P[rows]
    return P


def block_walk_numpy(P, tri, blocks, walk):
    for t in walk:
        rows = tri[t]
        P[rows] = blocks[t] @ P[rows]
    return P


def seminorm_numpy(P):
    if P.size == 0:
        return 0.0
    return float(np.max(P.max(axis=0) - P.min(axis=0)))


def rank_one_trace_numpy(P, tri, weights, walk):
    out = np.empty(len(walk))
    for s, t in enumerate(walk):
        rows = tri[t]
        P[rows] = weights[t] @ P[rows]
        out[s] = np.max(P.max(axis=0) - P.min(axis=0))
    return out


def random_walk_numpy(indptr, indices, start, uniforms):
    walk = np.empty(len(uniforms) + 1, dtype=np.int64)
    cur = start
    walk[0] = cur
    for s, u in enumerate(uniforms):
        deg = indptr[cur + 1] - indptr[cur]
        if deg > 0:
            cur = indices[indptr[cur] + int(u * deg)]
        walk[s + 1] = cur
    return walk


# -- numba kernels ------------------------------------------------------------


def _rank_one_walk(P, tri, weights, walk):
    n = P.shape[1]
    for s in range(walk.shape[0]):
        t = walk[s]
        a, b, c = tri[t, 0], tri[t, 1], tri[t, 2]
        wa, wb, wc = weights[t, 0], weights[t, 1], weights[t, 2]
        for col in range(n):
            x = wa * P[a, col] + wb * P[b, col] + wc * P[c, col]
            P[a, col] = x
            P[b, col] = x
            P[c, col] = x
    return P


def _block_walk(P, tri, blocks, walk):
    n = P.shape[1]
    for s in range(walk.shape[0]):
        t = walk[s]
        a, b, c = tri[t, 0], tri[t, 1], tri[t, 2]
        B = blocks[t]
        for col in range(n):
            pa, pb, pc = P[a, col], P[b, col], P[c, col]
            P[a, col] = B[0, 0] * pa + B[0, 1] * pb + B[0, 2] * pc
            P[b, col] = B[1, 0] * pa + B[1, 1] * pb + B[1, 2] * pc
            P[c, col] = B[2, 0] * pa + B[2, 1] * pb + B[2, 2] * pc
    return P


def _seminorm(P):
    best = 0.0
    for col in range(P.shape[1]):
        lo = P[0, col]
        hi = lo
        for row in range(1, P.shape[0]):
            x = P[row, col]
            if x < lo:
                lo = x
            elif x > hi:
                hi = x
        if hi - lo > best:
            best = hi - lo
    return best


def _rank_one_trace(P, tri, weights, walk):
    out = np.empty(walk.shape[0])
    for s in range(walk.shape[0]):
        _rank_one_walk(P, tri, weights, walk[s : s + 1])
        out[s] = _seminorm(P)
    return out


def _random_walk(indptr, indices, start, uniforms):
    walk = np.empty(uniforms.shape[0] + 1, dtype=np.int64)
    cur = start
    walk[0] = cur
    for s in range(uniforms.shape[0]):
        deg = indptr[cur + 1] - indptr[cur]
        if deg > 0:
            cur = indices[indptr[cur] + int(uniforms[s] * deg)]
        walk[s + 1] = cur
    return walk


if HAVE_NUMBA:
    _jit = numba.njit(cache=True, nogil=True)
    rank_one_walk_numba = _jit(_rank_one_walk)
    block_walk_numba = _jit(_block_walk)
    seminorm_numba = _jit(_seminorm)
    # the trace kernel calls the other two, so they must be jitted first
    _rank_one_walk = rank_one_walk_numba
    _seminorm = seminorm_numba
    rank_one_trace_numba = _jit(_rank_one_trace)
    random_walk_numba = _jit(_random_walk)
else:  # pragma: no cover
    rank_one_walk_numba = _rank_one_walk
    block_walk_numba = _block_walk
    seminorm_numba = _seminorm
    rank_one_trace_numba = _rank_one_trace
    random_walk_numba = _random_walk


if USE_NUMBA:
    rank_one_walk = rank_one_walk_numba
    block_walk = block_walk_numba
    seminorm = seminorm_numba
    rank_one_trace = rank_one_trace_numba
    random_walk = random_walk_numba
else:
    rank_one_walk = rank_one_walk_numpy
    block_walk = block_walk_numpy
    seminorm = seminorm_numpy
    rank_one_trace = rank_one_trace_numpy
    random_walk = random_walk_numpy

BACKEND = "numba" if USE_NUMBA else "numpy"
