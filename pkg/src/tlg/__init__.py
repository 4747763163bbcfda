"""Triangulated Laman graphs and the limits of walk-ordered products of
local rank-one stochastic matrices."""

from .apv import (
    ApvVector,
    all_apvs,
    apv_sequence,
    check_apv_relation,
    design_weights,
    normalized_apv,
    path_ratio,
    ratio,
    unnormalized_apv,
    verify_eigen_identities,
)
from .derived import DerivedGraph, bottleneck, build_derived, subgraph_for_node
from .errors import InvariantViolation, TlgError
from .graph import Graph, enumerate_triangles, is_chordal, is_laman, is_tlg
from .henneberg import (
    EdgeSplit,
    NodeAdd,
    RhcProgram,
    RhcStep,
    henneberg_execute,
    henneberg_to_rhc,
    random_rhc,
    rhc_execute,
    rhc_from_triangle,
    rhc_recognize,
)
from .stoch import (
    WeightAssignment,
    check_assumption,
    local_matrix,
    product_along_walk,
    random_weights,
    seminorm,
)
from .walks import WalkKind, WalkSpec, make_rng

__version__ = "0.1.0"
