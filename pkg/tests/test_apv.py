from fractions import Fraction as F
from itertools import product

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import EXAMPLE5_WEIGHTS, example5, random_tlg, triangle_graph
from oracles import derived_cycles
from tlg.apv import (
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
from tlg.derived import build_derived
from tlg.errors import AssumptionViolated, InvalidTarget, NotAdjacent, NotAWalk
from tlg.stoch import WeightAssignment, check_assumption, product_along_walk, random_weights
from tlg.walks import make_rng, periodic_exhaustive_walk


def closed_forms(a):
    """Closed forms for the n=5 example; ``a[t][v]`` is triangle t's weight on node v (1-based)."""
    r21 = (a[1][1] + a[1][2]) / (a[2][1] + a[2][2])  # from triangle 2 to triangle 1
    r31 = (a[1][2] + a[1][3]) / (a[3][2] + a[3][3])
    w1 = [a[1][1], a[1][2], a[1][3], a[2][4] * r21, a[3][5] * r31]
    w2 = [a[2][1], a[2][2], a[1][3] / r21, a[2][4], a[3][5] * r31 / r21]
    w3 = [a[1][1] / r31, a[3][2], a[3][3], a[2][4] * r21 / r31, a[3][5]]
    return [w1, w2, w3]


def _one_based(assign):
    d = build_derived(example5())
    return {t + 1: {v + 1: x for v, x in zip(d.triangles[t], assign.weights[t])}
            for t in range(3)}


@pytest.fixture
def d5():
    return build_derived(example5())


def test_ratio_examples(d5, ex5_weights):
    assert ratio(d5, ex5_weights, 0, 1) == F(8, 9)
    assert ratio(d5, ex5_weights, 1, 0) == F(9, 8)
    same = WeightAssignment.from_values([[F(1, 3)] * 3] * 3)
    assert ratio(d5, same, 0, 2) == 1
    with pytest.raises(NotAdjacent):
        ratio(d5, ex5_weights, 1, 2)


def test_path_ratio(d5, ex5_weights):
    assert path_ratio(d5, ex5_weights, [2]) == 1
    assert path_ratio(d5, ex5_weights, [2, 0, 1]) == path_ratio(d5, ex5_weights, [2, 0, 2, 0, 1])
    assert path_ratio(d5, ex5_weights, [0, 1, 0, 2, 0]) == 1
    with pytest.raises(NotAWalk):
        path_ratio(d5, ex5_weights, [1, 2])


def test_single_triangle():
    d = build_derived(triangle_graph())
    a = WeightAssignment.from_values([[F(1, 5), F(2, 5), F(2, 5)]])
    assert unnormalized_apv(d, a, 0).w == a.weights[0]
    assert normalized_apv(d, a, 0) == a.weights[0]
    verify_eigen_identities(d, a)
    assert apv_sequence(d, a, [0, 0, 0]) == [a.weights[0]] * 3


def test_example_vectors(d5, ex5_weights):
    v = unnormalized_apv(d5, ex5_weights, 0)
    assert v.w == (F(1, 2), F(1, 4), F(1, 4), F(3, 8), F(1, 6))
    assert v.total == F(37, 24)
    assert v.w_bar == tuple(F(k, 37) for k in (12, 6, 6, 9, 4))
    expected = closed_forms(_one_based(ex5_weights))
    assert [list(x.w) for x in all_apvs(d5, ex5_weights)] == expected


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32))
def test_closed_forms_random_weights(seed):
    d = build_derived(example5())
    w = random_weights(3, make_rng(seed), kind="integer", scale=30)
    assert [list(x.w) for x in all_apvs(d, w)] == closed_forms(_one_based(w))


def test_example_matches_long_product(d5, ex5_weights):
    for i in range(3):
        P = product_along_walk(d5, ex5_weights, periodic_exhaustive_walk(d5, i, 10_000))
        bar = np.array([float(x) for x in normalized_apv(d5, ex5_weights, i)])
        assert np.abs(P - bar).max() < 1e-12


def test_json_report(d5, ex5_weights):
    rep = unnormalized_apv(d5, ex5_weights, 0).to_json()
    assert rep["triangle"] == 0 and rep["w"][3] == ["3", "8"]
    assert rep["w_bar"][0] == ["12", "37"] and rep["w_bar_float"][0] == 12 / 37


def test_assumption_violation(d5):
    bad = WeightAssignment.from_values([[0, 0, 1], [F(1, 3)] * 3, [F(1, 3)] * 3])
    with pytest.raises(AssumptionViolated) as info:
        unnormalized_apv(d5, bad, 0)
    assert info.value.violations == [(0, (0, 1))]


def test_identities_example(d5, ex5_weights):
    rep = verify_eigen_identities(d5, ex5_weights)
    assert rep.fixed_point_checks == 3 and rep.neighbour_checks == 4


@settings(max_examples=25, deadline=None)
@given(st.integers(3, 10), st.integers(0, 2**32))
def test_apv_invariants(n, seed):
    rng = make_rng(seed)
    d = build_derived(random_tlg(n, rng))
    w = random_weights(d.size, rng)
    for i, j in d.adjacency:
        assert ratio(d, w, i, j) * ratio(d, w, j, i) == 1
    for vec in all_apvs(d, w):
        assert all(x >= 0 for x in vec.w) and any(vec.w)
        for v, x in zip(d.triangles[vec.tri], w.weights[vec.tri]):
            assert vec.w[v] == x
        assert sum(vec.w_bar) == 1
    verify_eigen_identities(d, w, closed_walks=3)


@settings(max_examples=20, deadline=None)
@given(st.integers(3, 10), st.integers(0, 2**32))
def test_cycles_have_unit_ratio(n, seed):
    rng = make_rng(seed)
    g = random_tlg(n, rng)
    d = build_derived(g)
    w = random_weights(d.size, rng)
    for cyc in derived_cycles(g.n, g.edges):
        assert path_ratio(d, w, list(cyc) + [cyc[0]]) == 1


@settings(max_examples=20, deadline=None)
@given(st.integers(3, 8), st.integers(0, 2**32))
def test_ratio_is_path_independent(n, seed):
    rng = make_rng(seed)
    d = build_derived(random_tlg(n, rng))
    w = random_weights(d.size, rng)
    dg = nx.Graph(list(d.adjacency))
    dg.add_nodes_from(range(d.size))
    for s, t in product(range(d.size), repeat=2):
        if s == t:
            continue
        values = {path_ratio(d, w, p) for p in nx.all_simple_paths(dg, s, t)}
        assert len(values) == 1


def test_apv_sequence_example(d5, ex5_weights):
    walk = periodic_exhaustive_walk(d5, 0, 21)
    xs = apv_sequence(d5, ex5_weights, walk)
    bars = [normalized_apv(d5, ex5_weights, i) for i in range(3)]
    assert xs[:4] == [bars[0], bars[1], bars[0], bars[2]]
    assert set(xs) == set(bars)
    for s in range(20):
        for t in range(s + 1, 21):
            assert check_apv_relation(d5, ex5_weights, walk, xs, s, t)
    with pytest.raises(NotAWalk):
        apv_sequence(d5, ex5_weights, [1, 2])


def test_design_base_case():
    d = build_derived(triangle_graph())
    target = [F(1, 6), F(1, 3), F(1, 2)]
    assert design_weights(d, target, 0).weights[0] == tuple(target)


def test_design_uniform_example(d5):
    target = [F(1, 5)] * 5
    w = design_weights(d5, target, 0)
    assert list(normalized_apv(d5, w, 0)) == target


@pytest.mark.parametrize("target", [
    [F(1, 2), F(1, 2), 0, 0, 0],
    [F(1, 5)] * 4,
    [F(1, 5)] * 4 + [F(1, 4)],
    [F(3, 5), F(1, 5), F(1, 5), F(1, 5), F(-1, 5)],
    [0.2] * 5,
])
def test_design_rejects_bad_targets(d5, target):
    with pytest.raises(InvalidTarget):
        design_weights(d5, target, 0)


def test_design_accepts_generator(d5):
    w = design_weights(d5, (F(1, 5) for _ in range(5)), 1)
    assert list(normalized_apv(d5, w, 1)) == [F(1, 5)] * 5


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 10), st.integers(0, 2**32))
def test_design_round_trip(n, seed):
    rng = make_rng(seed)
    d = build_derived(random_tlg(n, rng))
    k = rng.integers(1, 50, size=n)
    target = [F(int(x), int(k.sum())) for x in k]
    i = int(rng.integers(d.size))
    w = design_weights(d, target, i)
    assert check_assumption(d, w).ok
    assert list(normalized_apv(d, w, i)) == target
