import json
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import example5, random_tlg, triangle_graph
from oracles import brute_chordal, brute_laman, brute_triangles
from tlg.errors import InvalidGraph, TlgError
from tlg.graph import (
    Graph,
    PebbleGame,
    chordless_cycle,
    enumerate_triangles,
    is_chordal,
    is_laman,
    is_perfect_elimination_order,
    is_simple_edge,
    is_tlg,
    load_graph,
    mcs_order,
    triangles_containing,
)
from tlg.walks import make_rng


@st.composite
def small_graphs(draw, max_n=8):
    n = draw(st.integers(1, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


def test_rejects_bad_edges():
    with pytest.raises(InvalidGraph):
        Graph.from_edges(3, [(0, 0)])
    with pytest.raises(InvalidGraph):
        Graph.from_edges(3, [(0, 1), (1, 0)])
    with pytest.raises(InvalidGraph):
        Graph.from_edges(3, [(0, 3)])


def test_json_roundtrip(tmp_path):
    g = example5()
    path = tmp_path / "g.json"
    path.write_text(json.dumps(g.to_json()))
    assert load_graph(path) == g


def test_parse_error_has_line_context(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"n": 3,\n "edges": [[0, 1],, [1, 2]]}\n')
    with pytest.raises(TlgError) as info:
        load_graph(path)
    msg = str(info.value)
    assert f"{path}:2:" in msg and '"edges"' in msg


def test_triangle_counts_on_example():
    g = example5()
    assert enumerate_triangles(g) == [(0, 1, 2), (0, 1, 3), (1, 2, 4)]
    assert triangles_containing(g, 0, 1) == [(0, 1, 2), (0, 1, 3)]
    assert is_simple_edge(g, (0, 3)) and not is_simple_edge(g, (1, 2))


def test_single_triangle_is_tlg():
    assert is_tlg(triangle_graph())


def test_four_cycle_witness():
    c4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    assert not is_chordal(c4)
    assert sorted(chordless_cycle(c4)) == [0, 1, 2, 3]


def test_k4_is_chordal_not_laman():
    k4 = Graph.from_edges(4, list(combinations(range(4), 2)))
    assert is_chordal(k4) and not is_laman(k4) and not is_tlg(k4)


def test_pebble_game_rejects_redundant_edge():
    game = PebbleGame(4)
    for e in combinations(range(4), 2):
        accepted = game.add_edge(*e)
    assert not accepted  # the sixth edge of K4 is dependent


@settings(max_examples=150, deadline=None)
@given(small_graphs())
def test_chordal_matches_brute_force(g):
    assert is_chordal(g) == brute_chordal(g.n, g.edges)
    order = mcs_order(g)
    assert sorted(order) == list(range(g.n))
    assert is_perfect_elimination_order(g, order[::-1]) == is_chordal(g)


@settings(max_examples=150, deadline=None)
@given(small_graphs())
def test_chordless_cycle_is_induced(g):
    cyc = chordless_cycle(g)
    if cyc is None:
        assert brute_chordal(g.n, g.edges)
        return
    k = len(cyc)
    assert k >= 4 and len(set(cyc)) == k
    for a, b in combinations(range(k), 2):
        consecutive = (b - a) in (1, k - 1)
        assert g.has_edge(cyc[a], cyc[b]) == consecutive


@settings(max_examples=150, deadline=None)
@given(small_graphs(max_n=7))
def test_laman_matches_brute_force(g):
    assert is_laman(g) == brute_laman(g.n, g.edges)


@settings(max_examples=100, deadline=None)
@given(small_graphs())
def test_triangles_match_brute_force(g):
    assert enumerate_triangles(g) == brute_triangles(g.n, g.edges)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 12), st.integers(0, 2**32))
def test_random_rhc_graphs_are_tlg(n, seed):
    g = random_tlg(n, make_rng(seed))
    assert g.m == 2 * n - 3
    assert len(enumerate_triangles(g)) == n - 2
    assert is_tlg(g)


def test_relabel_preserves_structure():
    g = example5()
    h = g.relabel([4, 3, 2, 1, 0])
    assert h.m == g.m and len(enumerate_triangles(h)) == 3
    assert h.has_edge(4, 3)
