import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mcsp.errors import InvalidVertex
from mcsp.graph import Graph, grid_graph, random_road_graph
from mcsp.oracle import brute_force_skyline, mcsp_from_skyline, sky_dijkstra
from mcsp.pruning import LAYERS, NONE, FULL
from mcsp.tree import TreeIndex, check_decomposition, lca

from suite import walk_cost


def rows(sky):
    return [tuple(r) for r in sky.costs.tolist()]


@pytest.mark.parametrize("seed,n", [(0, 2), (1, 3), (2, 4), (3, 2)])
def test_tree_matches_oracle(seed, n):
    g = random_road_graph(70, n=n, seed=seed)
    idx = TreeIndex.build(g)
    assert check_decomposition(idx.tree, g.edges()[0]) == []
    rng = np.random.default_rng(seed)
    for s in rng.choice(g.num_vertices, 5, replace=False):
        ref = sky_dijkstra(g, int(s))
        for t in range(g.num_vertices):
            got = idx.query_skyline(int(s), t)
            assert rows(got) == rows(ref[t])
            for e in got.entries:
                p = idx.retrieve_path(e)
                assert p[0] == s and p[-1] == t
                assert walk_cost(g, p) == e.cost
            C = tuple(int(x) for x in ref[t].costs[:, 1:].mean(0))
            r = idx.query_mcsp(int(s), t, C)
            want = mcsp_from_skyline(ref[t], C)
            assert (r.cost if r else None) == (want.cost if want else None)


@settings(max_examples=30)
@given(st.integers(0, 10 ** 6), st.integers(2, 4))
def test_tree_matches_enumeration(seed, n):
    g = random_road_graph(10, n=n, seed=seed, maxval=12)
    idx = TreeIndex.build(g)
    for s in range(0, 10, 3):
        for t in range(10):
            assert idx.query_skyline(s, t) == brute_force_skyline(g, s, t)


@pytest.mark.parametrize("layer", LAYERS)
def test_ablation_same_answers(layer):
    g = grid_graph(5, 6, n=3, seed=2)
    full = TreeIndex.build(g)
    off = TreeIndex.build(g, FULL.without(layer))
    bare = TreeIndex.build(g, NONE)
    for s, t in [(0, 29), (3, 17), (12, 12), (5, 24)]:
        a = full.query_skyline(s, t)
        assert a == off.query_skyline(s, t) == bare.query_skyline(s, t)
        assert a == full.query_skyline(s, t, config=NONE)


def test_lca_and_ancestors():
    g = random_road_graph(40, seed=5)
    t = TreeIndex.build(g).tree
    for u in range(0, 40, 7):
        for v in range(0, 40, 5):
            a = lca(t, u, v)
            # is_ancestor is strict, so allow a == u or a == v
            assert (a == u or t.is_ancestor(a, u)) and (a == v or t.is_ancestor(a, v))
            # no child of a is a common ancestor
            for c in range(40):
                if t.parent[c] == a and (c == u or t.is_ancestor(c, u)) and (c == v or t.is_ancestor(c, v)):
                    pytest.fail("lca not lowest")
    assert lca(t, 3, 3) == 3


def test_same_vertex_and_negative_constraint():
    idx = TreeIndex.build(random_road_graph(20, n=3, seed=3))
    assert rows(idx.query_skyline(4, 4)) == [(0, 0, 0)]
    assert idx.query_mcsp(4, 4, (0, 0)).cost == (0, 0, 0)
    assert idx.query_mcsp(4, 4, (0, -1)) is None
    assert idx.retrieve_path(idx.query_mcsp(4, 4, (0, 0))) == [4]


def test_invalid_vertex():
    idx = TreeIndex.build(random_road_graph(20, seed=3))
    with pytest.raises(InvalidVertex):
        idx.query_skyline(0, 20)
    with pytest.raises(InvalidVertex):
        idx.query_mcsp(-1, 2, (5,))


def test_path_graph_and_stats():
    g = Graph.from_edges(5, [(i, i + 1) for i in range(4)], [(1, 2)] * 4)
    idx = TreeIndex.build(g)
    assert rows(idx.query_skyline(0, 4)) == [(4, 8)]
    st_ = idx.stats()
    assert st_["kind"] == "tree" and st_["vertices"] == 5 and st_["bytes"] > 0
    assert st_["width"] <= 2
