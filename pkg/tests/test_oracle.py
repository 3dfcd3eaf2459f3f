import pytest
from hypothesis import given, settings, strategies as st

from mcsp.errors import InvalidVertex, TooLarge
from mcsp.graph import Graph, QuerySpec, random_road_graph
from mcsp.oracle import (brute_force_skyline, dijkstra, mcsp_oracle, sky_dijkstra, sky_dijkstra_mcsp)


def triangle():
    # 0-1-2 direct edge vs two-hop detour
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)], [(1, 5), (1, 5), (3, 3)])


def test_triangle_skyline():
    sky = sky_dijkstra(triangle(), 0, targets=[2])[2]
    assert sky.as_tuples() == [(2, 10), (3, 3)]
    assert mcsp_oracle(triangle(), QuerySpec(0, 2, (4,))).cost == (3, 3)
    assert mcsp_oracle(triangle(), QuerySpec(0, 2, (10,))).cost == (2, 10)
    assert mcsp_oracle(triangle(), QuerySpec(0, 2, (2,))) is None


def test_same_vertex():
    g = triangle()
    assert sky_dijkstra(g, 1, targets=[1])[1].as_tuples() == [(0, 0)]
    assert sky_dijkstra_mcsp(g, 1, 1, (0,)).cost == (0, 0)
    assert sky_dijkstra_mcsp(g, 1, 1, (-1,)) is None
    assert brute_force_skyline(g, 1, 1).as_tuples() == [(0, 0)]


def test_disconnected_pair():
    g = Graph.from_edges(4, [(0, 1), (2, 3)], [(1, 1), (1, 1)])
    assert len(sky_dijkstra(g, 0, targets=[3])[3]) == 0
    assert sky_dijkstra_mcsp(g, 0, 3, (100,)) is None
    assert len(brute_force_skyline(g, 0, 3)) == 0


def test_guards():
    with pytest.raises(TooLarge):
        brute_force_skyline(random_road_graph(20, seed=1), 0, 1)
    with pytest.raises(InvalidVertex):
        sky_dijkstra(triangle(), 7)
    with pytest.raises(InvalidVertex):
        sky_dijkstra_mcsp(triangle(), 0, -1, (1,))


def test_dijkstra_matches_weight_skyline():
    g = random_road_graph(60, n=3, seed=4)
    d = dijkstra(g, 0)
    sky = sky_dijkstra(g, 0)
    for v, s in sky.items():
        assert s.costs[0, 0] == d[v]


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6), st.integers(2, 4), st.integers(5, 11))
def test_search_matches_enumeration(seed, n, nv):
    g = random_road_graph(nv, n=n, seed=seed, maxval=9)
    full = sky_dijkstra(g, 0)
    for t in range(nv):
        assert full[t] == brute_force_skyline(g, 0, t)
    # target pruning keeps target sets exact
    assert sky_dijkstra(g, 0, targets=[nv - 1])[nv - 1] == full[nv - 1]


@settings(max_examples=40)
@given(st.integers(0, 10 ** 6), st.integers(2, 4), st.lists(st.integers(0, 60), min_size=3, max_size=3))
def test_constrained_search_is_first_feasible(seed, n, C):
    g = random_road_graph(12, n=n, seed=seed, maxval=20)
    C = C[: n - 1]
    t = g.num_vertices - 1
    ref = mcsp_oracle(g, QuerySpec(0, t, tuple(C)), brute_force_skyline(g, 0, t))
    got = sky_dijkstra_mcsp(g, 0, t, C)
    assert (got.cost if got else None) == (ref.cost if ref else None)
