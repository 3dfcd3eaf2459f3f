import itertools

import pytest
from hypothesis import given, strategies as st

from mcsp.errors import EmptyHop, InvalidValue
from mcsp.pruning import (FULL, LAYERS, NONE, NCube, PruningConfig, best_under_constraints, chain_cubes,
                          compose_cubes, hop_ncube, hop_rectangle, multi_hop_skyline, ncube_dominates,
                          ncube_order, prune_hops_rectangle)
from mcsp.skyline import Stats, dominates, skyline_of


def brute(hops):
    vecs = set()
    for _, a, b in hops:
        for p, q in itertools.product(a, b):
            vecs.add(tuple(x + y for x, y in zip(p, q)))
    vecs = sorted(vecs)
    return [v for v in vecs if not any(dominates(u, v) for u in vecs)]


def hop_lists(n):
    side = st.lists(st.tuples(*[st.integers(0, 25)] * n), min_size=1, max_size=8)
    return st.lists(st.tuples(side, side), min_size=1, max_size=6).map(
        lambda hs: [(h, skyline_of(a).as_tuples(), skyline_of(b).as_tuples()) for h, (a, b) in enumerate(hs)])


configs = st.builds(PruningConfig, st.booleans(), st.booleans(), st.booleans(), st.booleans())


@given(st.integers(2, 4).flatmap(hop_lists), configs)
def test_multi_hop_matches_brute(hops, cfg):
    got = multi_hop_skyline(hops, cfg)
    assert got.as_tuples() == brute(hops)


@given(st.integers(2, 4).flatmap(lambda n: st.tuples(hop_lists(n), st.lists(st.integers(-1, 50), min_size=n - 1,
                                                                             max_size=n - 1))), configs)
def test_best_matches_filter(data, cfg):
    hops, C = data
    feas = [v for v in brute(hops) if all(x <= c for x, c in zip(v[1:], C))]
    got = best_under_constraints(hops, C, cfg)
    if not feas:
        assert got is None
    else:
        assert got.cost == feas[0]
        h, i, j = got.via[1], got.via[2], got.via[3]
        _, a, b = hops[h]
        assert tuple(x + y for x, y in zip(a[i], b[j])) == got.cost


@given(st.integers(2, 4).flatmap(hop_lists))
def test_pruning_never_adds_candidates(hops):
    full, none = Stats(), Stats()
    assert multi_hop_skyline(hops, FULL, full) == multi_hop_skyline(hops, NONE, none)
    assert full.candidates <= none.candidates


def test_rectangle_bounds():
    r = hop_rectangle([(2, 4), (4, 3)], [(4, 7), (6, 2)], hop=1)
    assert r.top_left == (6, 11) and r.bottom_right == (10, 5)
    assert r.inf == (6, 5) and r.sup == (10, 11)


def test_rectangle_pruning_drops_dominated_hop():
    a = hop_rectangle([(1, 2)], [(1, 1)], hop=0)          # single point (2,3)
    b = hop_rectangle([(5, 9)], [(5, 9)], hop=1)           # (10,18) beaten by hop 0
    assert prune_hops_rectangle([a, b]) == [0]
    assert prune_hops_rectangle([]) == []


def test_ncube_basics():
    c = hop_ncube([(1, 5, 2), (3, 1, 4)], [(2, 2, 2)], hop=3)
    assert c.inf == (3, 3, 4) and c.sup == (5, 7, 6) and c.n == 3
    far = NCube((6, 8, 7), (9, 9, 9), 4)
    assert ncube_dominates(c, far)
    assert not ncube_dominates(far, c)


def test_compose_and_chain():
    a = NCube((1, 2), (3, 4), 0)
    b = NCube((0, 3), (2, 6), 1)
    u = compose_cubes([a, b])
    assert u.inf == (0, 2) and u.sup == (3, 6)
    ch = chain_cubes(a, b)
    assert ch.inf == (1, 5) and ch.sup == (5, 10)


def test_ncube_order_counts_strict_minima():
    # hop 2 alone has the strict minimum inf on dimension 1; hops 0 and 1
    # tie on dimension 0, so that dimension counts for neither
    cubes = [NCube((5, 1), (6, 2), 2), NCube((1, 9), (2, 9), 1), NCube((1, 3), (4, 4), 0)]
    order = [c.hop for c in ncube_order(cubes)]
    assert order[0] == 2
    for perm in itertools.permutations(cubes):
        assert [c.hop for c in ncube_order(list(perm))] == order
    assert [c.hop for c in ncube_order(cubes[:1])] == [2]
    assert ncube_order([]) == []


def test_errors():
    with pytest.raises(EmptyHop):
        hop_ncube([], [(1, 1)])
    with pytest.raises(InvalidValue):
        multi_hop_skyline([])
    with pytest.raises(InvalidValue):
        best_under_constraints([(0, [(1, 1, 1)], [(1, 1, 1)])], [1])


def test_without():
    assert FULL.without("ncube") == PruningConfig(True, False, True, True)
    assert set(LAYERS) == set(FULL.__dict__)
