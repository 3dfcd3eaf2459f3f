"""Acceptance criteria, one test per criterion.  Each prints a PASS/FAIL
line (also collected into the pytest terminal summary).

Run standalone with ``python3 tests/test_acceptance.py``."""
import os
import sys
import time

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

import suite  # noqa: E402
from acceptance_log import record  # noqa: E402
from mcsp.forest import ForestIndex  # noqa: E402
from mcsp.graph import grid_graph, random_road_graph, synthesize_costs  # noqa: E402
from mcsp.oracle import brute_force_skyline, sky_dijkstra, sky_dijkstra_mcsp  # noqa: E402
from mcsp.pruning import (FULL, LAYERS, NONE, HopRectangle, NCube, best_under_constraints,  # noqa: E402
                          chain_cubes, compose_cubes, hop_candidates, multi_hop_skyline,
                          ncube_dominates, prune_hops_rectangle)
from mcsp.serialize import dumps, loads  # noqa: E402
from mcsp.skyline import (RankIndex, Stats, concat_hop_2d, skyline_of,  # noqa: E402
                          validate_candidate_nd)
from mcsp.workload import WorkloadSpec, gen_workload  # noqa: E402

ACCEPTED_4D = [(2, 4, 10, 2), (2, 4, 9, 3), (3, 7, 7, 10), (5, 3, 9, 3), (6, 6, 8, 4)]


def _tuples(s):
    return [tuple(int(x) for x in r) for r in s.costs]


# --- 1-6: fixtures --------------------------------------------------------------

def test_c1_dominance_fixture():
    t0 = time.perf_counter()
    a = _tuples(skyline_of([(4, 3), (4, 5), (3, 6), (7, 6)]))
    b = _tuples(skyline_of(ACCEPTED_4D))
    ms = (time.perf_counter() - t0) * 1e3
    ok = a == [(3, 6), (4, 3)] and sorted(b) == sorted(ACCEPTED_4D)
    record(1, ok, f"enumeration -> {a}; 4D rows kept {len(b)}/5; {ms:.3f} ms")
    assert ok


def test_c2_concatenation_fixture():
    got = [_tuples(concat_hop_2d([(2, 4), (4, 3)], [(4, 7), (6, 2)])),
           _tuples(concat_hop_2d([(1, 2)], [(3, 5), (4, 4), (5, 3)])),
           _tuples(concat_hop_2d([(1, 2)], [(1, 1)]))]
    want = [[(6, 11), (8, 6), (10, 5)], [(4, 7), (5, 6), (6, 5)], [(2, 3)]]
    ok = got == want
    record(2, ok, f"{got}")
    assert ok


def test_c3_rectangle_fixture():
    rects = [HopRectangle((6, 11), (10, 5), 1), HopRectangle((4, 7), (6, 5), 5),
             HopRectangle((2, 3), (2, 3), 8)]
    kept = prune_hops_rectangle(rects)
    sets = {1: [(6, 11), (10, 5)], 5: [(4, 7), (6, 5)], 8: [(2, 3)]}
    hops = [(h, [(0, 0)], sets[h]) for h in kept]
    res = _tuples(multi_hop_skyline(hops))
    ok = kept == [8] and res == [(2, 3)]
    record(3, ok, f"surviving hops {kept}, result {res}")
    assert ok


# labels of v9 and v7 to the hops of their LCA bag in the 2D example graph.
# v9 -> v5 is {(3,6),(4,3)}, the skyline of the v5-v9 paths; one transcription
# lists (4,5) as the second entry, which (4,3) dominates, so that variant is
# checked too and must give the same answer.
L_V9 = {1: [(3, 7), (5, 5)], 5: [(3, 6), (4, 3)], 8: [(1, 2)], 12: [(2, 3)]}
L_V9_AS_PRINTED = {**L_V9, 5: [(3, 6), (4, 5)]}
L_V7 = {1: [(3, 5), (4, 0)], 5: [(1, 3), (3, 1)], 8: [(3, 3)], 12: [(2, 2)]}
PER_HOP = {1: [(6, 12), (7, 7), (8, 10), (9, 5)], 5: [(4, 9), (5, 6), (6, 7), (7, 4)],
           8: [(4, 5)], 12: [(4, 5)]}


def test_c4_worked_query():
    per = {h: hop_candidates(L_V9[h], L_V7[h]) for h in (1, 5, 8, 12)}
    hops = [(h, L_V9[h], L_V7[h]) for h in (1, 5, 8, 12)]
    full = best_under_constraints(hops, [6], FULL)
    bare = best_under_constraints(hops, [6], NONE)
    printed = best_under_constraints([(h, L_V9_AS_PRINTED[h], L_V7[h]) for h in (1, 5, 8, 12)], [6])
    ok = (per == {h: sorted(v) for h, v in PER_HOP.items()} and full.cost == (4, 5)
          and bare.cost == (4, 5) and printed.cost == (4, 5)
          and sum(len(v) for v in per.values()) == 10)
    record(4, ok, f"result {full.cost} (unpruned {bare.cost}, with the (4,5) v9-v5 variant "
                  f"row {printed.cost}); per-hop candidates {per}")
    assert ok


def test_c5_nd_validation():
    idx = RankIndex.from_rows(ACCEPTED_4D)
    st = Stats()
    acc = validate_candidate_nd(idx, (8, 5, 8, 9), stats=st)
    info = idx.last
    # brute-force scan: who could dominate, and candidate count agreement
    brute = [r for r in ACCEPTED_4D if all(a <= b for a, b in zip(r, (8, 5, 8, 9)))]
    ranks = [1 + sum(r[i] <= x for r in ACCEPTED_4D) for i, x in enumerate((8, 5, 8, 9))]
    ok1 = (acc and not brute and info.distinct_criterion == 2 and info.checks <= 2
           and info.rank == min(ranks[1:]) and ranks[1:] == [4, 3, 5])
    inter = validate_candidate_nd(RankIndex.from_rows(ACCEPTED_4D), (8, 5, 8, 9), strategy="intersection")
    k, r = 10000, 7000
    i = np.arange(1, k + 1)
    rows = np.stack([np.ones(k, np.int64), i, k + 1 - i,
                     np.random.default_rng(0).permutation(k) + 1], 1)
    big = RankIndex.from_rows(rows)
    rej = validate_candidate_nd(big, (2, r - 1, 8000, 9000))
    tinfo = big.last
    brute_dom = bool(np.any(np.all(rows <= np.array([2, r - 1, 8000, 9000]), axis=1)))
    ok2 = (not rej and tinfo.rank == r and tinfo.checks == 0 and tinfo.rule == "rank-threshold"
           and brute_dom and (k + 1 - r) * 3 < k)
    ok = ok1 and inter == acc and ok2
    record(5, ok, f"(8,5,8,9) accepted={acc} dc=c{info.distinct_criterion} rank={info.rank} "
                  f"checks={info.checks} ids={info.checked_ids}; k={k} r={tinfo.rank} -> "
                  f"{tinfo.rule}, checks={tinfo.checks}")
    assert ok


def _cube(intervals):
    return NCube(tuple(a for a, _ in intervals), tuple(b for _, b in intervals))


def test_c6_cube_composition():
    g1 = _cube([(4, 7), (5, 7), (5, 8), (1, 9)])
    g2 = _cube([(3, 6), (4, 6), (4, 7), (3, 10)])
    g1p = _cube([(3, 5), (2, 6), (5, 9), (1, 4)])
    survive = not ncube_dominates(g1, g2) and not ncube_dominates(g2, g1)
    comp = compose_cubes([g1, g2])
    nxt = chain_cubes(comp, g1p)
    ok = (survive and comp.inf == (3, 4, 4, 1) and comp.sup == (7, 7, 8, 10)
          and nxt.inf == (6, 6, 9, 2) and nxt.sup == (12, 13, 17, 14))
    record(6, ok, f"composite inf {comp.inf} sup {comp.sup}; after next hop inf {nxt.inf} sup {nxt.sup}")
    assert ok


# --- 7-9, 11: the random-instance suite ------------------------------------------

def _answer(r):
    return None if r is None else tuple(r.cost)


@pytest.fixture(scope="module")
def run7():
    t0 = time.perf_counter()
    ins = suite.instances()
    bad, total = 0, 0
    details = []
    for inst in ins:
        idx = suite.indexes(inst.gid)
        for s, t, C in inst.queries:
            want = inst.expected(s, t, C)
            for name, x in idx.items():
                total += 1
                got = _answer(x.query_mcsp(s, t, C))
                sk = x.query_skyline(s, t)
                if got != want or not np.array_equal(sk.costs, inst.sky[(s, t)]):
                    bad += 1
                    details.append((inst.gid, name, s, t, C, got, want))
        # the constrained-mode oracle search on a sample of the queries
        for s, t, C in inst.queries[::10]:
            total += 1
            if _answer(sky_dijkstra_mcsp(inst.graph, s, t, C)) != inst.expected(s, t, C):
                bad += 1
                details.append((inst.gid, "sky-dijkstra-constrained", s, t, C))
    # exhaustive oracle on small graphs
    small_bad = small_pairs = 0
    for k in range(12):
        g = random_road_graph(5 + k % 8, n=2 + k % 3, seed=500 + k)
        for s in range(g.num_vertices):
            ref = sky_dijkstra(g, s)
            for t in range(g.num_vertices):
                small_pairs += 1
                if not np.array_equal(ref[t].costs, brute_force_skyline(g, s, t).costs):
                    small_bad += 1
    runtime = time.perf_counter() - t0
    return dict(instances=ins, bad=bad, total=total, details=details, small_bad=small_bad,
                small_pairs=small_pairs, runtime=runtime)


def test_c7_oracle_equivalence(run7):
    ins = run7["instances"]
    nvs = [i.graph.num_vertices for i in ins]
    ns = sorted({i.graph.criteria_count for i in ins})
    nq = min(len(i.queries) for i in ins)
    ok = (len(ins) >= 50 and min(nvs) >= 20 and max(nvs) <= 200 and ns == [2, 3, 4] and nq >= 200
          and run7["bad"] == 0 and run7["small_bad"] == 0 and run7["runtime"] <= 600
          and sorted({i.partitions for i in ins}) == [2, 3, 4])
    record(7, ok, f"{len(ins)} graphs |V| {min(nvs)}-{max(nvs)}, n {ns}, >= {nq} queries each; "
                  f"{run7['bad']} mismatches / {run7['total']} answers (tree, forest x2 modes, "
                  f"oracle); brute force {run7['small_bad']} / {run7['small_pairs']} pairs; "
                  f"{run7['runtime']:.0f} s")
    assert ok, run7["details"][:5]


def test_c8_pruning_soundness(run7):
    changed = 0
    worse = []
    for inst in run7["instances"]:
        for name, x in suite.indexes(inst.gid).items():
            base_sky, base_mcsp = Stats(), Stats()
            full = []
            for s, t, C in inst.queries:
                full.append((x.query_skyline(s, t, FULL, base_sky).costs,
                             _answer(x.query_mcsp(s, t, C, FULL, base_mcsp))))
            for layer in LAYERS:
                cfg = FULL.without(layer)
                st_sky, st_mcsp = Stats(), Stats()
                for (s, t, C), (fc, fm) in zip(inst.queries, full):
                    if not np.array_equal(x.query_skyline(s, t, cfg, st_sky).costs, fc):
                        changed += 1
                    if _answer(x.query_mcsp(s, t, C, cfg, st_mcsp)) != fm:
                        changed += 1
                if base_sky.candidates > st_sky.candidates or base_mcsp.candidates > st_mcsp.candidates:
                    worse.append((inst.gid, name, layer))
    ok = changed == 0 and not worse
    n = len(run7["instances"])
    record(8, ok, f"{n} graphs x 3 indexes x {len(LAYERS)} layers: {changed} changed results, "
                  f"{len(worse)} (graph, index, layer) cases where pruning raised candidate totals")
    assert ok, worse[:5]


def test_c9_path_integrity(run7):
    walked = bad = 0
    for inst in run7["instances"]:
        g = inst.graph
        for name, x in suite.indexes(inst.gid).items():
            for s, t, C in inst.queries:
                r = x.query_mcsp(s, t, C)
                entries = [r] if r is not None else []
                if name == "tree":
                    entries += x.query_skyline(s, t).entries
                for e in entries:
                    p = x.retrieve_path(e)
                    walked += 1
                    if p[0] != s or p[-1] != t or suite.walk_cost(g, p) != e.cost:
                        bad += 1
    ok = bad == 0 and walked > 0
    record(9, ok, f"{walked} retrieved paths re-walked (every constrained answer on all indexes, "
                  f"every tree skyline entry): {bad} cost mismatches")
    assert ok


def test_c11_serialization(run7):
    bad = checked = 0
    for inst in run7["instances"]:
        for name, x in suite.indexes(inst.gid).items():
            y = loads(dumps(x))
            for s, t, C in inst.queries:
                checked += 1
                a, b = x.query_skyline(s, t), y.query_skyline(s, t)
                ra, rb = x.query_mcsp(s, t, C), y.query_mcsp(s, t, C)
                if (not np.array_equal(a.costs, b.costs) or a.costs.dtype != b.costs.dtype
                        or a.vias != b.vias or ra != rb):
                    bad += 1
    ok = bad == 0
    record(11, ok, f"{checked} (index, query) pairs compared after save/load: {bad} differences")
    assert ok


# --- 10: directional performance --------------------------------------------------

def test_c10_directional_performance():
    # long 5-wide strip grid, positively correlated second criterion
    g = synthesize_costs(grid_graph(5, 10000, n=1, seed=1, maxval=10), "positive", 1, 2)
    t0 = time.perf_counter()
    f = ForestIndex.build(g, partitions=500, mode="boundary", part_order="nested")
    build = time.perf_counter() - t0
    qs = gen_workload(g, WorkloadSpec("Q3", 0.5, 20, 7), lambda s, t: f.query_skyline(s, t))
    ti, ts, agree = [], [], True
    for q in qs:
        t0 = time.perf_counter()
        r = f.query_mcsp(q.s, q.t, q.constraints)
        ti.append(time.perf_counter() - t0)
        t0 = time.perf_counter()
        o = sky_dijkstra_mcsp(g, q.s, q.t, q.constraints)
        ts.append(time.perf_counter() - t0)
        agree &= _answer(r) == _answer(o)
    ratio = float(np.median(ts) / np.median(ti))
    ok = g.num_vertices >= 50000 and ratio >= 10 and agree
    record(10, ok, f"|V|={g.num_vertices} grid, {len(qs)} Q3 queries: median index "
                   f"{np.median(ti) * 1e3:.1f} ms vs sky_dijkstra {np.median(ts) * 1e3:.0f} ms "
                   f"-> {ratio:.1f}x (answers agree: {agree}; build {build:.0f} s)")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
