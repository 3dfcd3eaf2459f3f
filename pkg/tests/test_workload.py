import numpy as np
import pytest
from hypothesis import given, strategies as st

from mcsp.errors import BucketEmpty, InvalidValue
from mcsp.graph import Graph, QuerySpec, random_road_graph
from mcsp.oracle import dijkstra, sky_dijkstra
from mcsp.skyline import SkylinePathSet
from mcsp.workload import (WorkloadSpec, bucket_range, constraint_bounds, estimate_dmax, format_workload,
                           gen_workload, interpolate, parse_workload, read_workload, write_workload)


def test_interpolate_endpoints_and_midpoint():
    assert interpolate((10, 4), (20, 9), 0) == (10, 4)
    assert interpolate((10, 4), (20, 9), 1) == (20, 9)
    assert interpolate((10, 4), (20, 9), 0.5) == (15, 7)     # 6.5 rounds up
    assert interpolate((0,), (1,), 0.5) == (1,)
    assert interpolate((0,), (10,), 0.3) == (3,)               # exact decimal, no float drift


@given(st.lists(st.tuples(st.integers(0, 1000), st.integers(0, 1000)), min_size=1, max_size=4),
       st.sampled_from([0.1, 0.3, 0.5, 0.7, 0.9]))
def test_interpolate_between_bounds(pairs, r):
    lo = tuple(min(a, b) for a, b in pairs)
    hi = tuple(max(a, b) for a, b in pairs)
    out = interpolate(lo, hi, r)
    assert all(a <= x <= b for a, x, b in zip(lo, out, hi))


def test_constraint_bounds():
    sky = SkylinePathSet([(3, 9, 5), (4, 6, 7), (8, 2, 6)])
    assert constraint_bounds(sky) == ((2, 5), (9, 5))


def test_bucket_ranges():
    assert bucket_range(64, "Q1") == (2, 4)
    assert bucket_range(64, "Q5") == (32, 64)
    assert bucket_range(64, 3) == (8, 16)


def test_spec_validation():
    with pytest.raises(InvalidValue):
        WorkloadSpec("Q7")
    with pytest.raises(InvalidValue):
        WorkloadSpec("Q3", 1.5)
    with pytest.raises(InvalidValue):
        WorkloadSpec("Q3", 0.5, -1)


@pytest.mark.parametrize("bucket", ["Q2", "Q4"])
def test_generated_queries_fall_in_bucket(bucket):
    g = random_road_graph(150, n=3, seed=5)
    spec = WorkloadSpec(bucket, 0.5, 15, seed=3)
    qs = gen_workload(g, spec)
    assert len(qs) == 15
    d_max = estimate_dmax(g, np.random.default_rng(3))
    lo, hi = bucket_range(d_max, bucket)
    for q in qs:
        d = dijkstra(g, q.s)[q.t]
        assert lo <= d < hi
        cmin, cmax = constraint_bounds(sky_dijkstra(g, q.s, targets=[q.t])[q.t])
        assert q.constraints == interpolate(cmin, cmax, 0.5)


def test_reproducible_bytes(tmp_path):
    g = random_road_graph(120, seed=9)
    spec = WorkloadSpec("Q3", 0.7, 12, seed=11)
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    write_workload(gen_workload(g, spec), a)
    write_workload(gen_workload(g, spec), b)
    assert a.read_bytes() == b.read_bytes()
    assert read_workload(a) == gen_workload(g, spec)


def test_bucket_empty():
    # two vertices: every distance is 0 or d_max, so Q1 never has pairs
    g = Graph.from_edges(2, [(0, 1)], [(5, 5)])
    with pytest.raises(BucketEmpty):
        gen_workload(g, WorkloadSpec("Q1", 0.5, 3, max_tries=50))


def test_parse_format():
    qs = [QuerySpec(1, 2, (3, 4)), QuerySpec(5, 6, None)]
    text = format_workload(qs)
    assert text == "1 2 3 4\n5 6\n"
    assert parse_workload("# header\n" + text + "\n") == qs
    with pytest.raises(InvalidValue):
        parse_workload("1 x\n")
    with pytest.raises(InvalidValue):
        parse_workload("1\n")
