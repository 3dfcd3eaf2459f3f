import struct

import numpy as np
import pytest

from mcsp.errors import BadIndexFormat, VersionMismatch
from mcsp.forest import ForestIndex
from mcsp.graph import random_road_graph
from mcsp.serialize import MAGIC, dumps, load_index, loads, save_index
from mcsp.tree import TreeIndex


def _same(a, b, g):
    rng = np.random.default_rng(0)
    for s, t in rng.integers(g.num_vertices, size=(40, 2)):
        s, t = int(s), int(t)
        x, y = a.query_skyline(s, t), b.query_skyline(s, t)
        assert x == y
        for e in x.entries:
            assert a.retrieve_path(e) == b.retrieve_path(e)
        C = tuple(int(v) for v in x.costs[-1, 1:])
        assert a.query_mcsp(s, t, C) == b.query_mcsp(s, t, C)


@pytest.mark.parametrize("kind", ["tree", "boundary", "extended"])
def test_round_trip(kind, tmp_path):
    g = random_road_graph(60, n=3, seed=3)
    idx = TreeIndex.build(g) if kind == "tree" else ForestIndex.build(g, partitions=3, mode=kind)
    path = tmp_path / "x.idx"
    save_index(idx, path)
    back = load_index(path)
    assert back.graph == g and type(back) is type(idx)
    assert back.stats()["label_entries"] == idx.stats()["label_entries"]
    _same(idx, back, g)
    assert dumps(back) == dumps(idx)


def test_corrupt_and_version():
    g = random_road_graph(20, seed=1)
    data = dumps(TreeIndex.build(g))
    with pytest.raises(BadIndexFormat):
        loads(b"not an index at all")
    with pytest.raises(BadIndexFormat):
        loads(data[: len(data) // 2])
    bumped = MAGIC + struct.pack("<I", 99) + data[len(MAGIC) + 4:]
    with pytest.raises(VersionMismatch):
        loads(bumped)


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        load_index(tmp_path / "nope.idx")
