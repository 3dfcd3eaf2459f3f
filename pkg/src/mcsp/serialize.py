"""Binary index files: 8 magic bytes, a little-endian uint32 format version,
then an uncompressed npz of flat arrays (no pickles)."""
from __future__ import annotations

import io
import struct
import zipfile

import numpy as np

from .errors import BadIndexFormat, VersionMismatch
from .forest import ForestIndex, InnerInfo
from .graph import Graph
from .partition import make_partitions
from .pruning import PruningConfig
from .tree import TDTree, TreeIndex

MAGIC = b"MCSPIDX\x00"
VERSION = 1

_TREE_ARRAYS = ("glob", "seq", "order", "parent", "depth", "cut_ptr", "cut_v", "cut_lo", "cut_hi",
                "sc_costs", "sc_prov", "dir_ptr", "dir_arena", "dir_lo", "dir_hi", "anc",
                "lab_costs", "lab_prov", "up")


def _put_tree(out: dict, key: str, t: TDTree):
    for name in _TREE_ARRAYS:
        out[f"{key}.{name}"] = getattr(t, name)
    out[f"{key}.meta"] = np.array([t.nv, t.n, t.tid], np.int64)
    lens = np.array([len(p) for p in t.paths], np.int64)
    out[f"{key}.path_len"] = lens
    out[f"{key}.path_cat"] = (np.concatenate(t.paths).astype(np.int64) if len(lens)
                              else np.empty(0, np.int64))


def _get_tree(z, key: str) -> TDTree:
    nv, n, tid = (int(x) for x in z[f"{key}.meta"])
    a = {name: z[f"{key}.{name}"] for name in _TREE_ARRAYS}
    lens = z[f"{key}.path_len"]
    cat = z[f"{key}.path_cat"]
    ends = np.cumsum(lens)
    paths = [cat[e - k:e] for k, e in zip(lens, ends)]
    t = TDTree(nv, n, a["glob"], a["seq"], a["order"], a["parent"], a["depth"], a["cut_ptr"],
               a["cut_v"], a["cut_lo"], a["cut_hi"], a["sc_costs"], a["sc_prov"], paths,
               a["dir_ptr"], a["dir_arena"], a["dir_lo"], a["dir_hi"], a["anc"], a["lab_costs"],
               a["lab_prov"], a["up"], tid=tid)
    return t


def _config_array(c: PruningConfig):
    return np.array([c.rectangle, c.ncube, c.constraint, c.rank], np.bool_)


def _graph_arrays(out, g: Graph):
    out["g.indptr"], out["g.nbr"], out["g.ncost"] = g.indptr, g.nbr, g.ncost
    out["g.warn"] = np.array([g.merge_warnings], np.int64)


def _graph(z) -> Graph:
    return Graph(z["g.indptr"], z["g.nbr"], z["g.ncost"], int(z["g.warn"][0]))


def dumps(index) -> bytes:
    out = {}
    _graph_arrays(out, index.graph)
    out["config"] = _config_array(index.config)
    out["build_time"] = np.array([index.build_time], np.float64)
    if isinstance(index, TreeIndex):
        out["kind"] = np.array([0], np.int64)
        _put_tree(out, "tree", index.tree)
    elif isinstance(index, ForestIndex):
        out["kind"] = np.array([1], np.int64)
        out["part"] = index.part_of
        out["mode"] = np.array([0 if index.mode == "boundary" else 1], np.int64)
        out["part_order"] = np.frombuffer(index.part_order.encode(), np.uint8)
        for p, info in zip(index.parts, index.inner):
            _put_tree(out, f"inner{p.id}", info.tree)
            out[f"inner{p.id}.chain"] = info.chain
        out["has_btree"] = np.array([index.btree is not None], np.bool_)
        if index.btree is not None:
            _put_tree(out, "btree", index.btree)
        if index.ext_costs is not None:
            for name in ("ext_base", "ext_dir_lo", "ext_dir_hi", "ext_costs", "ext_prov"):
                out[name] = getattr(index, name)
    else:
        raise TypeError(f"cannot serialise {type(index).__name__}")
    buf = io.BytesIO()
    np.savez(buf, **out)
    return MAGIC + struct.pack("<I", VERSION) + buf.getvalue()


def loads(data: bytes):
    if len(data) < 12 or data[:8] != MAGIC:
        raise BadIndexFormat("not an index file")
    (ver,) = struct.unpack("<I", data[8:12])
    if ver != VERSION:
        raise VersionMismatch(f"index format {ver}, expected {VERSION}")
    try:
        with np.load(io.BytesIO(data[12:]), allow_pickle=False) as z:
            return _rebuild(z)
    except (zipfile.BadZipFile, KeyError, ValueError, OSError, EOFError) as e:
        raise BadIndexFormat(f"corrupt index: {e}") from None


def _rebuild(z):
    g = _graph(z)
    config = PruningConfig(*(bool(x) for x in z["config"]))
    build_time = float(z["build_time"][0])
    kind = int(z["kind"][0])
    if kind == 0:
        return TreeIndex(g, _get_tree(z, "tree"), config, build_time)
    if kind != 1:
        raise BadIndexFormat(f"unknown index kind {kind}")
    parts = make_partitions(g, z["part"])
    inner = []
    for p in parts:
        t = _get_tree(z, f"inner{p.id}")
        inner.append(InnerInfo(t, {int(v): k for k, v in enumerate(p.vertices)}, z[f"inner{p.id}.chain"]))
    btree = _get_tree(z, "btree") if bool(z["has_btree"][0]) else None
    mode = "boundary" if int(z["mode"][0]) == 0 else "extended"
    f = ForestIndex(g, parts, inner, btree, mode, config, bytes(z["part_order"]).decode(), build_time)
    if mode == "extended":
        for name in ("ext_base", "ext_dir_lo", "ext_dir_hi", "ext_costs", "ext_prov"):
            setattr(f, name, z[name])
    return f


def save_index(index, path):
    with open(path, "wb") as fh:
        fh.write(dumps(index))


def load_index(path):
    with open(path, "rb") as fh:
        return loads(fh.read())
