"""Forest hop labeling: per-partition inner trees over boundary cliques, a
boundary tree contracted partition by partition, and optional extended
labels that turn cross-partition queries into plain 2-hop lookups.

Tree ids in provenance: 0..P-1 are the inner trees, P is the boundary
tree, "ext" resolves extended label entries.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels as K
from .errors import InvalidValue
from .graph import Graph, require_connected
from .oracle import sky_search
from .partition import (Partition, nested_dissection, part_array, partition_graph,
                        quotient_graph)
from .pruning import FULL, PruningConfig, pack
from .skyline import PathSummary, SkylinePathSet, Stats, new_counters
from .tree import Arena, TDTree, assign_labels, contract, expand, tree_query_arrays

MODES = ("boundary", "extended")


def boundary_allpairs(g: Graph, part: Partition) -> dict:
    """Exact skylines between every boundary pair of one partition, found
    on the full graph.  (lo, hi) global ids -> (costs, list of paths)."""
    B = [int(b) for b in part.boundary]
    out = {}
    for i, b in enumerate(B[:-1]):
        targets = B[i + 1:]
        st = sky_search(g, b, targets=targets)
        for c in targets:
            rows = st.labels.get(c, [])
            costs = np.array(rows, np.int64).reshape(-1, g.criteria_count)
            paths = [np.array(st.path(c, k), np.int64) for k in range(len(rows))]
            out[(b, c)] = (costs, paths)
    return out


@dataclass
class InnerInfo:
    tree: TDTree
    local: dict                # global -> local id
    chain: np.ndarray          # boundary local ids, bottom (b_1) to top (b_k)


class ForestIndex:
    kind = "forest"

    def __init__(self, g: Graph, parts, inner, btree, mode, config, part_order,
                 build_time=0.0):
        self.graph = g
        self.parts = parts
        self.inner = inner
        self.btree = btree
        self.mode = mode
        self.config = config
        self.part_order = part_order
        self.build_time = build_time
        self._index()
        self.ext_dir_lo = self.ext_dir_hi = self.ext_costs = self.ext_prov = None
        self.ext_base = None

    # --- construction ----------------------------------------------------------

    @classmethod
    def build(cls, g: Graph, partitions: int = 2, mode: str = "extended", seed: int = 0,
              config: PruningConfig = FULL, part_order: str = "boundary-count", inherit: bool = True,
              parts=None) -> "ForestIndex":
        if mode not in MODES:
            raise InvalidValue(f"unknown label mode {mode!r}")
        if g.criteria_count < 2:
            raise InvalidValue("need a weight and at least one cost criterion")
        t0 = time.perf_counter()
        require_connected(g)
        if parts is None:
            parts = partition_graph(g, partitions, seed)
        P = len(parts)
        inner = []
        cliques = []
        for p in parts:
            cl = boundary_allpairs(g, p)
            cliques.append(cl)
            inner.append(build_inner_tree(g, p, cl, config, tid=p.id))
        btree = build_boundary_tree(g, parts, inner, cliques, config, part_order, inherit, tid=P)
        f = cls(g, parts, inner, btree, "boundary", config, part_order)
        if mode == "extended":
            extend_labels(f)
        f.build_time = time.perf_counter() - t0
        return f

    def _index(self):
        g = self.graph
        self.part_of = part_array(g, self.parts)
        self.local = np.full(g.num_vertices, -1, np.int64)
        self.is_boundary = np.zeros(g.num_vertices, bool)
        for p in self.parts:
            self.local[p.vertices] = np.arange(len(p.vertices))
            self.is_boundary[p.boundary] = True
        self.blocal = np.full(g.num_vertices, -1, np.int64)
        if self.btree is not None:
            self.blocal[self.btree.glob] = np.arange(self.btree.nv)
        # top of each partition's boundary chain (global id)
        self.top = np.full(len(self.parts), -1, np.int64)
        for p, info in zip(self.parts, self.inner):
            if len(info.chain):
                self.top[p.id] = info.tree.glob[info.chain[-1]]

    @property
    def registry(self):
        reg = {info.tree.tid: info.tree for info in self.inner}
        if self.btree is not None:
            reg[self.btree.tid] = self.btree
        reg["ext"] = self
        return reg

    @property
    def n(self):
        return self.graph.criteria_count

    # --- per-vertex helpers ---------------------------------------------------

    def boundary_ancestors(self, v) -> np.ndarray:
        """Inner-tree ancestors of v that are boundaries (global ids)."""
        info = self.inner[self.part_of[v]]
        t = info.tree
        a = t.ancestors(self.local[v])
        g = t.glob[a]
        return g[self.is_boundary[g]]

    def attach(self, v) -> int:
        """Lowest boundary ancestor (or v itself when v is a boundary)."""
        if self.is_boundary[v]:
            return int(v)
        ba = self.boundary_ancestors(v)
        t = self.inner[self.part_of[v]].tree
        return int(ba[np.argmax(t.depth[self.local[ba]])])

    def _inner_label(self, v, b):
        """Set and via maker for the inner label v -> boundary b (same part)."""
        info = self.inner[self.part_of[v]]
        t = info.tree
        d = int(t.depth[self.local[b]])
        lv = int(self.local[v])
        return t.label_set(lv, d), (lambda e, t=t, lv=lv, d=d: ("L", t.tid, lv, d, int(e)))

    def _ext_label(self, v, bd):
        r = self.ext_base[v] + bd
        lo, hi = self.ext_dir_lo[r], self.ext_dir_hi[r]
        return self.ext_costs[lo:hi], (lambda e, v=int(v), bd=int(bd): ("X", "ext", v, bd, int(e)))

    def _b_label(self, b, h):
        """B-tree label b -> B-ancestor-or-self h."""
        bt = self.btree
        lb, lh = int(self.blocal[b]), int(self.blocal[h])
        if lb == lh:
            z = np.zeros((1, self.n), np.int64)
            return z, (lambda e, b=int(b): ("Z", b))
        d = int(bt.depth[lh])
        return bt.label_set(lb, d), (lambda e, lb=lb, d=d: ("L", bt.tid, lb, d, int(e)))

    def _side_label(self, v, h):
        """Label from v to boundary hop h in extended mode."""
        if self.is_boundary[v]:
            return self._b_label(v, h)
        if self.part_of[h] == self.part_of[v]:
            return self._inner_label(v, h)
        return self._ext_label(v, int(self.btree.depth[self.blocal[h]]))

    def decompose(self, item):
        _, _, v, bd, e = item
        p = self.part_of[v]
        t = self.inner[p].tree
        r = self.ext_base[v] + bd
        k, i, j = (int(z) for z in self.ext_prov[self.ext_dir_lo[r] + e])
        lv = int(self.local[v])
        slot = t.cut_ptr[lv] + k
        u_loc = int(t.cut_v[slot])
        u = int(t.glob[u_loc])
        left = ("P", t.tid, lv, u_loc, int(t.cut_lo[slot]) + i)
        if self.is_boundary[u]:
            return [left, ("L", self.btree.tid, int(self.blocal[u]), bd, j)]
        return [left, ("X", "ext", u, bd, j)]

    # --- queries ----------------------------------------------------------------

    def _check(self, v):
        return self.graph.check_vertex(v)

    def query_skyline(self, s, t, config: Optional[PruningConfig] = None,
                      stats: Optional[Stats] = None) -> SkylinePathSet:
        s, t = self._check(s), self._check(t)
        c, vias = self._dispatch(s, t, config or self.config, None, stats)
        return SkylinePathSet(c, vias)

    def query_mcsp(self, s, t, constraints, config: Optional[PruningConfig] = None,
                   stats: Optional[Stats] = None) -> Optional[PathSummary]:
        s, t = self._check(s), self._check(t)
        C = np.asarray(constraints, np.int64)
        if C.shape != (self.n - 1,):
            raise InvalidValue("constraint count must be n - 1")
        vec, via = self._dispatch(s, t, config or self.config, C, stats)
        if vec is None:
            return None
        return PathSummary(tuple(int(x) for x in vec), via)

    def retrieve_path(self, result: PathSummary) -> list:
        return expand(result.via, self.registry)

    def _dispatch(self, s, t, cfg, C, stats):
        if s == t:
            z = np.zeros((1, self.n), np.int64)
            via = ("Z", int(s))
            if C is None:
                return z, [via]
            return (z[0], via) if np.all(C >= 0) else (None, None)
        ps, pt = self.part_of[s], self.part_of[t]
        bs, bt_ = self.is_boundary[s], self.is_boundary[t]
        if bs and bt_:
            return self._tree_query(self.btree, self.blocal, s, t, cfg, C, stats)
        if ps == pt:
            info = self.inner[ps]
            return self._tree_query(info.tree, self.local, s, t, cfg, C, stats)
        # normalise so that s is never the lone boundary endpoint
        if bs and not bt_:
            res = self._dispatch(t, s, cfg, C, stats)
            return _reverse(res, C)
        if self.mode == "extended":
            return self._two_hop(s, t, cfg, C, stats)
        if bt_:
            return self._four_hop(s, t, cfg, C, stats)
        return self._six_hop(s, t, cfg, C, stats)

    def _tree_query(self, tree, local, s, t, cfg, C, stats):
        return tree_query_arrays(tree, int(local[s]), int(local[t]), cfg, C, stats)

    def _two_hop(self, s, t, cfg, C, stats):
        bt = self.btree
        a, b = int(self.blocal[self.attach(s)]), int(self.blocal[self.attach(t)])
        z = bt.lca(a, b)
        hops = [int(bt.glob[z])] + [int(bt.glob[x]) for x in bt.cut(z)]
        left, right = [], []
        for h in hops:
            left.append(self._side_label(s, h))
            right.append(self._side_label(t, h))
        return _combine(left, right, cfg, C, stats, self.n)

    def _b_query(self, b, c, cfg, stats, cache):
        key = (b, c)
        if key not in cache:
            cache[key] = self._tree_query(self.btree, self.blocal, b, c, cfg, None, stats)
        return cache[key]

    def _four_hop(self, s, t, cfg, C, stats):
        """s inner, t a boundary of another partition."""
        cache = {}
        left, right = [], []
        for b in self.boundary_ancestors(s):
            b = int(b)
            left.append(self._inner_label(s, b))
            c, vias = self._b_query(b, t, cfg, stats, cache)
            right.append((c, (lambda e, vias=vias: vias[e])))
        return _combine(left, right, cfg, C, stats, self.n, right_reversed=False)

    def _six_hop(self, s, t, cfg, C, stats):
        """Both endpoints inner vertices of different partitions: compose
        hop cubes s -> b -> b' -> t, prune, then materialise s -> b' only
        for the surviving b'."""
        n = self.n
        cache = {}
        As = [int(b) for b in self.boundary_ancestors(s)]
        At = [int(b) for b in self.boundary_ancestors(t)]
        ls = [self._inner_label(s, b) for b in As]
        lt = [self._inner_label(t, b) for b in At]
        ls_min = [x[0].min(0) for x in ls]
        ls_max = [x[0].max(0) for x in ls]
        cubes = []
        for k, bp in enumerate(At):
            infs, sups, keep = [], [], []
            for a, b in enumerate(As):
                c, _ = self._b_query(b, bp, cfg, stats, cache)
                infs.append(ls_min[a] + c.min(0))
                sups.append(ls_max[a] + c.max(0))
            inf = np.array(infs, np.int64)
            sup = np.array(sups, np.int64)
            alive = np.ones(len(As), np.bool_)
            if cfg.ncube:
                cnt = new_counters()
                K.prune_cubes(inf, sup, alive, cnt)
                if stats is not None:
                    stats.add(cnt)
            ci = inf[alive].min(0) + lt[k][0].min(0)
            cs = sup[alive].max(0) + lt[k][0].max(0)
            cubes.append((ci, cs, np.flatnonzero(alive)))
        inf = np.array([c[0] for c in cubes], np.int64)
        sup = np.array([c[1] for c in cubes], np.int64)
        alive = np.ones(len(At), np.bool_)
        cnt = new_counters()
        if C is not None and cfg.constraint:
            for k in range(len(At)):
                if np.any(inf[k, 1:] > C):
                    alive[k] = False
                    cnt[K.C_PRUNED] += 1
        if C is None and cfg.ncube:
            K.prune_cubes(inf, sup, alive, cnt)
            order = K.cube_order(inf, sup, alive)
        else:
            live = np.flatnonzero(alive)
            order = live[np.lexsort(inf[live].T[::-1])] if len(live) else live

        def materialise(k):
            bp = At[k]
            hops_l, hops_r = [], []
            for a in cubes[k][2]:
                c, vias = self._b_query(As[a], bp, cfg, stats, cache)
                hops_l.append(ls[a])
                hops_r.append((c, (lambda e, vias=vias: vias[e])))
            return _combine(hops_l, hops_r, cfg, None, stats, n, right_reversed=False)

        result_c = np.empty((0, n), np.int64)
        result_v = []
        best, best_via = None, None
        run_sup = None
        for k in order:
            k = int(k)
            if C is None:
                if cfg.ncube and run_sup is not None and K.vec_dominates(run_sup, inf[k]):
                    cnt[K.C_PRUNED] += 1
                    continue
            elif best is not None and cfg.constraint and K.vec_lex_le(best, inf[k]):
                cnt[K.C_PRUNED] += 1
                continue
            mid_c, mid_v = materialise(k)
            tl, tmk = lt[k]
            cnt[K.C_HOPS] += 1
            if C is None:
                c, ii, jj = K.concat_core(mid_c, tl, cfg.rank, 0, cnt)
                vias = [("C", mid_v[i], ("R", tmk(j))) for i, j in zip(ii, jj)]
                if not len(result_c):
                    result_c, result_v = c, vias
                else:
                    pa = np.arange(len(result_c), dtype=np.int64).reshape(-1, 1)
                    pb = np.arange(len(result_c), len(result_c) + len(c), dtype=np.int64).reshape(-1, 1)
                    allv = result_v + vias
                    result_c, p = K.merge_sets(result_c, pa, c, pb, cnt)
                    result_v = [allv[i] for i in p[:, 0]]
                run_sup = result_c.max(0)
            else:
                Lc, loff = pack([mid_c])
                Rc, roff = pack([tl])
                found, _, i, j, vec = K.best_core(Lc, loff, Rc, roff, C, cfg.rectangle, cfg.ncube,
                                                  cfg.constraint, cfg.rank, cnt)
                if found and (best is None or not K.vec_lex_le(best, vec)):
                    best = vec.copy()
                    best_via = ("C", mid_v[i], ("R", tmk(j)))
        if stats is not None:
            stats.add(cnt)
        if C is None:
            return result_c, result_v
        return best, best_via

    def stats(self) -> dict:
        inner_bytes = sum(i.tree.nbytes() for i in self.inner)
        b_bytes = self.btree.nbytes() if self.btree is not None else 0
        ext = 0
        if self.ext_costs is not None:
            ext = sum(a.nbytes for a in (self.ext_costs, self.ext_prov, self.ext_dir_lo,
                                         self.ext_dir_hi, self.ext_base))
        return {"kind": self.kind, "mode": self.mode, "partitions": len(self.parts),
                "boundaries": int(self.is_boundary.sum()),
                "inner_height": max(i.tree.height for i in self.inner),
                "inner_width": max(i.tree.width for i in self.inner),
                "boundary_height": self.btree.height if self.btree is not None else 0,
                "boundary_width": self.btree.width if self.btree is not None else 0,
                "label_entries": sum(i.tree.label_entries() for i in self.inner)
                + (self.btree.label_entries() if self.btree is not None else 0)
                + (len(self.ext_costs) if self.ext_costs is not None else 0),
                "bytes": inner_bytes + b_bytes + ext, "build_time": self.build_time}


def _reverse(res, C):
    if C is not None:
        vec, via = res
        return (vec, ("R", via)) if vec is not None else res
    c, vias = res
    return c, [("R", v) for v in vias]


def _combine(left, right, cfg, C, stats, n, right_reversed=True):
    """Multi-hop over explicit (set, via maker) pairs.  Right sets run from
    the far endpoint to the hop unless ``right_reversed`` is False."""
    Lc, loff = pack([x[0] for x in left])
    Rc, roff = pack([x[0] for x in right])
    cnt = new_counters()

    def mk(h, i, j):
        r = right[h][1](int(j))
        return ("C", left[h][1](int(i)), ("R", r) if right_reversed else r)
    if C is None:
        c, p = K.multi_hop_core(Lc, loff, Rc, roff, cfg.rectangle, cfg.ncube, cfg.rank, cnt)
        if stats is not None:
            stats.add(cnt)
        return c, [mk(*row) for row in p]
    found, h, i, j, vec = K.best_core(Lc, loff, Rc, roff, C, cfg.rectangle, cfg.ncube,
                                      cfg.constraint, cfg.rank, cnt)
    if stats is not None:
        stats.add(cnt)
    if not found:
        return None, None
    return vec, mk(h, i, j)


def build_inner_tree(g: Graph, part: Partition, clique: dict, config: PruningConfig = FULL,
                     tid: int = 0) -> InnerInfo:
    vs = part.vertices
    local = {int(v): k for k, v in enumerate(vs)}
    pairs = {}
    for v in vs:
        a, b = g.indptr[v], g.indptr[v + 1]
        for w, c in zip(g.nbr[a:b], g.ncost[a:b]):
            w = int(w)
            if w in local and v < w:
                pairs[(local[int(v)], local[w])] = (c.reshape(1, -1).copy(),
                                                    np.array([[-1, 0, 0]], np.int64))
    paths = []
    for (b, c), (costs, plist) in clique.items():
        prov = np.empty((len(costs), 3), np.int64)
        prov[:, 0] = -2
        prov[:, 1] = np.arange(len(paths), len(paths) + len(costs))
        prov[:, 2] = 0
        paths.extend(plist)
        pairs[(local[b], local[c])] = (costs, prov)
    post = np.zeros(len(vs), bool)
    post[[local[int(b)] for b in part.boundary]] = True
    t = contract(len(vs), g.criteria_count, pairs, glob=vs, postponed=post, paths=paths, tid=tid)
    assign_labels(t, config, chain=post)
    chain = np.array([v for v in t.seq if post[v]], np.int64)
    return InnerInfo(t, local, chain)


def partition_order(parts, inner, g: Graph, how: str = "boundary-count") -> list:
    if how == "nested":
        return nested_dissection(quotient_graph(g, parts))
    if how == "boundary-count":
        return sorted(range(len(parts)), key=lambda p: (len(parts[p].boundary), p))
    raise InvalidValue(f"unknown partition order {how!r}")


def build_boundary_tree(g: Graph, parts, inner, cliques, config: PruningConfig = FULL,
                        how: str = "boundary-count", inherit: bool = True, tid: int = 0) -> Optional[TDTree]:
    allb = np.sort(np.concatenate([p.boundary for p in parts]))
    if len(allb) == 0:
        return None
    bl = {int(b): k for k, b in enumerate(allb)}
    part = part_array(g, parts)
    pairs = {}
    for b in allb:
        a, e = g.indptr[b], g.indptr[b + 1]
        for w, c in zip(g.nbr[a:e], g.ncost[a:e]):
            w = int(w)
            if part[w] != part[b] and b < w:
                pairs[(bl[int(b)], bl[w])] = (c.reshape(1, -1).copy(), np.array([[-1, 0, 0]], np.int64))
    paths = []
    for cl in cliques:
        for (b, c), (costs, plist) in cl.items():
            prov = np.empty((len(costs), 3), np.int64)
            prov[:, 0] = -2
            prov[:, 1] = np.arange(len(paths), len(paths) + len(costs))
            prov[:, 2] = 0
            paths.extend(plist)
            pairs[(bl[b], bl[c])] = (costs, prov)
    order = []
    for p in partition_order(parts, inner, g, how):
        info = inner[p]
        order.extend(bl[int(info.tree.glob[v])] for v in info.chain)
    bpart = part[allb]
    skip = (lambda u, w: bpart[u] == bpart[w]) if inherit else None
    t = contract(len(allb), g.criteria_count, pairs, glob=allb, fixed_order=order,
                 skip_pair=skip, paths=paths, tid=tid)
    assign_labels(t, config)
    return t


def extend_labels(f: ForestIndex) -> ForestIndex:
    """Push boundary-tree labels down: every inner vertex of a partition
    gets a label to each boundary-tree ancestor of the partition's top
    boundary, computed over its inner cut."""
    g = f.graph
    bt = f.btree
    nv = g.num_vertices
    cfg = f.config
    need = np.zeros(nv, np.int64)
    for p in f.parts:
        if f.top[p.id] < 0:
            continue
        Dk = int(bt.depth[f.blocal[f.top[p.id]]])
        inner_v = p.vertices[~f.is_boundary[p.vertices]]
        need[inner_v] = Dk
    base_all = np.zeros(nv + 1, np.int64)
    np.cumsum(need, out=base_all[1:])
    base = base_all[:-1].copy()
    dir_lo = np.zeros(base_all[-1], np.int64)
    dir_hi = np.zeros(base_all[-1], np.int64)
    arena = Arena(g.criteria_count, max(1024, int(base_all[-1]) * 2))
    cnt = new_counters()
    for p, info in zip(f.parts, f.inner):
        if f.top[p.id] < 0:
            continue
        Dk = int(bt.depth[f.blocal[f.top[p.id]]])
        if Dk == 0:
            continue
        t = info.tree
        for lv in t.seq[::-1]:
            v = int(t.glob[lv])
            if f.is_boundary[v]:
                continue
            a0, a1 = t.cut_ptr[lv], t.cut_ptr[lv + 1]
            U = t.glob[t.cut_v[a0:a1]]
            lo0 = t.cut_lo[a0]
            Lc = t.sc_costs[lo0:t.cut_hi[a1 - 1]]
            loff = np.append(t.cut_lo[a0:a1], t.cut_hi[a1 - 1]) - lo0
            dgrid = np.arange(Dk)[:, None]
            isb = f.is_boundary[U]
            brow = bt.dir_ptr[np.maximum(f.blocal[U], 0)][None, :] + dgrid
            erow = base[U][None, :] + dgrid
            rsel = np.where(isb[None, :], 1, 0).repeat(Dk, 0)
            brow = np.minimum(brow, len(bt.dir_lo) - 1)
            erow = np.clip(erow, 0, max(len(dir_lo) - 1, 0))
            rlo = np.where(isb[None, :], bt.dir_lo[brow], dir_lo[erow])
            rhi = np.where(isb[None, :], bt.dir_hi[brow], dir_hi[erow])
            c, pr, off = K.multi_target(Lc, loff, arena.costs, bt.lab_costs, rsel, rlo, rhi,
                                        cfg.rectangle, cfg.ncube, cfg.rank, cnt)
            start = arena.append(c, pr)
            dir_lo[base[v]:base[v] + Dk] = start + off[:-1]
            dir_hi[base[v]:base[v] + Dk] = start + off[1:]
    arena.trim()
    f.ext_base = base
    f.ext_dir_lo, f.ext_dir_hi = dir_lo, dir_hi
    f.ext_costs, f.ext_prov = arena.costs, arena.prov
    f.mode = "extended"
    return f


def forest_query(forest: ForestIndex, s, t, constraints=None):
    if constraints is None:
        return forest.query_skyline(s, t)
    return forest.query_mcsp(s, t, constraints)
