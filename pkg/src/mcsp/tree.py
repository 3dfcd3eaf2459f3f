"""Tree decomposition with skyline shortcuts and top-down 2-hop labels.

Vertices are contracted in minimum-degree order.  Contracting v adds, for
every pair of its remaining neighbours, the skyline of the detours through
v.  Each contracted vertex keeps its neighbour set (the cut) together with
the final shortcut sets; the cut member contracted next becomes its tree
parent.  Labels are then filled in from the root down: the label of v to
an ancestor a is a multi-hop skyline over the cut of v.

Storage is flat.  Shortcut sets live in one arena addressed by slots, and
labels live in a second arena addressed by a directory with one row per
(vertex, ancestor depth).  A directory row may point into either arena:
vertices whose cut equals their ancestor set (the boundary chain of a
partition) reuse their shortcut sets as labels.

Provenance rows:
    shortcut entry (x, i, j): x = -1 original edge, x = -2 explicit path i,
        otherwise lo -> x -> hi through entry i of x's slot for lo and
        entry j of x's slot for hi (lo < hi are the pair's local ids)
    label entry (k, i, j): hop u = k-th cut member of v, entry i of that
        slot, then entry j of the hop's label set (j = -1: u is the target)
"""
from __future__ import annotations

import heapq
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import kernels as K
from .errors import InvalidProvenance, InvalidValue, InvalidVertex
from .graph import Graph
from .pruning import FULL, PruningConfig, pack
from .skyline import PathSummary, SkylinePathSet, Stats, new_counters

ARENA_LAB = 0
ARENA_SC = 1


class Arena:
    """Growable pair of (rows, n) cost and (rows, 3) provenance buffers."""

    def __init__(self, n: int, cap: int = 1024):
        self.costs = np.empty((cap, n), np.int64)
        self.prov = np.empty((cap, 3), np.int64)
        self.size = 0

    def append(self, c, p) -> int:
        k = len(c)
        start = self.size
        if start + k > len(self.costs):
            cap = max(2 * len(self.costs), start + k)
            nc = np.empty((cap, self.costs.shape[1]), np.int64)
            nc[:start] = self.costs[:start]
            npv = np.empty((cap, 3), np.int64)
            npv[:start] = self.prov[:start]
            self.costs, self.prov = nc, npv
        self.costs[start:start + k] = c
        self.prov[start:start + k] = p
        self.size += k
        return start

    def trim(self):
        self.costs = self.costs[: self.size].copy()
        self.prov = self.prov[: self.size].copy()


def edge_pairs(g: Graph) -> dict:
    """Original edges as contraction input: (lo, hi) -> (costs, prov)."""
    edges, costs = g.edges()
    out = {}
    for (u, v), c in zip(edges.tolist(), costs):
        out[(u, v)] = (c.reshape(1, -1).copy(), np.array([[-1, 0, 0]], np.int64))
    return out


def min_degree_order(g: Graph) -> list:
    """Elimination order by current minimum degree, ties to the smallest id."""
    nb = [set(map(int, g.nbr[g.indptr[v]:g.indptr[v + 1]])) for v in range(g.num_vertices)]
    return _elimination(nb)


def _elimination(nb, postponed=None) -> list:
    nv = len(nb)
    done = np.zeros(nv, bool)
    post = np.zeros(nv, bool) if postponed is None else np.asarray(postponed, bool)
    heap = [(len(nb[v]), v) for v in range(nv) if not post[v]]
    heapq.heapify(heap)
    seq = []
    phase2 = False
    while len(seq) < nv:
        if not heap:
            if phase2:
                raise RuntimeError("elimination stalled")
            phase2 = True
            heap = [(len(nb[v]), v) for v in range(nv) if not done[v]]
            heapq.heapify(heap)
            continue
        d, v = heapq.heappop(heap)
        if done[v] or d != len(nb[v]):
            continue
        done[v] = True
        seq.append(v)
        ws = nb[v]
        for w in ws:
            nb[w].discard(v)
        for w in ws:
            nb[w] |= ws - {w}
        for w in ws:
            if phase2 or not post[w]:
                heapq.heappush(heap, (len(nb[w]), w))
        nb[v] = set()
    return seq


@dataclass
class TDTree:
    nv: int
    n: int
    glob: np.ndarray                 # local -> global vertex id
    seq: np.ndarray                  # contraction sequence
    order: np.ndarray                # position of each vertex in seq
    parent: np.ndarray
    depth: np.ndarray
    cut_ptr: np.ndarray
    cut_v: np.ndarray
    cut_lo: np.ndarray
    cut_hi: np.ndarray
    sc_costs: np.ndarray
    sc_prov: np.ndarray
    paths: list = field(default_factory=list)
    dir_ptr: Optional[np.ndarray] = None
    dir_arena: Optional[np.ndarray] = None
    dir_lo: Optional[np.ndarray] = None
    dir_hi: Optional[np.ndarray] = None
    anc: Optional[np.ndarray] = None
    lab_costs: Optional[np.ndarray] = None
    lab_prov: Optional[np.ndarray] = None
    up: Optional[np.ndarray] = None
    build_stats: Stats = field(default_factory=Stats)
    tid: int = 0

    # --- structure ---------------------------------------------------------

    @property
    def root(self) -> int:
        return int(self.seq[-1])

    def cut(self, v) -> np.ndarray:
        return self.cut_v[self.cut_ptr[v]:self.cut_ptr[v + 1]]

    def slot(self, v, w) -> int:
        a, b = self.cut_ptr[v], self.cut_ptr[v + 1]
        k = a + int(np.searchsorted(self.cut_v[a:b], w))
        if k >= b or self.cut_v[k] != w:
            raise InvalidProvenance(f"{w} is not in the cut of {v}")
        return k

    def shortcut_set(self, v, w) -> np.ndarray:
        k = self.slot(v, w)
        return self.sc_costs[self.cut_lo[k]:self.cut_hi[k]]

    def ancestors(self, v) -> np.ndarray:
        return self.anc[self.dir_ptr[v]:self.dir_ptr[v] + self.depth[v]]

    def ancestor_at(self, v, d) -> int:
        return int(self.anc[self.dir_ptr[v] + d])

    def is_ancestor(self, a, v) -> bool:
        da = self.depth[a]
        return da < self.depth[v] and self.anc[self.dir_ptr[v] + da] == a

    @property
    def width(self) -> int:
        return int(np.diff(self.cut_ptr).max()) if self.nv else 0

    @property
    def height(self) -> int:
        return int(self.depth.max()) + 1 if self.nv else 0

    def lca(self, u, v) -> int:
        if u == v:
            return u
        du, dv = self.depth[u], self.depth[v]
        if du > dv:
            u, v, du, dv = v, u, dv, du
        if self.is_ancestor(u, v):
            return u
        if dv > du:
            v = int(self.anc[self.dir_ptr[v] + du])
        up = self.up
        for k in range(up.shape[0] - 1, -1, -1):
            a, b = up[k, u], up[k, v]
            if a != b:
                u, v = a, b
        return int(self.parent[u])

    def _build_lifting(self):
        nv = self.nv
        levels = max(1, int(self.height).bit_length())
        up = np.empty((levels, nv), np.int64)
        p = self.parent.copy()
        p[p < 0] = np.arange(nv)[p < 0]
        up[0] = p
        for k in range(1, levels):
            up[k] = up[k - 1][up[k - 1]]
        self.up = up

    # --- labels --------------------------------------------------------------

    def label_rows(self, v, d):
        r = self.dir_ptr[v] + d
        return int(self.dir_arena[r]), int(self.dir_lo[r]), int(self.dir_hi[r])

    def label_set(self, v, d) -> np.ndarray:
        r = self.dir_ptr[v] + d
        src = self.lab_costs if self.dir_arena[r] == ARENA_LAB else self.sc_costs
        return src[self.dir_lo[r]:self.dir_hi[r]]

    def label_entries(self) -> int:
        return int((self.dir_hi - self.dir_lo)[self.dir_arena == ARENA_LAB].sum())

    def nbytes(self) -> int:
        arrs = [self.seq, self.order, self.parent, self.depth, self.cut_ptr, self.cut_v, self.cut_lo,
                self.cut_hi, self.sc_costs, self.sc_prov, self.dir_ptr, self.dir_arena, self.dir_lo,
                self.dir_hi, self.anc, self.lab_costs, self.lab_prov]
        return int(sum(a.nbytes for a in arrs if a is not None)) + sum(p.nbytes for p in self.paths)

    # --- path expansion ------------------------------------------------------

    def G(self, v) -> int:
        return int(self.glob[v])

    def decompose(self, item):
        kind = item[0]
        if kind == "P":
            _, _, p, q, row = item
            x, i, j = (int(z) for z in self.sc_prov[row])
            if x == -1:
                return [("E", self.G(p), self.G(q))]
            if x == -2:
                path = self.paths[i]
                return [("XP", path if p < q else path[::-1])]
            lo, hi = (p, q) if p < q else (q, p)
            rl = int(self.cut_lo[self.slot(x, lo)]) + i
            rh = int(self.cut_lo[self.slot(x, hi)]) + j
            if p == lo:
                return [("P", self.tid, lo, x, rl), ("P", self.tid, x, hi, rh)]
            return [("P", self.tid, hi, x, rh), ("P", self.tid, x, lo, rl)]
        if kind == "L":
            _, _, v, d, e = item
            r = self.dir_ptr[v] + d
            a = int(self.anc[r])
            if e < 0 or e >= self.dir_hi[r] - self.dir_lo[r]:
                raise InvalidProvenance("label entry out of range")
            if self.dir_arena[r] == ARENA_SC:
                return [("P", self.tid, v, a, int(self.dir_lo[r]) + e)]
            k, i, j = (int(z) for z in self.lab_prov[self.dir_lo[r] + e])
            slot = self.cut_ptr[v] + k
            u = int(self.cut_v[slot])
            left = ("P", self.tid, v, u, int(self.cut_lo[slot]) + i)
            if j == -1:
                return [left]
            if self.depth[u] > d:
                return [left, ("L", self.tid, u, d, j)]
            return [left, ("R", ("L", self.tid, a, int(self.depth[u]), j))]
        raise InvalidProvenance(f"unknown item {kind!r}")


def expand(via, registry, start=None) -> list:
    """Unpack a provenance tree into a global vertex sequence.

    ``registry`` maps tree ids to objects with a ``decompose`` method.
    Leaves are ("E", a, b) original edges and ("XP", path) explicit paths;
    ("R", x) reverses x, ("C", a, b) is a followed by b and ("Z", v) is
    the empty path at v.
    """
    segs = []
    stack = [(via, False)]
    while stack:
        item, rev = stack.pop()
        if not isinstance(item, tuple) or not item:
            raise InvalidProvenance(f"bad provenance item {item!r}")
        kind = item[0]
        if kind == "E":
            segs.append([item[2], item[1]] if rev else [item[1], item[2]])
            continue
        if kind == "XP":
            p = [int(x) for x in item[1]]
            segs.append(p[::-1] if rev else p)
            continue
        if kind == "Z":
            if start is None:
                start = int(item[1])
            continue
        if kind == "R":
            stack.append((item[1], not rev))
            continue
        if kind == "C":
            kids = list(item[1:])
        else:
            try:
                tree = registry[item[1]]
            except (KeyError, IndexError, TypeError):
                raise InvalidProvenance(f"unknown tree in {item!r}") from None
            kids = tree.decompose(item)
        if rev:
            kids = kids[::-1]
        for kid in reversed(kids):
            stack.append((kid, rev))
    if not segs:
        if start is None:
            raise InvalidProvenance("empty provenance")
        return [start]
    out = list(segs[0])
    for s in segs[1:]:
        if s[0] != out[-1]:
            raise InvalidProvenance("provenance segments do not connect")
        out.extend(s[1:])
    return out


def contract(nv: int, n: int, pairs: dict, glob=None, postponed=None, fixed_order=None,
             skip_pair: Optional[Callable] = None, paths=None, tid: int = 0) -> TDTree:
    """Eliminate every vertex, adding skyline shortcuts between the
    remaining neighbours.  ``pairs`` maps (lo, hi) -> (costs, prov)."""
    stats = Stats()
    cnt = new_counters()
    nb = [set() for _ in range(nv)]
    E = {}
    for (u, w), cp in pairs.items():
        key = (u, w) if u < w else (w, u)
        E[key] = cp
        nb[u].add(w)
        nb[w].add(u)
    sc = Arena(n, max(1024, 4 * len(E)))
    slots = [None] * nv
    seq = []
    done = np.zeros(nv, bool)
    post = np.zeros(nv, bool) if postponed is None else np.asarray(postponed, bool)

    def pick():
        if fixed_order is not None:
            for v in fixed_order:
                yield int(v)
            return
        heap = [(len(nb[v]), v) for v in range(nv) if not post[v]]
        heapq.heapify(heap)
        phase2 = not heap
        if phase2:
            heap = [(len(nb[v]), v) for v in range(nv)]
            heapq.heapify(heap)
        while True:
            if not heap:
                if phase2:
                    return
                phase2 = True
                heap = [(len(nb[v]), v) for v in range(nv) if not done[v]]
                heapq.heapify(heap)
                continue
            d, v = heapq.heappop(heap)
            if done[v] or d != len(nb[v]):
                continue
            yield v
            for w in touched:
                if phase2 or not post[w]:
                    heapq.heappush(heap, (len(nb[w]), w))

    touched = []
    for v in pick():
        if done[v]:
            raise ValueError(f"vertex {v} contracted twice")
        done[v] = True
        seq.append(v)
        ws = sorted(nb[v])
        rec = []
        sets = []
        for w in ws:
            c, p = E.pop((v, w) if v < w else (w, v))
            lo = sc.append(c, p)
            rec.append((w, lo, lo + len(c)))
            sets.append(c)
        slots[v] = rec
        for a in range(len(ws)):
            u = ws[a]
            for b in range(a + 1, len(ws)):
                w = ws[b]
                key = (u, w)
                old = E.get(key)
                if old is not None and skip_pair is not None and skip_pair(u, w):
                    continue
                c, ii, jj = K.concat_core(sets[a], sets[b], True, 0, cnt)
                p = np.empty((len(c), 3), np.int64)
                p[:, 0] = v
                p[:, 1] = ii
                p[:, 2] = jj
                if old is None:
                    E[key] = (c, p)
                    nb[u].add(w)
                    nb[w].add(u)
                else:
                    E[key] = K.merge_sets(old[0], old[1], c, p, cnt)
        for w in ws:
            nb[w].discard(v)
        nb[v] = set()
        touched = ws
    if len(seq) != nv:
        raise ValueError("contraction did not cover every vertex")
    stats.add(cnt)
    sc.trim()

    seq = np.array(seq, np.int64)
    order = np.empty(nv, np.int64)
    order[seq] = np.arange(nv)
    cut_ptr = np.zeros(nv + 1, np.int64)
    for v in range(nv):
        cut_ptr[v + 1] = cut_ptr[v] + len(slots[v])
    cut_v = np.empty(cut_ptr[-1], np.int64)
    cut_lo = np.empty(cut_ptr[-1], np.int64)
    cut_hi = np.empty(cut_ptr[-1], np.int64)
    parent = np.full(nv, -1, np.int64)
    for v in range(nv):
        a = cut_ptr[v]
        for k, (w, lo, hi) in enumerate(slots[v]):
            cut_v[a + k] = w
            cut_lo[a + k] = lo
            cut_hi[a + k] = hi
        if slots[v]:
            ws = cut_v[a:cut_ptr[v + 1]]
            parent[v] = ws[np.argmin(order[ws])]
    roots = np.flatnonzero(parent < 0)
    if len(roots) != 1:
        raise ValueError(f"decomposition has {len(roots)} roots; graph must be connected")
    depth = np.zeros(nv, np.int64)
    for v in seq[::-1]:
        if parent[v] >= 0:
            depth[v] = depth[parent[v]] + 1
    t = TDTree(nv, n, np.arange(nv, dtype=np.int64) if glob is None else np.asarray(glob, np.int64),
               seq, order, parent, depth, cut_ptr, cut_v, cut_lo, cut_hi, sc.costs, sc.prov,
               list(paths or []), build_stats=stats, tid=tid)
    _ancestor_table(t)
    return t


def _ancestor_table(t: TDTree):
    dir_ptr = np.zeros(t.nv + 1, np.int64)
    np.cumsum(t.depth, out=dir_ptr[1:])
    anc = np.empty(dir_ptr[-1], np.int64)
    for v in t.seq[::-1]:
        p = t.parent[v]
        if p < 0:
            continue
        a = dir_ptr[v]
        dp = t.depth[p]
        anc[a:a + dp] = anc[dir_ptr[p]:dir_ptr[p] + dp]
        anc[a + dp] = p
    t.dir_ptr = dir_ptr
    t.anc = anc
    t._build_lifting()


def assign_labels(t: TDTree, config: PruningConfig = FULL, chain=None) -> TDTree:
    """Top-down label assignment.  ``chain`` marks vertices whose cut is
    exactly their ancestor set; their labels are their shortcut sets."""
    nrow = len(t.anc)
    dir_arena = np.zeros(nrow, np.int64)
    dir_lo = np.zeros(nrow, np.int64)
    dir_hi = np.zeros(nrow, np.int64)
    lab = Arena(t.n, max(1024, 2 * nrow))
    cnt = new_counters()
    chain = np.zeros(t.nv, bool) if chain is None else np.asarray(chain, bool)
    for v in t.seq[::-1]:
        D = int(t.depth[v])
        if D == 0:
            continue
        a0, a1 = t.cut_ptr[v], t.cut_ptr[v + 1]
        U = t.cut_v[a0:a1]
        base = t.dir_ptr[v]
        ancs = t.anc[base:base + D]
        if chain[v]:
            if len(U) != D or not np.array_equal(np.sort(U), np.sort(ancs)):
                raise ValueError(f"chain vertex {v}: cut differs from ancestors")
            k = np.argsort(t.depth[U])
            dir_arena[base:base + D] = ARENA_SC
            dir_lo[base:base + D] = t.cut_lo[a0:a1][k]
            dir_hi[base:base + D] = t.cut_hi[a0:a1][k]
            continue
        lo0 = t.cut_lo[a0]
        Lc = t.sc_costs[lo0:t.cut_hi[a1 - 1]]
        loff = np.append(t.cut_lo[a0:a1], t.cut_hi[a1 - 1]) - lo0
        du = t.depth[U]
        dgrid = np.arange(D)[:, None]
        rows = np.where(dgrid < du[None, :], t.dir_ptr[U][None, :] + dgrid,
                        t.dir_ptr[ancs][:, None] + du[None, :])
        np.minimum(rows, nrow - 1, out=rows)
        rsel = dir_arena[rows]
        rsel[dgrid == du[None, :]] = 2
        rlo = dir_lo[rows]
        rhi = dir_hi[rows]
        c, p, off = K.multi_target(Lc, loff, lab.costs, t.sc_costs, rsel, rlo, rhi,
                                   config.rectangle, config.ncube, config.rank, cnt)
        start = lab.append(c, p)
        dir_lo[base:base + D] = start + off[:-1]
        dir_hi[base:base + D] = start + off[1:]
    lab.trim()
    t.dir_arena, t.dir_lo, t.dir_hi = dir_arena, dir_lo, dir_hi
    t.lab_costs, t.lab_prov = lab.costs, lab.prov
    t.build_stats.add(cnt)
    return t


# --- queries over one tree ---------------------------------------------------

ZERO_ROW = np.zeros((1, 3), np.int64)


def tree_hops(t: TDTree, s: int, t_: int):
    """Hop plan for a pair of distinct vertices.

    Returns ("anc", lower, upper_depth, swapped) when one is an ancestor of
    the other, else ("lca", depths of the LCA bag)."""
    if t.is_ancestor(s, t_):
        return ("anc", t_, int(t.depth[s]), True)
    if t.is_ancestor(t_, s):
        return ("anc", s, int(t.depth[t_]), False)
    z = t.lca(s, t_)
    hs = np.concatenate([[z], t.cut(z)])
    return ("lca", t.depth[hs])


def tree_query_arrays(t: TDTree, s: int, t_: int, config: PruningConfig = FULL,
                      constraints=None, stats: Optional[Stats] = None):
    """Core query on local ids.  Skyline mode returns (costs, vias);
    constrained mode returns (vec or None, via)."""
    n = t.n
    if s == t_:
        z = np.zeros((1, n), np.int64)
        via = ("Z", t.G(s))
        if constraints is None:
            return z, [via]
        if np.any(np.asarray(constraints) < 0):
            return None, None
        return (z[0], via)
    plan = tree_hops(t, s, t_)
    if plan[0] == "anc":
        _, low, ud, swapped = plan
        sky = t.label_set(low, ud)

        def mk(e):
            item = ("L", t.tid, low, ud, int(e))
            return ("R", item) if swapped else item
        if constraints is None:
            return sky.copy(), [mk(e) for e in range(len(sky))]
        C = np.asarray(constraints, np.int64)
        ok = np.flatnonzero(np.all(sky[:, 1:] <= C, axis=1))
        if not len(ok):
            return None, None
        return sky[ok[0]].copy(), mk(ok[0])
    depths = plan[1]
    Lc, loff = pack([t.label_set(s, d) for d in depths])
    Rc, roff = pack([t.label_set(t_, d) for d in depths])
    cnt = new_counters()

    def mk(h, i, j):
        d = int(depths[h])
        return ("C", ("L", t.tid, s, d, int(i)), ("R", ("L", t.tid, t_, d, int(j))))
    if constraints is None:
        c, p = K.multi_hop_core(Lc, loff, Rc, roff, config.rectangle, config.ncube, config.rank, cnt)
        if stats is not None:
            stats.add(cnt)
        return c, [mk(*row) for row in p]
    C = np.asarray(constraints, np.int64)
    found, h, i, j, vec = K.best_core(Lc, loff, Rc, roff, C, config.rectangle, config.ncube,
                                      config.constraint, config.rank, cnt)
    if stats is not None:
        stats.add(cnt)
    if not found:
        return None, None
    return vec, mk(h, i, j)


class TreeIndex:
    """2-hop skyline label index over a whole graph."""

    kind = "tree"

    def __init__(self, g: Graph, tree: TDTree, config: PruningConfig = FULL, build_time: float = 0.0):
        self.graph = g
        self.tree = tree
        self.config = config
        self.build_time = build_time

    @classmethod
    def build(cls, g: Graph, config: PruningConfig = FULL) -> "TreeIndex":
        if g.criteria_count < 2:
            raise InvalidValue("need a weight and at least one cost criterion")
        t0 = time.perf_counter()
        tree = contract_and_build_tree(g)
        assign_labels(tree, config)
        return cls(g, tree, config, time.perf_counter() - t0)

    @property
    def n(self):
        return self.graph.criteria_count

    @property
    def registry(self):
        return {self.tree.tid: self.tree}

    def _check(self, v):
        return self.graph.check_vertex(v)

    def query_skyline(self, s, t, config: Optional[PruningConfig] = None,
                      stats: Optional[Stats] = None) -> SkylinePathSet:
        s, t = self._check(s), self._check(t)
        c, vias = tree_query_arrays(self.tree, s, t, config or self.config, None, stats)
        return SkylinePathSet(c, vias)

    def query_mcsp(self, s, t, constraints, config: Optional[PruningConfig] = None,
                   stats: Optional[Stats] = None) -> Optional[PathSummary]:
        s, t = self._check(s), self._check(t)
        constraints = np.asarray(constraints, np.int64)
        if constraints.shape != (self.n - 1,):
            raise InvalidValue("constraint count must be n - 1")
        vec, via = tree_query_arrays(self.tree, s, t, config or self.config, constraints, stats)
        if vec is None:
            return None
        return PathSummary(tuple(int(x) for x in vec), via)

    def retrieve_path(self, result: PathSummary) -> list:
        return expand(result.via, self.registry)

    def stats(self) -> dict:
        t = self.tree
        return {"kind": self.kind, "vertices": t.nv, "width": t.width - 0, "height": t.height,
                "label_sets": int(len(t.anc)), "label_entries": t.label_entries(),
                "shortcut_entries": int(len(t.sc_costs)), "bytes": t.nbytes(),
                "build_time": self.build_time}


def contract_and_build_tree(g: Graph) -> TDTree:
    return contract(g.num_vertices, g.criteria_count, edge_pairs(g))


def lca(tree: TDTree, u: int, v: int) -> int:
    return tree.lca(u, v)


def query_skyline(index, s, t):
    return index.query_skyline(s, t)


def query_mcsp(index, s, t, constraints):
    return index.query_mcsp(s, t, constraints)


def retrieve_path(index, result):
    return index.retrieve_path(result)


def check_decomposition(t: TDTree, edges) -> list:
    """Violations of the tree-decomposition properties, using bags
    X(v) = {v} + cut(v) and the given (u, w) edge list."""
    bad = []
    bag_of = [set([v]) | set(map(int, t.cut(v))) for v in range(t.nv)]
    for v in range(t.nv):
        for w in t.cut(v):
            if t.order[w] <= t.order[v]:
                bad.append(("order", v, int(w)))
            if w != t.parent[v] and not t.is_ancestor(int(w), v):
                bad.append(("cut-not-ancestor", v, int(w)))
    for u, w in edges:
        a, b = (u, w) if t.order[u] < t.order[w] else (w, u)
        if b not in bag_of[a]:
            bad.append(("edge", int(u), int(w)))
    # each vertex's bags form a connected subtree
    holders = [[] for _ in range(t.nv)]
    for v in range(t.nv):
        for x in bag_of[v]:
            holders[x].append(v)
    for x in range(t.nv):
        hs = set(holders[x])
        tops = [v for v in hs if t.parent[v] < 0 or t.parent[v] not in hs]
        if len(tops) != 1:
            bad.append(("subtree", x, len(tops)))
    return bad
