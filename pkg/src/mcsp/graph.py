"""Graph data model, DIMACS ingestion, cost synthesis and validation.

A graph is stored in CSR form.  Every undirected edge appears twice, once
per direction, with the same cost vector.  Cost vectors are int64 rows;
column 0 is the weight, the remaining columns are the extra costs.
"""
from __future__ import annotations

import io
from collections import defaultdict, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import EmptyGraph, InvalidValue, InvalidVertex, MismatchedEdgeSet


@dataclass(frozen=True, eq=False)
class Graph:
    indptr: np.ndarray
    nbr: np.ndarray
    ncost: np.ndarray
    merge_warnings: int = 0

    @property
    def num_vertices(self) -> int:
        return len(self.indptr) - 1

    @property
    def criteria_count(self) -> int:
        return self.ncost.shape[1]

    @property
    def edge_count(self) -> int:
        return len(self.nbr) // 2

    def neighbors(self, v: int):
        a, b = self.indptr[v], self.indptr[v + 1]
        return self.nbr[a:b], self.ncost[a:b]

    @cached_property
    def lists(self):
        """Plain-list CSR (indptr, nbr, cost tuples) for the Python searches."""
        return self.indptr.tolist(), self.nbr.tolist(), [tuple(c) for c in self.ncost.tolist()]

    @property
    def adjacency(self):
        out = []
        for v in range(self.num_vertices):
            ws, cs = self.neighbors(v)
            out.append([(int(w), tuple(int(x) for x in c)) for w, c in zip(ws, cs)])
        return out

    def edge_cost(self, u: int, v: int) -> Optional[np.ndarray]:
        ws, cs = self.neighbors(u)
        k = np.searchsorted(ws, v)
        if k < len(ws) and ws[k] == v:
            return cs[k]
        return None

    def edges(self):
        """(E,2) array of u < v pairs and the matching (E,n) cost rows."""
        src = np.repeat(np.arange(self.num_vertices), np.diff(self.indptr))
        keep = src < self.nbr
        return np.stack([src[keep], self.nbr[keep]], axis=1), self.ncost[keep]

    def check_vertex(self, v) -> int:
        if not isinstance(v, (int, np.integer)) or v < 0 or v >= self.num_vertices:
            raise InvalidVertex(f"unknown vertex {v!r}")
        return int(v)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.nbr, other.nbr)
            and np.array_equal(self.ncost, other.ncost)
        )

    def __hash__(self):
        return id(self)

    @classmethod
    def from_edges(cls, num_vertices: int, edges, costs, merge_warnings: int = 0) -> "Graph":
        """Build from an undirected edge list.  Self-loops are dropped and
        parallel edges collapse to their lexicographically smallest vector."""
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        costs = np.asarray(costs, dtype=np.int64)
        if costs.ndim == 1:
            costs = costs.reshape(len(edges), -1)
        if len(edges) and (edges.min() < 0 or edges.max() >= num_vertices):
            raise InvalidValue("edge endpoint out of range")
        if (costs < 0).any():
            raise InvalidValue("negative criterion value")
        n = costs.shape[1]
        lo = np.minimum(edges[:, 0], edges[:, 1])
        hi = np.maximum(edges[:, 0], edges[:, 1])
        keep = lo != hi
        lo, hi, costs = lo[keep], hi[keep], costs[keep]
        if len(lo):
            keys = [costs[:, k] for k in range(n - 1, -1, -1)] + [hi, lo]
            order = np.lexsort(keys)
            lo, hi, costs = lo[order], hi[order], costs[order]
            first = np.ones(len(lo), dtype=bool)
            first[1:] = (lo[1:] != lo[:-1]) | (hi[1:] != hi[:-1])
            lo, hi, costs = lo[first], hi[first], costs[first]
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        cst = np.concatenate([costs, costs]).reshape(-1, n)
        order = np.lexsort((dst, src))
        src, dst, cst = src[order], dst[order], cst[order]
        indptr = np.zeros(num_vertices + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        indptr = np.cumsum(indptr)
        return cls(indptr, dst.astype(np.int64), np.ascontiguousarray(cst, dtype=np.int64), merge_warnings)


@dataclass(frozen=True)
class QuerySpec:
    s: int
    t: int
    constraints: Optional[tuple] = None


@dataclass
class ValidationReport:
    components: int
    symmetric: bool
    criteria_count: int
    violations: list = field(default_factory=list)
    self_loops: int = 0

    @property
    def ok(self) -> bool:
        return self.components == 1 and self.symmetric and not self.self_loops


# --- DIMACS ---------------------------------------------------------------

def _lines(src):
    if isinstance(src, (str, bytes)):
        src = io.StringIO(src if isinstance(src, str) else src.decode())
    for raw in src:
        if isinstance(raw, bytes):
            raw = raw.decode()
        s = raw.strip()
        if s and s[0] not in "c%#":
            yield s


def _parse_arcs(src):
    declared = None
    arcs = []
    for line in _lines(src):
        tok = line.split()
        if tok[0] == "p":
            if len(tok) < 4:
                raise InvalidValue(f"bad problem line: {line!r}")
            declared = int(tok[2])
        elif tok[0] == "a":
            if len(tok) != 4:
                raise InvalidValue(f"bad arc line: {line!r}")
            try:
                u, v, w = int(tok[1]), int(tok[2]), int(tok[3])
            except ValueError:
                raise InvalidValue(f"non-integer field: {line!r}") from None
            if w < 0:
                raise InvalidValue(f"negative value: {line!r}")
            arcs.append((u, v, w))
        else:
            raise InvalidValue(f"unknown line: {line!r}")
    return declared, arcs


def load_dimacs(weight_source, cost_sources: Sequence = ()) -> Graph:
    declared, arcs = _parse_arcs(weight_source)
    if not arcs:
        raise EmptyGraph("no edges")
    columns = [[w for _, _, w in arcs]]
    for ci, src in enumerate(cost_sources):
        _, carcs = _parse_arcs(src)
        pool = defaultdict(deque)
        for u, v, x in carcs:
            pool[(u, v)].append(x)
        col = []
        for u, v, _ in arcs:
            q = pool.get((u, v))
            if not q:
                raise MismatchedEdgeSet(f"cost source {ci} lacks arc {u}->{v}")
            col.append(q.popleft())
        extra = sum(len(q) for q in pool.values())
        if extra:
            raise MismatchedEdgeSet(f"cost source {ci} has {extra} arcs not in the weight source")
        columns.append(col)

    ids = sorted({u for u, _, _ in arcs} | {v for _, v, _ in arcs})
    if declared is not None and ids[0] >= 1 and ids[-1] <= declared:
        nv = declared
        remap = {i: i - 1 for i in ids}
    else:
        nv = len(ids)
        remap = {i: k for k, i in enumerate(ids)}

    vecs = np.array(columns, dtype=np.int64).T
    # per direction keep the lex-smallest of parallel arcs, then merge directions
    best = {}
    for (u, v, _), c in zip(arcs, vecs):
        key = (remap[u], remap[v])
        t = tuple(int(x) for x in c)
        if key not in best or t < best[key]:
            best[key] = t
    warnings = 0
    edges, costs = [], []
    for (u, v), c in best.items():
        if u == v:
            continue
        if (v, u) in best:
            if u > v:
                continue
            d = best[(v, u)]
            if d != c:
                warnings += 1
                c = tuple(min(x, y) for x, y in zip(c, d))
        edges.append((u, v))
        costs.append(c)
    if not edges:
        raise EmptyGraph("no edges after removing self-loops")
    return Graph.from_edges(nv, edges, costs, warnings)


def write_dimacs(g: Graph, weight_out, cost_outs: Sequence = ()):
    """Write both arc directions; reloading gives an identical Graph."""
    edges, costs = g.edges()
    outs = [weight_out] + list(cost_outs)
    if len(outs) != g.criteria_count:
        raise InvalidValue("need one stream per criterion")
    for k, out in enumerate(outs):
        out.write(f"p sp {g.num_vertices} {2 * len(edges)}\n")
        lines = []
        for (u, v), c in zip(edges, costs):
            lines.append(f"a {u + 1} {v + 1} {c[k]}\n")
            lines.append(f"a {v + 1} {u + 1} {c[k]}\n")
        out.write("".join(lines))


# --- synthesis ------------------------------------------------------------

def synthesize_costs(g: Graph, mode: str, count: int, seed: int) -> Graph:
    if count < 1:
        raise InvalidValue("count must be >= 1")
    if mode not in ("positive", "random", "negative"):
        raise InvalidValue(f"unknown mode {mode!r}")
    rng = np.random.default_rng(seed)
    edges, costs = g.edges()
    w = costs[:, 0]
    wmax = int(w.max()) if len(w) else 1
    cols = [costs]
    for _ in range(count):
        if mode == "random":
            c = rng.integers(1, max(wmax, 1), size=len(w), endpoint=True)
        else:
            u = rng.uniform(0.8, 1.2, size=len(w))
            base = w if mode == "positive" else (wmax + 1 - w)
            c = np.maximum(np.floor(base * u + 0.5), 1).astype(np.int64)
        cols.append(c.reshape(-1, 1))
    return Graph.from_edges(g.num_vertices, edges, np.hstack(cols), g.merge_warnings)


def parse_synth(spec: str):
    """'mode:count:seed' -> (mode, count, seed)."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise InvalidValue(f"bad synth spec {spec!r}")
    return parts[0], int(parts[1]), int(parts[2])


# --- validation -----------------------------------------------------------

def components(g: Graph) -> np.ndarray:
    comp = np.full(g.num_vertices, -1, dtype=np.int64)
    c = 0
    for s in range(g.num_vertices):
        if comp[s] >= 0:
            continue
        comp[s] = c
        stack = [s]
        while stack:
            v = stack.pop()
            for w in g.nbr[g.indptr[v]:g.indptr[v + 1]]:
                if comp[w] < 0:
                    comp[w] = c
                    stack.append(int(w))
        c += 1
    return comp


def validate_graph(g: Graph) -> ValidationReport:
    comp = components(g)
    ncomp = int(comp.max()) + 1 if len(comp) else 0
    arcs = {}
    loops = 0
    for v in range(g.num_vertices):
        ws, cs = g.neighbors(v)
        for w, c in zip(ws, cs):
            if w == v:
                loops += 1
            arcs[(v, int(w))] = tuple(int(x) for x in c)
    bad = []
    for (u, v), c in arcs.items():
        back = arcs.get((v, u))
        if back is None:
            bad.append((u, v, "missing reverse arc"))
        elif back != c and u < v:
            bad.append((u, v, "cost mismatch"))
    return ValidationReport(ncomp, not bad, g.criteria_count, bad, loops)


def require_connected(g: Graph):
    rep = validate_graph(g)
    if rep.components != 1:
        raise InvalidValue(f"graph has {rep.components} components, need 1")
    if not rep.symmetric:
        raise InvalidValue("graph adjacency is not symmetric")


# --- generators -----------------------------------------------------------

def grid_graph(rows: int, cols: int, n: int = 2, seed: int = 0, maxval: int = 50) -> Graph:
    rng = np.random.default_rng(seed)
    idx = np.arange(rows * cols).reshape(rows, cols)
    e = np.concatenate([
        np.stack([idx[:, :-1].ravel(), idx[:, 1:].ravel()], axis=1),
        np.stack([idx[:-1, :].ravel(), idx[1:, :].ravel()], axis=1),
    ])
    c = rng.integers(1, maxval, size=(len(e), n), endpoint=True)
    return Graph.from_edges(rows * cols, e, c)


def random_road_graph(num_vertices: int, n: int = 2, seed: int = 0, maxval: int = 50,
                      extra: float = 0.35, correlation: str = "random") -> Graph:
    """Sparse connected near-planar graph: random points, Euclidean MST plus
    short extra edges to nearby points.  Weights grow with edge length."""
    rng = np.random.default_rng(seed)
    pts = rng.random((num_vertices, 2))
    d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))
    # Prim's MST
    in_tree = np.zeros(num_vertices, dtype=bool)
    best = np.full(num_vertices, np.inf)
    parent = np.full(num_vertices, -1)
    best[0] = 0
    edges = set()
    for _ in range(num_vertices):
        v = int(np.argmin(np.where(in_tree, np.inf, best)))
        in_tree[v] = True
        if parent[v] >= 0:
            edges.add((min(v, parent[v]), max(v, parent[v])))
        closer = (~in_tree) & (d[v] < best)
        best[closer] = d[v][closer]
        parent[closer] = v
    want = len(edges) + int(extra * num_vertices)
    order = np.argsort(d, axis=1)
    tries = 0
    while len(edges) < want and tries < 50 * num_vertices:
        tries += 1
        v = int(rng.integers(num_vertices))
        w = int(order[v, rng.integers(1, min(4, num_vertices - 1) + 1)])
        edges.add((min(v, w), max(v, w)))
    edges = sorted(edges)
    e = np.array(edges, dtype=np.int64)
    length = d[e[:, 0], e[:, 1]]
    w = np.clip(np.floor(length / length.max() * (maxval - 1)) + 1, 1, maxval)
    w = np.maximum(1, np.minimum(maxval, w + rng.integers(0, 3, size=len(w)))).astype(np.int64)
    g = Graph.from_edges(num_vertices, e, w.reshape(-1, 1))
    if n > 1:
        if correlation == "random":
            cols = [w.reshape(-1, 1)] + [rng.integers(1, maxval, size=(len(e), 1), endpoint=True)
                                         for _ in range(n - 1)]
            g = Graph.from_edges(num_vertices, e, np.hstack(cols))
        else:
            g = synthesize_costs(g, correlation, n - 1, int(rng.integers(1 << 30)))
    return g
