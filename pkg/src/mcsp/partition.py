"""Seeded graph partitioner: farthest-first seeds, balanced region growing
and a boundary-reducing vertex swap pass.  Every region stays connected."""
from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import InvalidValue
from .graph import Graph


@dataclass
class Partition:
    id: int
    vertices: np.ndarray      # sorted global ids
    boundary: np.ndarray      # sorted global ids


def _bfs_hops(g: Graph, sources) -> np.ndarray:
    dist = np.full(g.num_vertices, -1, np.int64)
    q = deque()
    for s in sources:
        dist[s] = 0
        q.append(s)
    while q:
        v = q.popleft()
        for w in g.nbr[g.indptr[v]:g.indptr[v + 1]]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                q.append(int(w))
    return dist


def boundary_mask(g: Graph, part: np.ndarray) -> np.ndarray:
    src = np.repeat(np.arange(g.num_vertices), np.diff(g.indptr))
    cross = part[src] != part[g.nbr]
    out = np.zeros(g.num_vertices, bool)
    out[src[cross]] = True
    return out


def _connected_without(g, part, p, v) -> bool:
    """Does region p stay connected after removing v?"""
    nbrs = [int(w) for w in g.nbr[g.indptr[v]:g.indptr[v + 1]] if part[w] == p]
    if len(nbrs) <= 1:
        return True
    want = set(nbrs)
    seen = {nbrs[0], v}
    q = deque([nbrs[0]])
    want.discard(nbrs[0])
    while q and want:
        x = q.popleft()
        for w in g.nbr[g.indptr[x]:g.indptr[x + 1]]:
            w = int(w)
            if part[w] == p and w not in seen:
                seen.add(w)
                want.discard(w)
                q.append(w)
    return not want


def _local_boundary(g, part, vs) -> int:
    c = 0
    for x in vs:
        ns = g.nbr[g.indptr[x]:g.indptr[x + 1]]
        if np.any(part[ns] != part[x]):
            c += 1
    return c


def partition_graph(g: Graph, count: int, seed: int = 0, balance: float = 1.3,
                    refine_passes: int = 3) -> list:
    nv = g.num_vertices
    if count < 1 or count > nv:
        raise InvalidValue(f"partition count {count} outside [1, {nv}]")
    if count == 1:
        return [Partition(0, np.arange(nv, dtype=np.int64), np.empty(0, np.int64))]
    rng = np.random.default_rng(seed)
    seeds = [int(rng.integers(nv))]
    near = _bfs_hops(g, seeds)
    if (near < 0).any():
        raise InvalidValue("graph must be connected")
    while len(seeds) < count:
        far = int(np.argmax(near))
        if near[far] == 0:
            far = int(np.flatnonzero(~np.isin(np.arange(nv), seeds))[0])
        seeds.append(far)
        near = np.minimum(near, _bfs_hops(g, [far]))

    part = np.full(nv, -1, np.int64)
    queues = [deque() for _ in range(count)]
    size = np.zeros(count, np.int64)
    for r, s in enumerate(seeds):
        part[s] = r
        size[r] = 1
        queues[r].extend(int(w) for w in g.nbr[g.indptr[s]:g.indptr[s + 1]])
    heap = [(1, r) for r in range(count)]
    heapq.heapify(heap)
    left = nv - count
    while left and heap:
        _, r = heapq.heappop(heap)
        q = queues[r]
        while q and part[q[0]] >= 0:
            q.popleft()
        if not q:
            continue
        v = q.popleft()
        part[v] = r
        size[r] += 1
        left -= 1
        q.extend(int(w) for w in g.nbr[g.indptr[v]:g.indptr[v + 1]] if part[w] < 0)
        heapq.heappush(heap, (int(size[r]), r))

    cap = int(np.ceil(balance * nv / count))
    for _ in range(refine_passes):
        moved = 0
        bmask = boundary_mask(g, part)
        for v in np.flatnonzero(bmask):
            v = int(v)
            p = part[v]
            if size[p] <= 1:
                continue
            ns = g.nbr[g.indptr[v]:g.indptr[v + 1]]
            for q_ in sorted(set(int(x) for x in part[ns]) - {int(p)}):
                if size[q_] + 1 > cap or not _connected_without(g, part, p, v):
                    continue
                touched = [v] + [int(w) for w in ns]
                before = _local_boundary(g, part, touched)
                part[v] = q_
                after = _local_boundary(g, part, touched)
                if after < before:
                    size[p] -= 1
                    size[q_] += 1
                    moved += 1
                    break
                part[v] = p
        if not moved:
            break
    return make_partitions(g, part)


def make_partitions(g: Graph, part) -> list:
    part = np.asarray(part, np.int64)
    bmask = boundary_mask(g, part)
    out = []
    for r in range(int(part.max()) + 1):
        vs = np.flatnonzero(part == r)
        out.append(Partition(r, vs.astype(np.int64), vs[bmask[vs]].astype(np.int64)))
    return out


def part_array(g: Graph, parts) -> np.ndarray:
    part = np.full(g.num_vertices, -1, np.int64)
    for p in parts:
        part[p.vertices] = p.id
    return part


def check_partitions(g: Graph, parts) -> list:
    """Violations of the partition invariants (empty list when sound)."""
    bad = []
    part = part_array(g, parts)
    if (part < 0).any():
        bad.append("uncovered vertices")
    seen = sum(len(p.vertices) for p in parts)
    if seen != g.num_vertices:
        bad.append("overlapping partitions")
    bmask = boundary_mask(g, part)
    for p in parts:
        if not np.array_equal(p.boundary, p.vertices[bmask[p.vertices]]):
            bad.append(f"partition {p.id}: boundary classification")
        vs = set(p.vertices.tolist())
        if not vs:
            bad.append(f"partition {p.id}: empty")
            continue
        start = next(iter(vs))
        stack, reach = [start], {start}
        while stack:
            x = stack.pop()
            for w in g.nbr[g.indptr[x]:g.indptr[x + 1]]:
                w = int(w)
                if w in vs and w not in reach:
                    reach.add(w)
                    stack.append(w)
        if reach != vs:
            bad.append(f"partition {p.id}: disconnected")
    return bad


def quotient_graph(g: Graph, parts) -> list:
    part = part_array(g, parts)
    adj = [set() for _ in parts]
    src = np.repeat(np.arange(g.num_vertices), np.diff(g.indptr))
    for a, b in zip(part[src], part[g.nbr]):
        if a != b:
            adj[a].add(int(b))
    return adj


def nested_dissection(adj, nodes=None) -> list:
    """Order nodes of a small graph so every separator comes after the two
    sides it separates (BFS level bisection, applied recursively)."""
    if nodes is None:
        nodes = list(range(len(adj)))
    out = []
    # explicit stack of ("solve", nodes) and ("emit", nodes) tasks
    tasks = [("solve", sorted(nodes))]
    while tasks:
        kind, ns = tasks.pop()
        if kind == "emit":
            out.extend(ns)
            continue
        if len(ns) <= 2:
            out.extend(ns)
            continue
        sub = set(ns)
        comps = _components(adj, sub)
        if len(comps) > 1:
            for c in reversed(comps):
                tasks.append(("solve", c))
            continue
        far = _bfs_levels(adj, sub, ns[0])
        start = max(sorted(far), key=lambda x: far[x])
        lev = _bfs_levels(adj, sub, start)
        mid = max(lev.values()) // 2
        sep = sorted(x for x in ns if lev[x] == mid)
        rest = [x for x in ns if lev[x] != mid]
        if not rest:
            out.extend(ns)
            continue
        tasks.append(("emit", sep))
        for c in reversed(_components(adj, set(rest))):
            tasks.append(("solve", c))
    return out


def _bfs_levels(adj, sub, s):
    lev = {s: 0}
    q = deque([s])
    while q:
        x = q.popleft()
        for y in sorted(adj[x]):
            if y in sub and y not in lev:
                lev[y] = lev[x] + 1
                q.append(y)
    return lev


def _components(adj, sub):
    comps = []
    seen = set()
    for s in sorted(sub):
        if s in seen:
            continue
        lev = _bfs_levels(adj, sub, s)
        seen |= set(lev)
        comps.append(sorted(lev))
    return comps
