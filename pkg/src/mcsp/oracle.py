"""Reference searches: skyline Dijkstra and exhaustive simple-path
enumeration.  Deliberately plain Python (heapq + tuples) and independent of
the array kernels, so they can check them."""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra as _sp_dijkstra

from .errors import TooLarge
from .graph import Graph, QuerySpec
from .skyline import PathSummary, SkylinePathSet, skyline_of

BRUTE_FORCE_LIMIT = 14


def _weakly_dominated(c, settled, n2):
    if not settled:
        return False
    if n2:
        # settled labels arrive in lex order, costs strictly falling
        return c[1] >= settled[-1][1]
    for d in settled:
        if all(x <= y for x, y in zip(d, c)):
            return True
    return False


def _any_weak(c, settled):
    for d in settled:
        if all(x <= y for x, y in zip(d, c)):
            return True
    return False


@dataclass
class SkySearchState:
    source: int
    labels: dict = field(default_factory=dict)    # v -> list of cost tuples
    parents: dict = field(default_factory=dict)   # v -> list of (u, label idx)
    pops: int = 0

    def skyline(self, v) -> SkylinePathSet:
        rows = self.labels.get(v, [])
        n = len(rows[0]) if rows else 2
        return SkylinePathSet(np.array(rows, np.int64).reshape(-1, n))

    def path(self, v, idx) -> list:
        out = [v]
        while True:
            u, j = self.parents[v][idx]
            if u < 0:
                break
            out.append(u)
            v, idx = u, j
        return out[::-1]


def sky_search(g: Graph, s: int, targets: Optional[Iterable[int]] = None,
               constraints=None, stop_at: Optional[int] = None) -> SkySearchState:
    """Label-setting multi-criteria search from s.

    Labels are popped in lexicographic order (weight first), so a popped
    label is final once no settled label at its vertex weakly dominates it.
    With ``targets``, labels weakly dominated at every target are dropped
    and only target sets are complete.  With ``stop_at`` the search ends
    as soon as that vertex settles its first label, which is then the
    lexicographically smallest feasible path.
    """
    n = g.criteria_count
    n2 = n == 2
    C = tuple(int(x) for x in constraints) if constraints is not None else None
    tset = sorted(set(int(t) for t in targets)) if targets is not None else None
    st = SkySearchState(s)
    labels, parents = st.labels, st.parents
    zero = (0,) * n
    heap = [(zero, s, -1, -1)]
    if C is not None and min(C, default=0) < 0:
        heap = []       # even the empty path is infeasible
    indptr, nbr, ncost = g.lists
    while heap:
        c, v, pu, pj = heapq.heappop(heap)
        lv = labels.setdefault(v, [])
        if _weakly_dominated(c, lv, n2):
            continue
        if tset is not None and tset and all(_any_weak(c, labels.get(t, ())) for t in tset):
            continue
        st.pops += 1
        lv.append(c)
        parents.setdefault(v, []).append((pu, pj))
        if stop_at is not None and v == stop_at:
            break
        idx = len(lv) - 1
        for k in range(indptr[v], indptr[v + 1]):
            w = nbr[k]
            ec = ncost[k]
            nc = tuple(a + b for a, b in zip(c, ec))
            if C is not None and any(nc[i + 1] > C[i] for i in range(n - 1)):
                continue
            lw = labels.get(w)
            if lw and _weakly_dominated(nc, lw, n2):
                continue
            heapq.heappush(heap, (nc, w, v, idx))
    return st


def sky_dijkstra(g: Graph, s: int, targets: Optional[Iterable[int]] = None,
                 constraints=None) -> dict:
    s = g.check_vertex(s)
    st = sky_search(g, s, targets, constraints)
    keys = sorted(set(int(t) for t in targets)) if targets is not None else sorted(st.labels)
    return {v: st.skyline(v) for v in keys}


def sky_dijkstra_mcsp(g: Graph, s: int, t: int, constraints) -> Optional[PathSummary]:
    """Constrained point-to-point search: first feasible settlement at t."""
    s = g.check_vertex(s)
    t = g.check_vertex(t)
    st = sky_search(g, s, None, constraints, stop_at=t)
    rows = st.labels.get(t)
    if not rows:
        return None
    return PathSummary(rows[0])


def brute_force_skyline(g: Graph, s: int, t: int) -> SkylinePathSet:
    if g.num_vertices > BRUTE_FORCE_LIMIT:
        raise TooLarge(f"{g.num_vertices} vertices exceeds the enumeration guard")
    s = g.check_vertex(s)
    t = g.check_vertex(t)
    n = g.criteria_count
    if s == t:
        return SkylinePathSet(np.zeros((1, n), np.int64))
    adj = g.adjacency
    found = []
    on = [False] * g.num_vertices
    on[s] = True
    stack = [(s, (0,) * n, 0)]
    # iterative DFS over simple paths
    while stack:
        v, c, k = stack.pop()
        if k < len(adj[v]):
            stack.append((v, c, k + 1))
            w, ec = adj[v][k]
            if on[w]:
                continue
            nc = tuple(a + b for a, b in zip(c, ec))
            if w == t:
                found.append(nc)
                continue
            on[w] = True
            stack.append((w, nc, 0))
        else:
            on[v] = False
    if not found:
        return SkylinePathSet(np.empty((0, n), np.int64))
    return skyline_of(found)


def mcsp_from_skyline(sky: SkylinePathSet, constraints) -> Optional[PathSummary]:
    C = np.asarray(constraints, np.int64)
    for row in sky.costs:
        if np.all(row[1:] <= C):
            return PathSummary(tuple(int(x) for x in row))
    return None


def mcsp_oracle(g: Graph, q: QuerySpec, skyline: Optional[SkylinePathSet] = None) -> Optional[PathSummary]:
    if skyline is None:
        skyline = sky_dijkstra(g, q.s, targets=[q.t])[q.t]
    if q.constraints is None:
        return PathSummary(tuple(int(x) for x in skyline.costs[0])) if len(skyline) else None
    return mcsp_from_skyline(skyline, q.constraints)


def weight_matrix(g: Graph) -> csr_matrix:
    nv = g.num_vertices
    return csr_matrix((g.ncost[:, 0].astype(np.float64), g.nbr, g.indptr), shape=(nv, nv))


def dijkstra(g: Graph, s, matrix: Optional[csr_matrix] = None) -> np.ndarray:
    """Shortest weights from s (or each source in s) on criterion 0."""
    m = weight_matrix(g) if matrix is None else matrix
    d = _sp_dijkstra(m, directed=True, indices=s)
    return d
