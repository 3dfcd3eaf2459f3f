"""Multi-hop concatenation with rectangle / n-cube hop pruning and the
constraint-aware best-path search."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels as K
from .errors import EmptyHop, InvalidValue
from .skyline import (PathSummary, SkylinePathSet, Stats, _set, concat_via, new_counters)


@dataclass(frozen=True)
class PruningConfig:
    rectangle: bool = True
    ncube: bool = True
    constraint: bool = True
    rank: bool = True

    def without(self, layer: str) -> "PruningConfig":
        return PruningConfig(**{**self.__dict__, layer: False})


FULL = PruningConfig()
NONE = PruningConfig(False, False, False, False)
LAYERS = ("rectangle", "ncube", "constraint", "rank")


@dataclass
class NCube:
    inf: tuple
    sup: tuple
    hop: int = -1
    sup_fixed: bool = False

    @property
    def n(self):
        return len(self.inf)


@dataclass
class HopRectangle:
    top_left: tuple
    bottom_right: tuple
    hop: int = -1

    @property
    def inf(self):
        return (self.top_left[0], self.bottom_right[1])

    @property
    def sup(self):
        return (self.bottom_right[0], self.top_left[1])

    @property
    def sup_fixed(self):
        return True


def _tup(a):
    return tuple(int(x) for x in a)


def hop_rectangle(left, right, hop: int = -1) -> HopRectangle:
    left, right = _set(left), _set(right)
    if not len(left) or not len(right):
        raise EmptyHop("empty factor")
    if left.n != 2:
        raise InvalidValue("hop_rectangle needs n = 2")
    return HopRectangle(_tup(left.costs[0] + right.costs[0]), _tup(left.costs[-1] + right.costs[-1]), hop)


def hop_ncube(left, right, hop: int = -1) -> NCube:
    left, right = _set(left), _set(right)
    if not len(left) or not len(right):
        raise EmptyHop("empty factor")
    inf = left.costs.min(0) + right.costs.min(0)
    sup = left.costs.max(0) + right.costs.max(0)
    return NCube(_tup(inf), _tup(sup), hop, left.n == 2)


def ncube_dominates(a: NCube, b: NCube) -> bool:
    return bool(K.vec_dominates(np.asarray(a.sup, np.int64), np.asarray(b.inf, np.int64)))


def prune_hops_rectangle(rects: Sequence[HopRectangle]) -> list:
    if not rects:
        return []
    tl = np.array([r.top_left for r in rects], np.int64)
    br = np.array([r.bottom_right for r in rects], np.int64)
    inf = np.array([r.inf for r in rects], np.int64)
    alive = np.ones(len(rects), np.bool_)
    K.prune_rectangles_tlbr(tl, br, inf, alive, new_counters())
    return [r.hop for r, a in zip(rects, alive) if a]


def ncube_order(cubes: Sequence[NCube]) -> list:
    if not cubes:
        return []
    # hop id is the final tie-break, so present cubes sorted by id
    cubes = sorted(cubes, key=lambda c: c.hop)
    inf = np.array([c.inf for c in cubes], np.int64)
    sup = np.array([c.sup for c in cubes], np.int64)
    order = K.cube_order(inf, sup, np.ones(len(cubes), np.bool_))
    return [cubes[i] for i in order]


def compose_cubes(cubes: Sequence[NCube]) -> NCube:
    """Cube covering the union of several hop cubes between one pair."""
    inf = np.min([c.inf for c in cubes], axis=0)
    sup = np.max([c.sup for c in cubes], axis=0)
    return NCube(_tup(inf), _tup(sup), -1, False)


def chain_cubes(a: NCube, b: NCube) -> NCube:
    """Cube of every concatenation of a path in ``a`` with one in ``b``."""
    return NCube(_tup(np.add(a.inf, b.inf)), _tup(np.add(a.sup, b.sup)), b.hop, False)


def pack(sets) -> tuple[np.ndarray, np.ndarray]:
    """Stack a list of (k_i, n) arrays into one array plus offsets."""
    off = np.zeros(len(sets) + 1, np.int64)
    for i, s in enumerate(sets):
        off[i + 1] = off[i] + len(s)
    if not sets:
        return np.empty((0, 2), np.int64), off
    n = next((s.shape[1] for s in sets if s.ndim == 2 and s.shape[1]), 2)
    arr = np.concatenate([s.reshape(-1, n) for s in sets]) if off[-1] else np.empty((0, n), np.int64)
    return np.ascontiguousarray(arr, np.int64), off


def _hop_arrays(hops):
    ids, ls, rs = [], [], []
    for h, l, r in hops:
        ids.append(int(h))
        ls.append(_set(l).costs)
        rs.append(_set(r).costs)
    Lc, loff = pack(ls)
    Rc, roff = pack(rs)
    return ids, Lc, loff, Rc, roff


def multi_hop_skyline(hops, config: PruningConfig = FULL, stats: Optional[Stats] = None) -> SkylinePathSet:
    if not hops:
        raise InvalidValue("empty hop list")
    ids, Lc, loff, Rc, roff = _hop_arrays(hops)
    cnt = new_counters()
    c, p = K.multi_hop_core(Lc, loff, Rc, roff, config.rectangle, config.ncube, config.rank, cnt)
    if stats is not None:
        stats.add(cnt)
    return SkylinePathSet(c, [concat_via(ids[h], i, j) for h, i, j in p])


def best_under_constraints(hops, constraints, config: PruningConfig = FULL,
                           stats: Optional[Stats] = None) -> Optional[PathSummary]:
    if not hops:
        raise InvalidValue("empty hop list")
    ids, Lc, loff, Rc, roff = _hop_arrays(hops)
    C = np.asarray(constraints, np.int64)
    if C.shape[0] != Lc.shape[1] - 1:
        raise InvalidValue("constraint count must be n - 1")
    cnt = new_counters()
    found, h, i, j, vec = K.best_core(Lc, loff, Rc, roff, C, config.rectangle, config.ncube,
                                      config.constraint, config.rank, cnt)
    if stats is not None:
        stats.add(cnt)
    if not found:
        return None
    return PathSummary(_tup(vec), concat_via(ids[h], i, j))


def hop_candidates(left, right) -> list:
    """Full cross product of one hop, unpruned (for inspection)."""
    left, right = _set(left), _set(right)
    return sorted(_tup(a + b) for a in left.costs for b in right.costs)
