"""Skyline path algebra: dominance, canonical sets, merging and single-hop
concatenation.  The heavy lifting lives in :mod:`mcsp.kernels`; this
module is the typed surface over it."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import kernels as K
from .errors import ArithmeticOverflow, InvalidValue, PreconditionViolated

INT64_MAX = np.iinfo(np.int64).max

EDGE = ("edge",)


def shortcut_via(v: int):
    return ("shortcut", int(v))


def concat_via(hop: int, i: int, j: int):
    return ("concat", int(hop), int(i), int(j))


@dataclass(frozen=True)
class PathSummary:
    cost: tuple
    via: tuple = EDGE

    @property
    def weight(self) -> int:
        return self.cost[0]

    def __len__(self):
        return len(self.cost)


@dataclass
class Stats:
    candidates: int = 0
    dominance_checks: int = 0
    hops_concatenated: int = 0
    hops_pruned: int = 0

    def add(self, counters):
        self.candidates += int(counters[K.C_CAND])
        self.dominance_checks += int(counters[K.C_CHECK])
        self.hops_concatenated += int(counters[K.C_HOPS])
        self.hops_pruned += int(counters[K.C_PRUNED])
        return self

    def __iadd__(self, other: "Stats"):
        self.candidates += other.candidates
        self.dominance_checks += other.dominance_checks
        self.hops_concatenated += other.hops_concatenated
        self.hops_pruned += other.hops_pruned
        return self


def new_counters():
    return np.zeros(4, np.int64)


def as_costs(x, n: Optional[int] = None) -> np.ndarray:
    a = np.asarray(x, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(-1, n if n else max(len(a), 1)) if a.size else np.empty((0, n or 2), np.int64)
    return np.ascontiguousarray(a)


class SkylinePathSet:
    """Canonical skyline: rows in lex order, none dominated by another."""

    __slots__ = ("costs", "vias")

    def __init__(self, costs, vias: Optional[list] = None):
        self.costs = as_costs(costs)
        self.vias = vias

    @classmethod
    def empty(cls, n: int):
        return cls(np.empty((0, n), np.int64), [])

    @property
    def n(self) -> int:
        return self.costs.shape[1]

    @property
    def entries(self):
        vias = self.vias if self.vias is not None else [EDGE] * len(self)
        return [PathSummary(tuple(int(x) for x in c), v) for c, v in zip(self.costs, vias)]

    def as_tuples(self):
        return [tuple(int(x) for x in c) for c in self.costs]

    def __len__(self):
        return self.costs.shape[0]

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        if isinstance(other, SkylinePathSet):
            return self.costs.shape == other.costs.shape and np.array_equal(self.costs, other.costs)
        try:
            return self.as_tuples() == [tuple(x) for x in other]
        except TypeError:
            return NotImplemented

    def __repr__(self):
        return f"SkylinePathSet({self.as_tuples()})"

    def is_canonical(self) -> bool:
        return bool(np.array_equal(K.skyline_rows(self.costs), np.arange(len(self))))


def _vec(x) -> np.ndarray:
    if isinstance(x, PathSummary):
        x = x.cost
    return np.asarray(x, dtype=np.int64)


def _set(x) -> SkylinePathSet:
    if isinstance(x, SkylinePathSet):
        return x
    return skyline_of(x)


def dominates(a, b) -> bool:
    a = _vec(a)
    b = _vec(b)
    if a.shape != b.shape:
        raise InvalidValue("cost vectors differ in length")
    return bool(np.all(a <= b) and np.any(a < b))


def skyline_of(paths) -> SkylinePathSet:
    paths = list(paths)
    if not paths:
        return SkylinePathSet(np.empty((0, 2), np.int64), [])
    vias = [p.via if isinstance(p, PathSummary) else EDGE for p in paths]
    costs = np.array([_vec(p) for p in paths], dtype=np.int64)
    if costs.ndim != 2:
        raise InvalidValue("cost vectors differ in length")
    keep = K.skyline_rows(costs)
    return SkylinePathSet(costs[keep], [vias[i] for i in keep])


def skyline_merge(a, b, stats: Optional[Stats] = None) -> SkylinePathSet:
    a = _set(a)
    b = _set(b)
    if len(a) == 0:
        return b
    if len(b) == 0:
        return a
    allv = (a.vias or [EDGE] * len(a)) + (b.vias or [EDGE] * len(b))
    ap = np.arange(len(a), dtype=np.int64).reshape(-1, 1)
    bp = np.arange(len(a), len(a) + len(b), dtype=np.int64).reshape(-1, 1)
    cnt = new_counters()
    c, p = K.merge_sets(a.costs, ap, b.costs, bp, cnt)
    if stats is not None:
        stats.add(cnt)
    return SkylinePathSet(c, [allv[i] for i in p[:, 0]])


def concat_pair(p, q, hop: int = -1, i: int = 0, j: int = 0) -> PathSummary:
    a = _vec(p)
    b = _vec(q)
    if a.shape != b.shape:
        raise InvalidValue("cost vectors differ in length")
    out = tuple(int(x) + int(y) for x, y in zip(a, b))
    if any(v > INT64_MAX for v in out):
        raise ArithmeticOverflow("criterion sum exceeds int64")
    return PathSummary(out, concat_via(hop, i, j))


def _concat(left, right, use_rank, strategy, stats, hop):
    left = _set(left)
    right = _set(right)
    n = left.n if len(left) else right.n
    cnt = new_counters()
    c, ii, jj = K.concat_core(left.costs, right.costs, use_rank, strategy, cnt)
    if stats is not None:
        stats.add(cnt)
    return SkylinePathSet(c, [concat_via(hop, a, b) for a, b in zip(ii, jj)])


def concat_hop_2d(left, right, stats: Optional[Stats] = None, hop: int = -1) -> SkylinePathSet:
    left = _set(left)
    right = _set(right)
    if (len(left) and left.n != 2) or (len(right) and right.n != 2):
        raise InvalidValue("concat_hop_2d needs n = 2")
    return _concat(left, right, True, 0, stats, hop)


def concat_hop_nd(left, right, stats: Optional[Stats] = None, hop: int = -1,
                  use_rank: bool = True, strategy: str = "value") -> SkylinePathSet:
    left = _set(left)
    right = _set(right)
    if (len(left) and left.n < 3) or (len(right) and right.n < 3):
        raise InvalidValue("concat_hop_nd needs n >= 3")
    return _concat(left, right, use_rank, _STRATEGY[strategy], stats, hop)


def concat_hop(left, right, stats: Optional[Stats] = None, hop: int = -1, use_rank: bool = True):
    return _concat(left, right, use_rank, 0, stats, hop)


_STRATEGY = {"value": 0, "intersection": 1}


class RankIndex:
    """Per-criterion sorted values over an accepted skyline set."""

    def __init__(self, n: int, capacity: int = 16):
        if n < 2:
            raise InvalidValue("need at least one cost criterion")
        self.n = n
        self.k = 0
        self.acc = np.empty((capacity, n), np.int64)
        self.vals = np.empty((n - 1, capacity), np.int64)
        self.ids = np.empty((n - 1, capacity), np.int64)
        self.last = None

    @classmethod
    def from_rows(cls, rows) -> "RankIndex":
        rows = as_costs(rows)
        idx = cls(rows.shape[1], max(16, len(rows)))
        for r in rows:
            idx.insert(r)
        return idx

    def _grow(self):
        cap = 2 * self.acc.shape[0]
        for name in ("acc",):
            a = np.empty((cap, self.n), np.int64)
            a[: self.k] = self.acc[: self.k]
            self.acc = a
        for name in ("vals", "ids"):
            old = getattr(self, name)
            a = np.empty((self.n - 1, cap), np.int64)
            a[:, : self.k] = old[:, : self.k]
            setattr(self, name, a)

    @property
    def max_weight(self):
        return int(self.acc[: self.k, 0].max()) if self.k else None

    def insert(self, vec):
        if self.k == self.acc.shape[0]:
            self._grow()
        K.rank_insert(self.acc, self.k, self.vals, self.ids, _vec(vec))
        self.k += 1

    def rank(self, criterion: int, value: int) -> int:
        """1-based rank a new path with this value would take on cost
        criterion ``criterion`` (1..n-1): after every equal value."""
        col = self.vals[criterion - 1, : self.k]
        return int(np.searchsorted(col, value, side="right")) + 1

    def __len__(self):
        return self.k


@dataclass
class ValidationInfo:
    accepted: bool
    distinct_criterion: Optional[int]
    rank: int
    checks: int
    rule: str
    checked_ids: list = field(default_factory=list)


_RULES = {0: "accepted", 1: "dominated", 9: "union-bound", 10: "rank-threshold"}


def validate_candidate_nd(index: RankIndex, candidate, strategy: str = "value",
                          use_rank: bool = True, stats: Optional[Stats] = None) -> bool:
    cand = _vec(candidate)
    if cand.shape[0] != index.n:
        raise InvalidValue("candidate length differs from the index")
    if index.n < 3:
        raise InvalidValue("validate_candidate_nd needs n >= 3")
    if index.k and cand[0] < index.max_weight:
        raise PreconditionViolated("candidate weight below the accepted maximum")
    cnt = new_counters()
    info = np.zeros(4, np.int64)
    ok = bool(K.rank_validate(index.acc, index.k, index.vals, index.ids, cand,
                              _STRATEGY[strategy], use_rank, cnt, info))
    if stats is not None:
        stats.add(cnt)
    dc = int(info[0])
    checked = []
    if dc >= 0 and info[3] in (0, 1) and strategy == "value":
        checked = [int(p) for p in index.ids[dc, : int(info[1]) - 1]]
    index.last = ValidationInfo(ok, dc + 1 if dc >= 0 else None, int(info[1]), int(info[2]),
                                _RULES[int(info[3])], checked)
    return ok
