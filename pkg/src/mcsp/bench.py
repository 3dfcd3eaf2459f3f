"""Timing and agreement checks over a workload."""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph
from .oracle import sky_dijkstra, sky_dijkstra_mcsp


@dataclass
class AlgoTiming:
    median: float
    p95: float
    queries: int


@dataclass
class BenchReport:
    timings: dict = field(default_factory=dict)     # name -> AlgoTiming
    index_bytes: dict = field(default_factory=dict)
    build_time: dict = field(default_factory=dict)
    agree: bool = True
    mismatches: int = 0

    def speedup(self, fast: str, slow: str) -> float:
        return self.timings[slow].median / self.timings[fast].median

    def lines(self) -> list:
        out = []
        for name, t in self.timings.items():
            extra = ""
            if name in self.index_bytes:
                extra = f" bytes={self.index_bytes[name]} build={self.build_time[name]:.3f}s"
            out.append(f"{name}: median={t.median * 1e3:.3f}ms p95={t.p95 * 1e3:.3f}ms "
                       f"queries={t.queries}{extra}")
        out.append(f"agree={str(self.agree).lower()} mismatches={self.mismatches}")
        return out


def oracle_answer(g: Graph, q):
    """Sky-Dijkstra answer as a plain value: tuple, None, or list of tuples."""
    if q.constraints is None:
        return [tuple(r) for r in sky_dijkstra(g, q.s, targets=[q.t])[q.t].costs.tolist()]
    r = sky_dijkstra_mcsp(g, q.s, q.t, q.constraints)
    return None if r is None else tuple(r.cost)


def index_answer(index, q):
    if q.constraints is None:
        return [tuple(r) for r in index.query_skyline(q.s, q.t).costs.tolist()]
    r = index.query_mcsp(q.s, q.t, q.constraints)
    return None if r is None else tuple(r.cost)


def _timed(fn, queries, workers):
    def one(q):
        t0 = time.perf_counter()
        a = fn(q)
        return time.perf_counter() - t0, a
    if workers <= 1:
        res = [one(q) for q in queries]
    else:
        with ThreadPoolExecutor(workers) as ex:
            res = list(ex.map(one, queries))
    return np.array([r[0] for r in res]), [r[1] for r in res]


def run_bench(g: Graph, queries, indexes: dict, oracle: bool = True, workers: int = 1,
              oracle_limit=None) -> BenchReport:
    """Time every index (name -> index) and the oracle on ``queries``.
    ``oracle_limit`` caps the number of oracle queries (it can be slow);
    agreement is checked on the queries the oracle ran."""
    rep = BenchReport()
    answers = {}
    for name, idx in indexes.items():
        if queries:
            idx.query_skyline(queries[0].s, queries[0].t)    # warm the kernels
        ts, ans = _timed(lambda q, idx=idx: index_answer(idx, q), queries, workers)
        rep.timings[name] = AlgoTiming(float(np.median(ts)), float(np.percentile(ts, 95)), len(ts))
        st = idx.stats()
        rep.index_bytes[name] = int(st["bytes"])
        rep.build_time[name] = float(idx.build_time)
        answers[name] = ans
    if oracle and queries:
        qs = queries[:oracle_limit] if oracle_limit else queries
        ts, ans = _timed(lambda q: oracle_answer(g, q), qs, workers)
        rep.timings["sky-dijkstra"] = AlgoTiming(float(np.median(ts)), float(np.percentile(ts, 95)), len(ts))
        answers["sky-dijkstra"] = ans
    names = list(answers)
    if names:
        k = min(len(answers[n]) for n in names)
        for i in range(k):
            ref = answers[names[0]][i]
            if any(answers[n][i] != ref for n in names[1:]):
                rep.mismatches += 1
    rep.agree = rep.mismatches == 0
    return rep


def verify(g: Graph, queries, indexes: dict):
    """Replay queries through every index and the oracle.  Returns
    (mismatch count, list of (query, name -> answer) for the mismatches)."""
    bad = []
    for q in queries:
        ref = oracle_answer(g, q)
        got = {name: index_answer(idx, q) for name, idx in indexes.items()}
        if any(v != ref for v in got.values()):
            got["sky-dijkstra"] = ref
            bad.append((q, got))
    return len(bad), bad
