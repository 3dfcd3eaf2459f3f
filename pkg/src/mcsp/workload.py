"""Query workloads: OD pairs drawn from a shortest-distance band, with
constraints interpolated between the tightest and loosest useful values."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .errors import BucketEmpty, InvalidValue
from .graph import Graph, QuerySpec
from .oracle import dijkstra, sky_dijkstra, weight_matrix

BUCKETS = ("Q1", "Q2", "Q3", "Q4", "Q5")
RATIOS = (0.1, 0.3, 0.5, 0.7, 0.9)


@dataclass(frozen=True)
class WorkloadSpec:
    bucket: str = "Q3"
    ratio: float = 0.5
    count: int = 100
    seed: int = 0
    max_tries: int = 0        # OD samples before giving up; 0 -> 50 * count + 1000

    def __post_init__(self):
        if self.bucket not in BUCKETS:
            raise InvalidValue(f"bucket must be one of {BUCKETS}")
        if not 0 <= float(self.ratio) <= 1:
            raise InvalidValue("ratio must lie in [0, 1]")
        if self.count < 0:
            raise InvalidValue("count must be >= 0")

    @property
    def index(self) -> int:
        return BUCKETS.index(self.bucket) + 1


def bucket_range(d_max: float, bucket) -> tuple:
    i = BUCKETS.index(bucket) + 1 if isinstance(bucket, str) else int(bucket)
    return d_max / 2 ** (6 - i), d_max / 2 ** (5 - i)


def estimate_dmax(g: Graph, rng, matrix=None) -> float:
    """Farthest settled distance from one random vertex."""
    s = int(rng.integers(g.num_vertices))
    d = dijkstra(g, s, matrix)
    return float(d[np.isfinite(d)].max())


def interpolate(cmin, cmax, ratio) -> tuple:
    """round(r * C_max + (1 - r) * C_min) per criterion, halves rounded up,
    evaluated exactly on the decimal value of r."""
    r = Fraction(str(ratio))
    out = []
    for lo, hi in zip(cmin, cmax):
        x = r * int(hi) + (1 - r) * int(lo)
        out.append(int((x + Fraction(1, 2)) // 1))
    return tuple(out)


def constraint_bounds(sky) -> tuple:
    """(C_min, C_max) over criteria 1..n-1 of a canonical skyline set."""
    c = sky.costs
    return tuple(int(x) for x in c[:, 1:].min(0)), tuple(int(x) for x in c[0, 1:])


def gen_workload(g: Graph, spec: WorkloadSpec,
                 skyline_fn: Optional[Callable] = None) -> list:
    """Sample ``spec.count`` OD pairs from the bucket and attach
    constraints.  ``skyline_fn(s, t)`` supplies the OD skyline (an index
    query); the oracle search is used when absent."""
    rng = np.random.default_rng(spec.seed)
    m = weight_matrix(g)
    d_max = estimate_dmax(g, rng, m)
    lo, hi = bucket_range(d_max, spec.bucket)
    if skyline_fn is None:
        def skyline_fn(s, t):
            return sky_dijkstra(g, s, targets=[t])[t]
    tries = spec.max_tries or 50 * spec.count + 1000
    out = []
    while len(out) < spec.count:
        if tries <= 0:
            raise BucketEmpty(f"bucket {spec.bucket} [{lo:g}, {hi:g}) yielded {len(out)} of "
                              f"{spec.count} pairs")
        tries -= 1
        s = int(rng.integers(g.num_vertices))
        d = dijkstra(g, s, m)
        cand = np.flatnonzero((d >= lo) & (d < hi))
        if not len(cand):
            continue
        t = int(cand[rng.integers(len(cand))])
        cmin, cmax = constraint_bounds(skyline_fn(s, t))
        out.append(QuerySpec(s, t, interpolate(cmin, cmax, spec.ratio)))
    return out


def format_workload(queries) -> str:
    lines = []
    for q in queries:
        lines.append(" ".join(str(int(x)) for x in (q.s, q.t, *(q.constraints or ()))))
    return "\n".join(lines) + ("\n" if lines else "")


def write_workload(queries, path):
    with open(path, "w", newline="\n") as fh:
        fh.write(format_workload(queries))


def parse_workload(text: str) -> list:
    out = []
    for no, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        try:
            vals = [int(x) for x in line.split()]
        except ValueError:
            raise InvalidValue(f"workload line {no}: non-integer field") from None
        if len(vals) < 2:
            raise InvalidValue(f"workload line {no}: need s and t")
        out.append(QuerySpec(vals[0], vals[1], tuple(vals[2:]) if len(vals) > 2 else None))
    return out


def read_workload(path) -> list:
    with open(path) as fh:
        return parse_workload(fh.read())
