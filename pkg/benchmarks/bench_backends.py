"""Compare the numba kernels with the pure-Python fallback.

Each backend runs in its own interpreter (the switch is read at import),
builds a tree and a forest index on the same graph and times a workload.

    python3 benchmarks/bench_backends.py [--vertices 400] [--criteria 3] [--queries 200]
"""
import argparse
import json
import os
import subprocess
import sys
import time

WORKER = r"""
import json, sys, time
import numpy as np
from mcsp._jit import backend_name
from mcsp.graph import random_road_graph
from mcsp.tree import TreeIndex
from mcsp.forest import ForestIndex

nv, n, nq = (int(x) for x in sys.argv[1:4])
g = random_road_graph(nv, n=n, seed=11)
rng = np.random.default_rng(5)
qs = [(int(a), int(b)) for a, b in rng.integers(nv, size=(nq, 2))]
out = {"backend": backend_name()}
# a tiny warm-up build so numba compile or cache loading is not billed
TreeIndex.build(random_road_graph(30, n=n, seed=1)).query_skyline(0, 29)
for name, make in (("tree", lambda: TreeIndex.build(g)),
                   ("forest", lambda: ForestIndex.build(g, partitions=4, mode="extended"))):
    t0 = time.perf_counter()
    idx = make()
    build = time.perf_counter() - t0
    t0 = time.perf_counter()
    sizes = [len(idx.query_skyline(s, t)) for s, t in qs]
    query = (time.perf_counter() - t0) / len(qs)
    out[name] = {"build_s": build, "query_ms": query * 1e3, "entries": sum(sizes)}
print(json.dumps(out))
"""


def run(flag, args):
    env = dict(os.environ, MCSP_JIT=flag)
    t0 = time.perf_counter()
    r = subprocess.run([sys.executable, "-c", WORKER, str(args.vertices), str(args.criteria),
                        str(args.queries)], env=env, capture_output=True, text=True, check=True)
    res = json.loads(r.stdout.strip().splitlines()[-1])
    res["wall_s"] = time.perf_counter() - t0
    return res


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--vertices", type=int, default=400)
    ap.add_argument("--criteria", type=int, default=3)
    ap.add_argument("--queries", type=int, default=200)
    args = ap.parse_args()
    jit = run("1", args)
    py = run("0", args)
    for kind in ("tree", "forest"):
        a, b = jit[kind], py[kind]
        same = "same" if a["entries"] == b["entries"] else "DIFFERENT"
        print(f"{kind:6s} build numba {a['build_s']:8.3f}s  python {b['build_s']:8.3f}s  "
              f"x{b['build_s'] / a['build_s']:6.1f}")
        print(f"{kind:6s} query numba {a['query_ms']:8.3f}ms python {b['query_ms']:8.3f}ms "
              f"x{b['query_ms'] / a['query_ms']:6.1f}  results {same}")
    print(f"process wall time: numba {jit['wall_s']:.1f}s (incl. compile/cache), python {py['wall_s']:.1f}s")


if __name__ == "__main__":
    main()
