"""mcsp command line: build, query, gen-workload, verify, bench.

Vertex ids on the command line and in workload files are the internal
0-based ids (DIMACS id minus one for files numbered 1..N)."""
from __future__ import annotations

import argparse
import sys

from .errors import MCSPError
from .forest import MODES, ForestIndex
from .graph import load_dimacs, parse_synth, synthesize_costs
from .serialize import load_index, save_index
from .tree import TreeIndex
from .workload import BUCKETS, WorkloadSpec, gen_workload, read_workload, write_workload


def _int_list(text):
    return [int(x) for x in text.split(",") if x.strip()]


def _add_graph_args(p, required=True):
    p.add_argument("--graph", required=required, help="DIMACS arc file with the weights")
    p.add_argument("--costs", default="", help="comma-separated DIMACS files, one per extra criterion")
    p.add_argument("--synth", help="synthesise extra criteria, mode:count:seed")


def _add_index_args(p, labels=MODES, default="extended"):
    p.add_argument("--forest", type=int, default=0, metavar="P",
                   help="build a forest index with P partitions (default: plain tree index)")
    p.add_argument("--labels", choices=labels, default=default)
    p.add_argument("--part-order", choices=("boundary-count", "nested"), default="boundary-count")
    p.add_argument("--seed", type=int, default=0, help="partitioner seed")


def load_graph(args):
    files = [f for f in args.costs.split(",") if f]
    handles = [open(f) for f in [args.graph] + files]
    try:
        g = load_dimacs(handles[0], handles[1:])
    finally:
        for h in handles:
            h.close()
    if args.synth:
        mode, count, seed = parse_synth(args.synth)
        g = synthesize_costs(g, mode, count, seed)
    return g


def build_index(g, args):
    if args.forest:
        return ForestIndex.build(g, partitions=args.forest, mode=args.labels, seed=args.seed,
                                 part_order=args.part_order)
    return TreeIndex.build(g)


def cmd_build(args, out):
    g = load_graph(args)
    idx = build_index(g, args)
    save_index(idx, args.index)
    st = idx.stats()
    print(" ".join(f"{k}={v:.3f}" if isinstance(v, float) else f"{k}={v}" for k, v in st.items()), file=out)
    return 0


def _fmt(cost, path=None):
    s = " ".join(str(int(x)) for x in cost)
    if path is not None:
        s += " : " + " ".join(str(v) for v in path)
    return s


def cmd_query(args, out):
    idx = load_index(args.index)
    if args.c is not None:
        C = _int_list(args.c)
        r = idx.query_mcsp(args.s, args.t, C)
        if r is None:
            print("INFEASIBLE", file=out)
        else:
            print(_fmt(r.cost, idx.retrieve_path(r) if args.path else None), file=out)
        return 0
    sky = idx.query_skyline(args.s, args.t)
    for e in sky.entries:
        print(_fmt(e.cost, idx.retrieve_path(e) if args.path else None), file=out)
    return 0


def cmd_gen_workload(args, out):
    if args.index:
        idx = load_index(args.index)
        g = idx.graph

        def fn(s, t):
            return idx.query_skyline(s, t)
    elif args.graph:
        g = load_graph(args)
        fn = None
    else:
        raise SystemExit("gen-workload needs --index or --graph")
    spec = WorkloadSpec(args.bucket, args.ratio, args.count, args.seed)
    qs = gen_workload(g, spec, fn)
    write_workload(qs, args.out)
    print(f"wrote {len(qs)} queries to {args.out}", file=out)
    return 0


def _indexes(g, args):
    out = {"tree": TreeIndex.build(g)}
    parts = args.forest or 2
    for mode in MODES if args.labels == "both" else (args.labels,):
        out[f"forest-{mode}"] = ForestIndex.build(g, partitions=parts, mode=mode, seed=args.seed,
                                                   part_order=args.part_order)
    if getattr(args, "index", None):
        out["file"] = load_index(args.index)
    return out


def cmd_verify(args, out):
    from .bench import verify
    g = load_graph(args)
    qs = read_workload(args.workload)
    idx = _indexes(g, args)
    bad, rows = verify(g, qs, idx)
    for q, got in rows[:10]:
        print(f"MISMATCH {q.s} {q.t} {q.constraints}: {got}", file=out)
    print(f"verified {len(qs)} queries against {', '.join(idx)} and sky-dijkstra: "
          f"{bad} mismatches", file=out)
    return 1 if bad else 0


def cmd_bench(args, out):
    from .bench import run_bench
    g = load_graph(args)
    qs = read_workload(args.workload)
    idx = _indexes(g, args)
    rep = run_bench(g, qs, idx, oracle=not args.no_oracle, workers=args.workers,
                    oracle_limit=args.oracle_limit or None)
    for line in rep.lines():
        print(line, file=out)
    return 0 if rep.agree else 1


def make_parser():
    ap = argparse.ArgumentParser(prog="mcsp", description="Multi-constraint shortest path indexes")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("build", help="build and save an index")
    _add_graph_args(p)
    _add_index_args(p)
    p.add_argument("--index", required=True, help="output index file")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="query a saved index")
    p.add_argument("--index", required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--c", help="comma-separated constraints C_1..C_{n-1}; omit for the skyline")
    p.add_argument("--path", action="store_true", help="append the vertex sequence")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("gen-workload", help="sample a query workload")
    _add_graph_args(p, required=False)
    p.add_argument("--index", help="answer OD skylines with this index instead of the oracle")
    p.add_argument("--bucket", choices=BUCKETS, default="Q3")
    p.add_argument("--ratio", type=float, default=0.5)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_workload)

    for name, fn, helptext in (("verify", cmd_verify, "replay a workload through every method"),
                               ("bench", cmd_bench, "time every method on a workload")):
        p = sub.add_parser(name, help=helptext)
        _add_graph_args(p)
        _add_index_args(p, MODES + ("both",), "both")
        p.add_argument("--workload", required=True)
        p.add_argument("--index", help="also check this saved index")
        if name == "bench":
            p.add_argument("--workers", type=int, default=1)
            p.add_argument("--oracle-limit", type=int, default=0, help="time at most this many oracle queries")
            p.add_argument("--no-oracle", action="store_true")
        p.set_defaults(func=fn)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = make_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except MCSPError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
