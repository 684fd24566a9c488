"""Command-line front end.

Subcommands mirror the library's workflow: prep an edge list, sparsify a
graph, eval a sparse graph against its original, sweep a whole plan, fetch a
dataset, and re-format a saved sweep result. Every command is importable and
testable in-process through main(argv).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .graph import (
    GraphError,
    load_edge_list,
    load_graph_file,
    load_selection,
    prepare,
    save_edge_list,
    save_selection,
    subgraph,
)
from .harness import (
    load_result,
    parse_plan,
    report,
    run_sweep,
    save_result,
)
from .metrics import METRICS, MetricContext
from .seeding import RunSeed
from .sparsifiers import SPARSIFIER_KINDS, sparsifier_spec, sparsify


def _parse_params(pairs):
    from .harness import _parse_param_value

    params = {}
    for item in pairs or []:
        if "=" not in item:
            raise GraphError(f"--param expects name=value, got {item!r}")
        k, v = item.split("=", 1)
        params[k.strip()] = _parse_param_value(v)
    return params


def _cmd_prep(args) -> int:
    g = load_edge_list(args.edgelist, directed=args.directed, weighted=args.weighted)
    g, rep = prepare(g, symmetrize_directed=args.symmetrize)
    out = Path(args.out) if args.out else Path(args.edgelist).with_suffix(".prep.txt")
    save_edge_list(g, out)
    print(f"wrote {out}")
    print(f"vertices={g.n_vertices} edges={g.n_edges} "
          f"removed_isolated={rep.removed_isolated} symmetrized_added={rep.symmetrized_added}")
    return 0


def _cmd_sparsify(args) -> int:
    g = load_graph_file(args.graph)
    params = _parse_params(args.param)
    sel = sparsify(g, args.method, rho=args.rho, seed=RunSeed(args.seed), **params)
    out = Path(args.out) if args.out else Path(args.graph).with_suffix(f".{args.method}.sel")
    save_selection(sel, out)
    print(f"wrote {out}")
    bits = [f"kept={sel.n_kept}", f"achieved_rho={sel.achieved_prune_rate:.6f}"]
    if sel.params:
        bits.append("params=" + ",".join(f"{k}={v}" for k, v in sorted(sel.params.items())))
    if sel.flags:
        bits.append("flags=" + ",".join(sel.flags))
    print(" ".join(bits))
    if args.graph_out:
        sub = subgraph(g, sel)
        save_edge_list(sub, args.graph_out)
        print(f"wrote {args.graph_out}")
    return 0


def _load_sparse_arg(path, full):
    """The eval input is either an edge-list file or a saved selection."""
    with open(path, "r", encoding="utf-8") as f:
        first = f.readline().strip()
    if first == "parent,target_rho,achieved_rho,seed":
        return subgraph(full, load_selection(path))
    return load_graph_file(path)


def _cmd_eval(args) -> int:
    full = load_graph_file(args.full)
    sparse = _load_sparse_arg(args.sparse, full)
    names = [m.strip() for m in args.metrics.split(",") if m.strip()]
    for name in names:
        if name not in METRICS:
            raise GraphError(f"unknown metric {name!r}; known: {', '.join(METRICS)}")
    ctx = MetricContext(full, profile=args.profile, seed=RunSeed(args.seed))
    rows = []
    for name in names:
        rep = ctx.evaluate(name, sparse)
        rows.append({"metric": name, "value": rep.value, "aux": rep.aux})
    if args.format == "json":
        text = json.dumps(rows, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["metric", "value", "aux_json"])
        for r in rows:
            aux = json.dumps(r["aux"], sort_keys=True, separators=(",", ":"))
            writer.writerow([r["metric"], repr(float(r["value"])), aux])
        text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_sweep(args) -> int:
    plan = parse_plan(args.plan)
    result = run_sweep(plan, workers=args.workers)
    out = Path(args.out)
    report(result, format=args.format, out=out, include_timing=not args.no_timing)
    print(f"wrote {out} ({len(result.rows)} rows)")
    if args.raw:
        save_result(result, args.raw)
        print(f"wrote {args.raw}")
    return 0


def _cmd_fetch(args) -> int:
    from .datasets import fetch_dataset

    path = fetch_dataset(args.name, manifest=args.manifest)
    print(path)
    return 0


def _cmd_report(args) -> int:
    result = load_result(args.result)
    out = Path(args.out) if args.out else Path(args.result).with_suffix("." + args.format)
    report(result, format=args.format, out=out, include_timing=not args.no_timing)
    print(f"wrote {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparsekit",
        description="Graph sparsification toolkit: sparsifiers, metrics, sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prep", help="clean an edge list (dedupe, drop self-loops, reindex)")
    p.add_argument("edgelist")
    p.add_argument("--directed", action="store_true")
    p.add_argument("--weighted", action="store_true")
    p.add_argument("--symmetrize", action="store_true",
                   help="also merge arc directions into an undirected graph")
    p.add_argument("-o", "--out")
    p.set_defaults(func=_cmd_prep)

    p = sub.add_parser("sparsify", help="run one sparsifier, write the edge selection")
    p.add_argument("graph", help="edge-list file written by prep")
    p.add_argument("--method", required=True, choices=sorted(SPARSIFIER_KINDS))
    p.add_argument("--rho", type=float, default=None, help="target prune rate in [0,1)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--param", action="append", metavar="NAME=VALUE",
                   help="algorithm parameter, repeatable")
    p.add_argument("-o", "--out", help="selection output path")
    p.add_argument("--graph-out", help="also write the sparsified edge list here")
    p.set_defaults(func=_cmd_sparsify)

    p = sub.add_parser("eval", help="evaluate metrics of a sparse graph against its original")
    p.add_argument("sparse", help="sparsified edge list, or a saved selection")
    p.add_argument("--full", required=True, help="the original edge list")
    p.add_argument("--metrics", required=True, help="comma-separated metric names")
    p.add_argument("--profile", default="desk", choices=["desk", "paper"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.add_argument("-o", "--out")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("sweep", help="run a sweep plan and write the result table")
    p.add_argument("--plan", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.add_argument("--no-timing", action="store_true",
                   help="blank timing columns for byte-stable output")
    p.add_argument("-o", "--out", default="sweep_results.csv")
    p.add_argument("--raw", help="also save the raw result (JSON) here")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("fetch", help="download (or reuse) a dataset from the manifest")
    p.add_argument("name")
    p.add_argument("--manifest", help="manifest CSV overriding the built-in list")
    p.set_defaults(func=_cmd_fetch)

    p = sub.add_parser("report", help="re-format a saved sweep result")
    p.add_argument("result", help="raw result JSON written by sweep --raw")
    p.add_argument("--format", default="csv", choices=["csv", "json"])
    p.add_argument("--no-timing", action="store_true")
    p.add_argument("-o", "--out")
    p.set_defaults(func=_cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GraphError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
