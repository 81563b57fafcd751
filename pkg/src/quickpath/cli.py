"""Command-line interface.

Exit status: 0 on success, 1 for unreadable or invalid input, 2 for
out-of-range parameters.
"""
from __future__ import annotations

import argparse
import csv
import sys
import time

import numpy as np

from . import engine, persist
from .candidates import ParameterError, check_eps
from .exact import build_graph, quickest_path
from .generate import random_network, random_point
from .network import Network, NetworkError, expand, load_network, parse_specs, validate
from .oracle import oracle_cost

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_PARAM = 2


def fmt(x: float) -> str:
    # shortest repr that round-trips, so 5.0 prints as 5.0 and never loses bits
    return repr(float(x))


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def _point(text: str):
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y but got {text!r}") from None
    if not (np.isfinite(x) and np.isfinite(y)):
        raise argparse.ArgumentTypeError(f"non-finite point {text!r}")
    return (x, y)


def _sizes(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="quickpath", description="Quickest paths in transportation networks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("validate", help="check a network file")
    v.add_argument("network")

    s = sub.add_parser("solve", help="exact quickest path between two points")
    s.add_argument("network")
    s.add_argument("--from", dest="source", type=_point, required=True)
    s.add_argument("--to", dest="target", type=_point, required=True)

    o = sub.add_parser("oracle", help="brute-force discretized cost")
    o.add_argument("network")
    o.add_argument("--from", dest="source", type=_point, required=True)
    o.add_argument("--to", dest="target", type=_point, required=True)
    o.add_argument("--samples", type=int, default=400)

    b = sub.add_parser("build-index", help="preprocess a query index and save it")
    b.add_argument("network")
    b.add_argument("--mode", choices=("fixed", "apsp", "wspd"), required=True)
    b.add_argument("--to", dest="target", type=_point)
    b.add_argument("--eps", type=float, required=True)
    b.add_argument("--tau", type=float)
    b.add_argument("--out", required=True)

    q = sub.add_parser("query", help="answer a query from a saved index")
    q.add_argument("index")
    q.add_argument("--from", dest="source", type=_point, required=True)
    q.add_argument("--to", dest="target", type=_point)
    q.add_argument("--eps", type=float, help="must match the index when given")

    bench = sub.add_parser("bench", help="CSV of graph sizes and timings")
    bench.add_argument("--sizes", type=_sizes, default=[5, 10, 20, 40])
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--queries", type=int, default=5)
    bench.add_argument("--eps", type=float, default=0.25)

    e = sub.add_parser("export-path", help="write the exact path as x,y,kind CSV")
    e.add_argument("network")
    e.add_argument("--from", dest="source", type=_point, required=True)
    e.add_argument("--to", dest="target", type=_point, required=True)
    e.add_argument("--out", required=True)
    return p


def _print_path(path, out) -> None:
    print(f"cost {fmt(path.cost)}", file=out)
    print(f"legs {len(path.legs)}", file=out)
    for leg in path.legs:
        road = "" if leg.road is None else f" road {leg.road}"
        print(
            f"{leg.kind} {fmt(leg.start.x)},{fmt(leg.start.y)} -> "
            f"{fmt(leg.end.x)},{fmt(leg.end.y)} cost {fmt(leg.cost)}{road}",
            file=out,
        )


def cmd_validate(args, out) -> int:
    with open(args.network, encoding="utf-8") as fh:
        specs = parse_specs(fh.read())
    net = Network(expand(specs), tuple(specs))
    violations = validate(net)
    if violations:
        for v in violations:
            print(f"violation {v.kind}: {v.message}", file=out)
        return EXIT_INPUT
    print(f"ok {len(specs)} records {len(net)} roads", file=out)
    if len(net):
        print(f"alpha_min {fmt(net.alpha_min)} alpha_max {fmt(net.alpha_max)}", file=out)
    return EXIT_OK


def cmd_solve(args, out) -> int:
    net = load_network(args.network)
    _print_path(quickest_path(net, args.source, args.target), out)
    return EXIT_OK


def cmd_oracle(args, out) -> int:
    if args.samples < 2:
        raise ParameterError("--samples must be at least 2")
    net = load_network(args.network)
    cost = oracle_cost(net, args.source, args.target, args.samples)
    print(f"oracle_cost {fmt(cost)} samples {args.samples}", file=out)
    return EXIT_OK


def cmd_build_index(args, out) -> int:
    check_eps(args.eps)
    if args.mode == "fixed" and args.target is None:
        raise ParameterError("fixed mode needs --to")
    if args.mode == "wspd":
        if args.tau is None:
            raise ParameterError("wspd mode needs --tau")
        check_eps(args.tau, "tau")
    net = load_network(args.network)
    t0 = time.perf_counter()
    if args.mode == "fixed":
        index = engine.build_fixed(net, args.target, args.eps)
    else:
        index = engine.build_two_point(net, args.eps, args.mode, args.tau)
    elapsed = time.perf_counter() - t0
    persist.save_index(index, args.out)
    print(f"index {args.mode} vertices {index.vertex_count} seconds {elapsed:.6f} -> {args.out}", file=out)
    return EXIT_OK


def cmd_query(args, out) -> int:
    if args.eps is not None:
        check_eps(args.eps)
    try:
        index = persist.load_index(args.index)
    except OSError as exc:
        raise InputError(str(exc)) from exc
    if args.eps is not None and args.eps != index.eps:
        raise ParameterError(f"--eps {args.eps!r} does not match the index eps {index.eps!r}")
    if isinstance(index, engine.FixedDestIndex):
        if args.target is not None and tuple(args.target) != tuple(index.target):
            raise ParameterError("--to differs from the index destination")
        ans = engine.query_fixed(index, args.source)
    else:
        if args.target is None:
            raise ParameterError("two-point index needs --to")
        ans = engine.query_two_point(index, args.source, args.target)
    kind = ans.candidate_kind if isinstance(ans.candidate_kind, str) else "+".join(ans.candidate_kind)
    print(f"cost {fmt(ans.cost)}", file=out)
    print(f"kind {kind}", file=out)
    if ans.witness is not None:
        print(f"legs {len(ans.witness.legs)}", file=out)
    return EXIT_OK


def cmd_bench(args, out) -> int:
    check_eps(args.eps)
    rng = np.random.default_rng(args.seed)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(
        ["roads", "vertices", "edges", "graph_seconds", "solve_seconds", "fixed_build_seconds", "fixed_query_seconds"]
    )
    for n in args.sizes:
        net = random_network(n, rng, max_length=8.0, clearance=0.1)
        s, t = random_point(rng), random_point(rng)
        t0 = time.perf_counter()
        g = build_graph(net, s, t)
        t1 = time.perf_counter()
        solve = 0.0
        for _ in range(args.queries):
            a, b = random_point(rng), random_point(rng)
            t2 = time.perf_counter()
            quickest_path(net, a, b)
            solve += time.perf_counter() - t2
        t3 = time.perf_counter()
        index = engine.build_fixed(net, t, args.eps)
        t4 = time.perf_counter()
        for _ in range(args.queries):
            engine.query_fixed(index, random_point(rng), witness=False)
        t5 = time.perf_counter()
        q = max(args.queries, 1)
        writer.writerow(
            [n, len(g.vertices), g.edge_count, f"{t1 - t0:.6f}", f"{solve / q:.6f}", f"{t4 - t3:.6f}", f"{(t5 - t4) / q:.6f}"]
        )
    return EXIT_OK


def cmd_export_path(args, out) -> int:
    net = load_network(args.network)
    path = quickest_path(net, args.source, args.target)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["x", "y", "kind"])
        for p, kind in path.polyline():
            writer.writerow([fmt(p.x), fmt(p.y), kind])
    print(f"cost {fmt(path.cost)} points {len(path.legs) + 1 if path.legs else 0} -> {args.out}", file=out)
    return EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "solve": cmd_solve,
    "oracle": cmd_oracle,
    "build-index": cmd_build_index,
    "query": cmd_query,
    "bench": cmd_bench,
    "export-path": cmd_export_path,
}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args, out)
    except ParameterError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PARAM
    except (InputError, NetworkError, persist.IndexFormatError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT


def main(argv=None) -> None:
    sys.exit(run(argv))
