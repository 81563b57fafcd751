"""Reading and writing query indices in the ``qpx v1`` text format.

Every real is written with 17 significant digits so a loaded index answers
queries bit-identically to the one that was saved. Cone and bucket structures
are rebuilt from the embedded network; the split tree of a wspd index is
rebuilt from the vertex table and checked against the stored node count.
"""
from __future__ import annotations

from typing import Union

import numpy as np

from .engine import (
    APSP,
    WSPD,
    FixedDestIndex,
    TwoPointIndex,
    _Anchors,
)
from .candidates import build_cone_index, build_road_buckets
from .exact import GraphEdge
from .geometry import Point
from .network import fmt, network_hash, parse_network, serialize_network
from .wspd import PairList, WSPair, build_split_tree

HEADER = "qpx v1"
FIXED = "fixed"

Index = Union[FixedDestIndex, TwoPointIndex]


class IndexFormatError(ValueError):
    pass


def _anchor_lines(anchors: _Anchors) -> list[str]:
    out = [f"vertices {len(anchors.locations)}"]
    out += [f"{fmt(x)} {fmt(y)}" for x, y in anchors.locations]
    out.append(f"sequences {len(anchors.sequences)}")
    for road, (params, ids) in enumerate(anchors.sequences):
        body = " ".join(f"{fmt(p)} {v}" for p, v in zip(params, ids))
        out.append(f"{road} {len(ids)} {body}".rstrip())
    return out


def dumps(index: Index) -> str:
    net = index.network
    mode = FIXED if isinstance(index, FixedDestIndex) else index.mode
    tau = getattr(index, "tau", None)
    lines = [
        HEADER,
        f"mode {mode}",
        f"network_sha256 {network_hash(net)}",
        f"eps {fmt(index.eps)}",
        f"tau {'-' if tau is None else fmt(tau)}",
    ]
    if mode == FIXED:
        lines.append(f"target {fmt(index.target.x)} {fmt(index.target.y)}")
    net_lines = serialize_network(net).splitlines()
    lines.append(f"network {len(net_lines)}")
    lines += net_lines
    lines += _anchor_lines(index.anchors)
    if mode == FIXED:
        lines.append(f"target_vertex {index.target_vertex}")
        lines.append("cost")
        lines += [fmt(c) for c in index.cost_to_target]
        lines.append("next")
        for e in index.next_hop:
            if e is None:
                lines.append("-")
            else:
                road = "-" if e.road is None else str(e.road)
                lines.append(f"{e.target} {e.kind} {road} {fmt(e.weight)}")
    elif mode == APSP:
        lines.append(f"table {index.table.shape[0]}")
        lines += [" ".join(fmt(x) for x in row) for row in index.table]
    else:
        n_nodes = 0 if index.tree is None else len(index.tree.nodes)
        n_pairs = 0 if index.pairs is None else len(index.pairs)
        sep = fmt(index.separation) if index.pairs is not None else "-"
        lines.append(f"tree_nodes {n_nodes}")
        lines.append(f"pairs {n_pairs} {sep}")
        for k in range(n_pairs):
            p = index.pairs.pairs[k]
            ab, ba = index.pair_costs[k]
            lines.append(f"{p.a} {p.b} {p.rep_a} {p.rep_b} {fmt(ab)} {fmt(ba)}")
    lines.append(f"sssp_sources {getattr(index, 'sssp_sources', 1)}")
    return "\n".join(lines) + "\n"


def save_index(index: Index, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(index))


class _Reader:
    def __init__(self, text: str):
        self.lines = text.splitlines()
        self.pos = 0

    def next(self) -> str:
        if self.pos >= len(self.lines):
            raise IndexFormatError("unexpected end of index file")
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def field(self, name: str) -> list[str]:
        parts = self.next().split()
        if not parts or parts[0] != name:
            raise IndexFormatError(f"line {self.pos}: expected {name!r}")
        return parts[1:]


def loads(text: str) -> Index:
    rd = _Reader(text)
    if rd.next().strip() != HEADER:
        raise IndexFormatError(f"missing header {HEADER!r}")
    try:
        return _load_body(rd)
    except (ValueError, IndexError) as exc:
        if isinstance(exc, IndexFormatError):
            raise
        raise IndexFormatError(f"line {rd.pos}: {exc}") from exc


def _load_body(rd: _Reader) -> Index:
    (mode,) = rd.field("mode")
    (digest,) = rd.field("network_sha256")
    eps = float(rd.field("eps")[0])
    tau_tok = rd.field("tau")[0]
    tau = None if tau_tok == "-" else float(tau_tok)
    target = None
    if mode == FIXED:
        tx, ty = rd.field("target")
        target = Point(float(tx), float(ty))
    n_net = int(rd.field("network")[0])
    net = parse_network("\n".join(rd.next() for _ in range(n_net)))
    if network_hash(net) != digest:
        raise IndexFormatError("network hash mismatch")
    n_v = int(rd.field("vertices")[0])
    locs = np.array([[float(t) for t in rd.next().split()] for _ in range(n_v)], dtype=float).reshape(-1, 2)
    n_seq = int(rd.field("sequences")[0])
    sequences = []
    for _ in range(n_seq):
        parts = rd.next().split()
        count = int(parts[1])
        body = parts[2:]
        sequences.append(([float(body[2 * i]) for i in range(count)], [int(body[2 * i + 1]) for i in range(count)]))
    seen: dict[int, None] = {}
    for params, ids in sequences:
        seen.setdefault(ids[0], None)
        seen.setdefault(ids[-1], None)
    endpoint_vertex = list(seen)
    cones = build_cone_index(locs[endpoint_vertex] if endpoint_vertex else [], eps)
    anchors = _Anchors(locs, endpoint_vertex, sequences, cones, build_road_buckets(net, eps))

    if mode == FIXED:
        tv = int(rd.field("target_vertex")[0])
        rd.field("cost")
        cost = np.array([float(rd.next()) for _ in range(n_v)])
        rd.field("next")
        hops = []
        for v in range(n_v):
            parts = rd.next().split()
            if parts == ["-"]:
                hops.append(None)
            else:
                road = None if parts[2] == "-" else int(parts[2])
                hops.append(GraphEdge(v, int(parts[0]), float(parts[3]), parts[1], road))
        index = FixedDestIndex(net, target, eps, tv, cost, hops, anchors)
    elif mode == APSP:
        n = int(rd.field("table")[0])
        table = np.array([[float(t) for t in rd.next().split()] for _ in range(n)], dtype=float).reshape(n, n)
        index = TwoPointIndex(net, eps, mode, tau, anchors, table=table)
    elif mode == WSPD:
        n_nodes = int(rd.field("tree_nodes")[0])
        parts = rd.field("pairs")
        n_pairs = int(parts[0])
        sep = None if parts[1] == "-" else float(parts[1])
        index = TwoPointIndex(net, eps, mode, tau, anchors)
        if n_v:
            tree = build_split_tree(locs)
            if len(tree.nodes) != n_nodes:
                raise IndexFormatError("split tree does not match stored node count")
            pairs, costs = [], np.empty((n_pairs, 2))
            for k in range(n_pairs):
                a, b, ra, rb, ab, ba = rd.next().split()
                pairs.append(WSPair(int(a), int(b), int(ra), int(rb)))
                costs[k] = float(ab), float(ba)
            pl = PairList(pairs, sep)
            for k, p in enumerate(pairs):
                pl.by_nodes[(p.a, p.b)] = k
            index.tree, index.pairs, index.pair_costs = tree, pl, costs
    else:
        raise IndexFormatError(f"unknown mode {mode!r}")
    (sources,) = rd.field("sssp_sources")
    if not isinstance(index, FixedDestIndex):
        index.sssp_sources = int(sources)
    return index


def load_index(path) -> Index:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())
