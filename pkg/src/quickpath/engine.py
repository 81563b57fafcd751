"""Preprocessed approximate quickest-path queries.

Three index flavours share the candidate machinery of
:mod:`quickpath.candidates`:

* :func:`build_fixed` / :func:`query_fixed` -- destination known up front,
  one reverse shortest-path tree;
* :func:`build_two_point` with ``mode="apsp"`` -- full table between graph
  vertices;
* :func:`build_two_point` with ``mode="wspd"`` -- table only between the
  representatives of a well-separated pair decomposition of the vertices.

Table entries are true transportation distances between vertex locations:
the graph used for preprocessing is closed under the edges a free start or
end point would receive, and straight walks are folded in explicitly. That
makes the table a metric the query formulas and the pair-decomposition
estimate can lean on.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .candidates import (
    DESTINATION,
    SOURCE,
    ConeIndex,
    ParameterError,
    RoadBuckets,
    build_cone_index,
    build_road_buckets,
    check_eps,
    d1,
    d2,
)
from .exact import RIDE, WALK, GraphEdge, Leg, PathGraph, QuickestPath, build_graph, sssp
from .geometry import Point, dist
from .network import Network
from .wspd import PairList, SplitTree, build_split_tree, find_pair, wspd_pairs

DIRECT = "direct"
TYPE1 = "type1"
TYPE2 = "type2"

APSP = "apsp"
WSPD = "wspd"
MODES = (APSP, WSPD)


@dataclass(frozen=True)
class QueryAnswer:
    cost: float
    candidate_kind: Union[str, tuple[str, str]]
    witness: Optional[QuickestPath] = None
    via: tuple = ()


@dataclass
class _Anchors:
    """Graph vertices a free query point can be attached to."""

    locations: np.ndarray  # (V, 2) for every vertex id used below
    endpoint_vertex: list[int]  # cone-index point i -> vertex id
    sequences: list[tuple[list[float], list[int]]]  # per road, plain vertices only
    cones: ConeIndex
    buckets: RoadBuckets

    def loc(self, v: int) -> Point:
        return Point(float(self.locations[v, 0]), float(self.locations[v, 1]))

    def param(self, road: int, v: int) -> float:
        params, ids = self.sequences[road]
        return params[ids.index(v)]


def _endpoint_vertices(sequences) -> list[int]:
    seen: dict[int, None] = {}
    for params, ids in sequences:
        seen.setdefault(ids[0], None)
        seen.setdefault(ids[-1], None)
    return list(seen)


def _make_anchors(net: Network, g: PathGraph, eps: float, locations: np.ndarray) -> _Anchors:
    sequences = []
    for r in net.roads:
        seq = g.base_sequence(r.id)
        sequences.append(([p for p, _ in seq], [v for _, v in seq]))
    endpoint_vertex = _endpoint_vertices(sequences)
    cones = build_cone_index(locations[endpoint_vertex] if endpoint_vertex else [], eps)
    return _Anchors(locations, endpoint_vertex, sequences, cones, build_road_buckets(net, eps))


def _source_candidates(net: Network, anchors: _Anchors, s) -> list[tuple[str, int, float, object]]:
    """``(kind, vertex, cost from s to vertex, detail)`` for every candidate."""
    out = []
    for _, pi in d1(anchors.cones, s):
        v = anchors.endpoint_vertex[pi]
        out.append((TYPE1, v, dist(s, anchors.loc(v)), None))
    for tup in d2(anchors.buckets, net, anchors.sequences, s, SOURCE):
        r = net.roads[tup.road]
        ride = r.alpha * (anchors.param(tup.road, tup.next_vertex) - tup.hit_param)
        out.append((TYPE2, tup.next_vertex, dist(s, tup.hit) + ride, tup))
    return out


def _target_candidates(net: Network, anchors: _Anchors, t) -> list[tuple[str, int, float, object]]:
    out = []
    for _, pi in d1(anchors.cones, t):
        v = anchors.endpoint_vertex[pi]
        out.append((TYPE1, v, dist(anchors.loc(v), t), None))
    for tup in d2(anchors.buckets, net, anchors.sequences, t, DESTINATION):
        r = net.roads[tup.road]
        ride = r.alpha * (tup.hit_param - anchors.param(tup.road, tup.next_vertex))
        out.append((TYPE2, tup.next_vertex, ride + dist(tup.hit, t), tup))
    return out


# --------------------------------------------------------------------------
# fixed destination


@dataclass
class FixedDestIndex:
    network: Network
    target: Point
    eps: float
    target_vertex: int
    cost_to_target: np.ndarray  # per vertex
    next_hop: list[Optional[GraphEdge]]  # per vertex, first edge towards the target
    anchors: _Anchors
    graph: Optional[PathGraph] = field(default=None, repr=False)

    @property
    def vertex_count(self) -> int:
        return len(self.cost_to_target)


def build_fixed(net: Network, t, eps: float) -> FixedDestIndex:
    eps = check_eps(eps)
    t = Point(float(t[0]), float(t[1]))
    g = build_graph(net, t=t, closure=True, closure_targets=False, direct_to_target=True)
    d, pred = sssp(g, g.target, reversed=True)
    anchors = _make_anchors(net, g, eps, g.locations())
    return FixedDestIndex(net, t, eps, g.target, np.asarray(d, dtype=float), pred, anchors, g)


def _path_to_target(index: FixedDestIndex, v: int) -> list[GraphEdge]:
    edges = []
    while index.next_hop[v] is not None:
        e = index.next_hop[v]
        edges.append(e)
        v = e.target
    return edges


def _legs(locations, first: list[Leg], edges: list[GraphEdge]) -> tuple[Leg, ...]:
    legs = [leg for leg in first if not (leg.kind == WALK and leg.cost == 0.0)]
    for e in edges:
        a = Point(float(locations[e.source, 0]), float(locations[e.source, 1]))
        c = Point(float(locations[e.target, 0]), float(locations[e.target, 1]))
        if e.kind == WALK and e.weight == 0.0:
            continue
        if e.kind == RIDE and legs and legs[-1].kind == RIDE and legs[-1].road == e.road:
            prev = legs[-1]
            legs[-1] = Leg(RIDE, prev.start, c, prev.cost + e.weight, e.road)
        else:
            legs.append(Leg(e.kind, a, c, e.weight, e.road))
    return tuple(legs)


def query_fixed(index: FixedDestIndex, s, *, witness: bool = True) -> QueryAnswer:
    """(1 + eps)-approximate quickest path from ``s`` to the index target."""
    s = Point(float(s[0]), float(s[1]))
    t = index.target
    M = index.cost_to_target
    best_cost = dist(s, t)
    best = (DIRECT, None, None)
    for kind, v, prefix, tup in _source_candidates(index.network, index.anchors, s):
        c = prefix + M[v]
        if c < best_cost:
            best_cost = float(c)
            best = (kind, v, tup)
    kind, v, tup = best
    path = None
    if witness:
        if kind == DIRECT:
            first = [Leg(WALK, s, t, best_cost)]
            edges = []
        else:
            loc = index.anchors.loc(v)
            if kind == TYPE1:
                first = [Leg(WALK, s, loc, dist(s, loc))]
            else:
                r = index.network.roads[tup.road]
                ride = r.alpha * (index.anchors.param(tup.road, v) - tup.hit_param)
                first = [Leg(WALK, s, tup.hit, dist(s, tup.hit)), Leg(RIDE, tup.hit, loc, ride, tup.road)]
            edges = _path_to_target(index, v)
        path = QuickestPath(best_cost, _legs(index.anchors.locations, first, edges))
    return QueryAnswer(best_cost, kind, path, () if v is None else (v,))


# --------------------------------------------------------------------------
# two-point queries


@dataclass
class TwoPointIndex:
    network: Network
    eps: float
    mode: str
    tau: Optional[float]
    anchors: _Anchors
    table: Optional[np.ndarray] = None  # apsp: (B, B)
    tree: Optional[SplitTree] = None
    pairs: Optional[PairList] = None
    pair_costs: Optional[np.ndarray] = None  # wspd: (P, 2) rep_a->rep_b, rep_b->rep_a
    sssp_sources: int = 0
    _memo: dict = field(default_factory=dict, repr=False)

    @property
    def vertex_count(self) -> int:
        return len(self.anchors.locations)

    @property
    def separation(self) -> Optional[float]:
        return None if self.pairs is None else self.pairs.separation


def _closure_distances(net: Network, sources: list[int], chunk: int = 64):
    """Transportation distances from each source vertex to every plain vertex."""
    from scipy.sparse.csgraph import dijkstra

    g = build_graph(net, closure=True, closure_targets=True)
    B = g.base_count
    locs = g.locations()[:B]
    out = np.empty((len(sources), B))
    if B == 0:
        return g, out
    csr = g.to_csr()
    for lo in range(0, len(sources), chunk):
        idx = sources[lo : lo + chunk]
        rows = dijkstra(csr, directed=True, indices=idx)[:, :B]
        direct = np.hypot(locs[None, :, 0] - locs[idx, 0][:, None], locs[None, :, 1] - locs[idx, 1][:, None])
        out[lo : lo + len(idx)] = np.minimum(rows, direct)
    return g, out


def separation_for(tau: float, alpha_min: float) -> float:
    return 8.0 / (tau * alpha_min)


def build_two_point(net: Network, eps: float, mode: str = APSP, tau: Optional[float] = None) -> TwoPointIndex:
    eps = check_eps(eps)
    if mode not in MODES:
        raise ParameterError(f"mode must be one of {MODES}, got {mode!r}")
    if mode == WSPD:
        if tau is None:
            raise ParameterError("wspd mode needs tau")
        tau = check_eps(tau, "tau")
    g = build_graph(net)
    B = len(g.vertices)
    locs = g.locations()
    anchors = _make_anchors(net, g, eps, locs)
    if mode == APSP:
        _, table = _closure_distances(net, list(range(B)))
        return TwoPointIndex(net, eps, mode, tau, anchors, table=table, sssp_sources=B)
    index = TwoPointIndex(net, eps, mode, tau, anchors)
    if B == 0:
        return index
    tree = build_split_tree(locs)
    pairs = wspd_pairs(tree, separation_for(tau, net.alpha_min))
    reps = sorted({r for p in pairs.pairs for r in (p.rep_a, p.rep_b)})
    _, rows = _closure_distances(net, reps)
    row_of = {r: k for k, r in enumerate(reps)}
    costs = np.empty((len(pairs), 2))
    for k, p in enumerate(pairs.pairs):
        costs[k, 0] = rows[row_of[p.rep_a], p.rep_b]
        costs[k, 1] = rows[row_of[p.rep_b], p.rep_a]
    index.tree = tree
    index.pairs = pairs
    index.pair_costs = costs
    index.sssp_sources = len(reps)
    return index


def estimate_wspd(index: TwoPointIndex, p: int, q: int) -> float:
    """``|p r_A| + M'[r_A, r_B] + |r_B q|`` for the pair covering ``p``, ``q``."""
    if index.mode != WSPD:
        raise ParameterError("estimate_wspd needs a wspd-mode index")
    if p == q:
        return 0.0
    key = (p, q)
    hit = index._memo.get(key)
    if hit is not None:
        return hit
    tree, pairs = index.tree, index.pairs
    if tree.leaf_of[p] == tree.leaf_of[q]:
        index._memo[key] = 0.0
        return 0.0
    k, p_first = find_pair(pairs, tree, p, q)
    pr = pairs.pairs[k]
    loc = index.anchors.loc
    if p_first:
        val = dist(loc(p), loc(pr.rep_a)) + index.pair_costs[k, 0] + dist(loc(pr.rep_b), loc(q))
    else:
        val = dist(loc(p), loc(pr.rep_b)) + index.pair_costs[k, 1] + dist(loc(pr.rep_a), loc(q))
    val = float(val)
    index._memo[key] = val
    return val


def vertex_distance(index: TwoPointIndex, p: int, q: int) -> float:
    if index.mode == APSP:
        return float(index.table[p, q])
    return estimate_wspd(index, p, q)


def query_two_point(index: TwoPointIndex, s, t) -> QueryAnswer:
    """Approximate quickest path between two free points."""
    s = Point(float(s[0]), float(s[1]))
    t = Point(float(t[0]), float(t[1]))
    best_cost = dist(s, t)
    answer = QueryAnswer(best_cost, DIRECT)
    src = _source_candidates(index.network, index.anchors, s)
    dst = _target_candidates(index.network, index.anchors, t)
    if not src or not dst:
        return answer
    pv = np.array([c[1] for c in src])
    qv = np.array([c[1] for c in dst])
    pre = np.array([c[2] for c in src])
    suf = np.array([c[2] for c in dst])
    if index.mode == APSP:
        mid = index.table[np.ix_(pv, qv)]
    else:
        mid = np.array([[estimate_wspd(index, int(a), int(b)) for b in qv] for a in pv])
    total = (pre[:, None] + mid) + suf[None, :]
    flat = int(np.argmin(total))
    i, j = divmod(flat, total.shape[1])
    if total[i, j] < best_cost:
        via = (int(pv[i]), int(qv[j]))
        if index.mode == WSPD and via[0] != via[1]:
            k, first = find_pair(index.pairs, index.tree, via[0], via[1])
            pr = index.pairs.pairs[k]
            via = via + ((pr.rep_a, pr.rep_b) if first else (pr.rep_b, pr.rep_a))
        answer = QueryAnswer(float(total[i, j]), (src[i][0], dst[j][0]), None, via)
    return answer
