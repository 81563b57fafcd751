"""Exact quickest paths through the road-projection graph.

The graph joins every road endpoint to the points where a straight walk would
optimally enter or leave each other road, chains the vertices on each road
with riding edges, and attaches the free points ``s`` and ``t``. One Dijkstra
run over it gives the exact transportation distance.
"""
from __future__ import annotations

import bisect
import heapq
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .geometry import EPS_GEOM, Point, dist, project_entry, project_exit, segment_param
from .network import Network

WALK = "walk"
RIDE = "ride"

FREE_S = "s"
FREE_T = "t"
ON_ROAD = "road"


@dataclass(frozen=True)
class Placement:
    kind: str
    road: Optional[int] = None
    param: Optional[float] = None


@dataclass(frozen=True)
class GraphVertex:
    id: int
    location: Point
    placement: Placement


@dataclass(frozen=True)
class GraphEdge:
    source: int
    target: int
    weight: float
    kind: str
    road: Optional[int] = None


@dataclass
class PathGraph:
    """Directed weighted graph over located vertices.

    ``road_sequences[r]`` lists ``(param, vertex id)`` along road ``r`` from
    its start point; a shared endpoint vertex appears in several sequences.
    Vertices with id below ``base_count`` form the plain construction; any
    vertices after that were added by the closure stage.
    """

    vertices: list[GraphVertex]
    adjacency: list[list[GraphEdge]]
    road_sequences: list[list[tuple[float, int]]]
    source: Optional[int] = None
    target: Optional[int] = None
    base_count: int = 0
    _reverse: Optional[list[list[GraphEdge]]] = field(default=None, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency)

    def edges(self):
        for adj in self.adjacency:
            yield from adj

    def reverse_adjacency(self) -> list[list[GraphEdge]]:
        if self._reverse is None:
            rev: list[list[GraphEdge]] = [[] for _ in self.vertices]
            for e in self.edges():
                rev[e.target].append(e)
            for lst in rev:
                lst.sort(key=lambda e: e.source)
            self._reverse = rev
        return self._reverse

    def base_sequence(self, road: int) -> list[tuple[float, int]]:
        return [(p, v) for p, v in self.road_sequences[road] if v < self.base_count]

    def to_csr(self):
        """Sparse matrix of the graph; parallel edges collapse to the lightest."""
        from scipy.sparse import csr_matrix

        best: dict[tuple[int, int], float] = {}
        for e in self.edges():
            key = (e.source, e.target)
            w = best.get(key)
            if w is None or e.weight < w:
                best[key] = e.weight
        n = len(self.vertices)
        if not best:
            return csr_matrix((n, n))
        keys = np.array(list(best.keys()), dtype=np.int64)
        weights = np.array(list(best.values()), dtype=float)
        return csr_matrix((weights, (keys[:, 0], keys[:, 1])), shape=(n, n))

    def locations(self) -> np.ndarray:
        return np.array([v.location for v in self.vertices], dtype=float).reshape(-1, 2)


@dataclass(frozen=True)
class Leg:
    kind: str
    start: Point
    end: Point
    cost: float
    road: Optional[int] = None


@dataclass(frozen=True)
class QuickestPath:
    cost: float
    legs: tuple[Leg, ...]

    def polyline(self) -> list[tuple[Point, str]]:
        if not self.legs:
            return []
        out = [(self.legs[0].start, "start")]
        for leg in self.legs:
            out.append((leg.end, leg.kind))
        return out


class _Builder:
    def __init__(self, net: Network):
        self.net = net
        self.roads = net.roads
        self.lengths = [r.length for r in self.roads]
        self.free: dict[str, Point] = {}
        self.requests: list[list[float]] = [[] for _ in self.roads]
        self.walks: list[tuple[tuple, tuple]] = []

    # handles: ("free", name) | ("road", road, param)
    def free_point(self, name: str, p) -> tuple:
        self.free[name] = Point(float(p[0]), float(p[1]))
        return ("free", name)

    def road_point(self, road: int, param: float) -> tuple:
        param = min(max(param, 0.0), self.lengths[road])
        self.requests[road].append(param)
        return ("road", road, param)

    def start(self, road: int) -> tuple:
        return self.road_point(road, 0.0)

    def end(self, road: int) -> tuple:
        return self.road_point(road, self.lengths[road])

    def projection(self, road: int, p, entry: bool) -> Optional[tuple]:
        r = self.roads[road]
        q = (project_entry if entry else project_exit)(p, r.u, r.v, r.alpha)
        if q is None:
            return None
        return self.road_point(road, segment_param(q, r.u, r.v))

    def walk(self, a: tuple, b: tuple) -> None:
        self.walks.append((a, b))


def _cluster_endpoints(roads) -> tuple[list[Point], dict[tuple[int, int], int]]:
    """Group road endpoints that coincide; returns group locations and a map
    from (road, 0 for start | 1 for end) to group index, in road order."""
    locs: list[Point] = []
    index: dict[tuple[int, int], int] = {}
    for r in roads:
        for end, p in ((0, r.u), (1, r.v)):
            for g, q in enumerate(locs):
                if dist(p, q) <= EPS_GEOM:
                    index[(r.id, end)] = g
                    break
            else:
                index[(r.id, end)] = len(locs)
                locs.append(Point(float(p[0]), float(p[1])))
    return locs, index


class _Resolver:
    """Turns builder handles into vertex ids, merging near-coincident points."""

    def __init__(self, net: Network, free: dict[str, Point]):
        self.net = net
        self.vertices: list[GraphVertex] = []
        self.free_ids: dict[str, int] = {}
        for name in (FREE_S, FREE_T):
            if name in free:
                self.free_ids[name] = self._add(free[name], Placement(name))
        self.lengths = [r.length for r in net.roads]
        locs, self.endpoint_group = _cluster_endpoints(net.roads)
        self.group_vertex = []
        for g, p in enumerate(locs):
            owner = next(k for k, v in self.endpoint_group.items() if v == g)
            road, end = owner
            param = 0.0 if end == 0 else self.lengths[road]
            self.group_vertex.append(self._add(p, Placement(ON_ROAD, road, param)))
        # reversed twins (both directions of an undirected road) share vertices
        self.twin: dict[int, int] = {}
        for a in net.roads:
            for c in net.roads:
                if a.id != c.id and dist(a.u, c.v) <= EPS_GEOM and dist(a.v, c.u) <= EPS_GEOM:
                    self.twin.setdefault(a.id, c.id)
        # per road: sorted params and matching vertex ids
        self.seq_params: list[list[float]] = []
        self.seq_ids: list[list[int]] = []
        for r in net.roads:
            self.seq_params.append([0.0, self.lengths[r.id]])
            self.seq_ids.append(
                [
                    self.group_vertex[self.endpoint_group[(r.id, 0)]],
                    self.group_vertex[self.endpoint_group[(r.id, 1)]],
                ]
            )

    def _add(self, p: Point, placement: Placement) -> int:
        vid = len(self.vertices)
        self.vertices.append(GraphVertex(vid, p, placement))
        return vid

    def _lookup(self, road: int, param: float) -> Optional[int]:
        params = self.seq_params[road]
        i = bisect.bisect_left(params, param)
        best = None
        for j in (i - 1, i):
            if 0 <= j < len(params) and abs(params[j] - param) <= EPS_GEOM:
                if best is None or params[j] < params[best]:
                    best = j
        return None if best is None else self.seq_ids[road][best]

    def absorb(self, requests: list[list[float]]) -> None:
        """Create vertices for requested road params not already present.

        Existing vertices win; new params within EPS_GEOM of each other are
        merged onto the smallest of them.
        """
        for road, params in enumerate(requests):
            fresh = []
            for p in sorted(set(params)):
                if self._lookup(road, p) is None:
                    if fresh and p - fresh[-1] <= EPS_GEOM:
                        continue
                    fresh.append(p)
            r = self.net.roads[road]
            for p in fresh:
                vid = self._add(r.point_at(p), Placement(ON_ROAD, road, p))
                self._insert(road, p, vid)
                twin = self.twin.get(road)
                if twin is not None:
                    self._insert(twin, max(self.lengths[twin] - p, 0.0), vid)

    def _insert(self, road: int, p: float, vid: int) -> None:
        i = bisect.bisect_left(self.seq_params[road], p)
        self.seq_params[road].insert(i, p)
        self.seq_ids[road].insert(i, vid)

    def resolve(self, handle: tuple) -> int:
        if handle[0] == "free":
            return self.free_ids[handle[1]]
        _, road, param = handle
        vid = self._lookup(road, param)
        if vid is None:
            # merged onto a smaller param of the same cluster
            params = self.seq_params[road]
            i = bisect.bisect_right(params, param) - 1
            vid = self.seq_ids[road][max(i, 0)]
        return vid


def _base_requests(b: _Builder, s, t) -> None:
    roads = b.roads
    n = len(roads)
    hs = b.free_point(FREE_S, s) if s is not None else None
    ht = b.free_point(FREE_T, t) if t is not None else None
    for r in roads:
        b.start(r.id)
        b.end(r.id)
    if hs is not None:
        for j in range(n):
            q = b.projection(j, s, entry=True)
            if q is not None:
                b.walk(hs, q)
            b.walk(hs, b.start(j))
    if ht is not None:
        for i in range(n):
            q = b.projection(i, t, entry=False)
            if q is not None:
                b.walk(q, ht)
            b.walk(b.end(i), ht)
    if hs is not None and ht is not None:
        b.walk(hs, ht)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            rj = roads[j]
            for endpoint, handle in ((rj.u, b.start(j)), (rj.v, b.end(j))):
                q = b.projection(i, endpoint, entry=True)
                if q is not None:
                    b.walk(handle, q)
                q = b.projection(i, endpoint, entry=False)
                if q is not None:
                    b.walk(q, handle)
            b.walk(b.end(i), b.start(j))


def build_graph(
    net: Network,
    s=None,
    t=None,
    *,
    closure: bool = False,
    closure_targets: bool = True,
    direct_to_target: bool = False,
) -> PathGraph:
    """Build the quickest-path graph of ``net`` with optional free points.

    With ``closure=True`` every plain vertex additionally gets the edges a
    free start point would get (walks to each road start and to each entry
    projection); ``closure_targets`` adds the mirrored free-destination edges
    too. Distances between plain vertices are then true transportation
    distances, except for pure straight walks, which callers fold in
    themselves. ``direct_to_target`` adds a straight walk from every plain
    vertex to ``t``.
    """
    b = _Builder(net)
    _base_requests(b, s, t)
    res = _Resolver(net, b.free)
    res.absorb(b.requests)
    walks = [(res.resolve(x), res.resolve(y)) for x, y in b.walks]
    base_count = len(res.vertices)

    if closure:
        cb = _Builder(net)
        pending: list[tuple[int, tuple, bool]] = []
        for x in range(base_count):
            vx = res.vertices[x]
            if vx.placement.kind == FREE_T:
                continue
            p = vx.location
            for j, r in enumerate(net.roads):
                q = cb.projection(j, p, entry=True)
                if q is not None:
                    pending.append((x, q, True))
                if closure_targets and vx.placement.kind != FREE_S:
                    q = cb.projection(j, p, entry=False)
                    if q is not None:
                        pending.append((x, q, False))
                    walks.append((res.resolve(("road", j, res.lengths[j])), x))
                walks.append((x, res.resolve(("road", j, 0.0))))
        res.absorb(cb.requests)
        for x, q, outgoing in pending:
            y = res.resolve(q)
            walks.append((x, y) if outgoing else (y, x))

    if direct_to_target and t is not None:
        tid = res.free_ids[FREE_T]
        for x in range(base_count):
            if x != tid:
                walks.append((x, tid))

    return _assemble(net, res, walks, base_count)


def _assemble(net: Network, res: _Resolver, walks, base_count: int) -> PathGraph:
    verts = res.vertices
    best: dict[tuple[int, int, str], GraphEdge] = {}
    for a, c in walks:
        if a == c:
            continue
        w = dist(verts[a].location, verts[c].location)
        key = (a, c, WALK)
        if key not in best or w < best[key].weight:
            best[key] = GraphEdge(a, c, w, WALK)
    sequences = []
    for r in net.roads:
        params = res.seq_params[r.id]
        ids = res.seq_ids[r.id]
        sequences.append(list(zip(params, ids)))
        for k in range(len(ids) - 1):
            a, c = ids[k], ids[k + 1]
            w = r.alpha * (params[k + 1] - params[k])
            key = (a, c, RIDE)
            if key not in best or w < best[key].weight:
                best[key] = GraphEdge(a, c, w, RIDE, r.id)
    adjacency: list[list[GraphEdge]] = [[] for _ in verts]
    for e in best.values():
        adjacency[e.source].append(e)
    for lst in adjacency:
        lst.sort(key=lambda e: (e.target, e.kind))
    return PathGraph(
        vertices=verts,
        adjacency=adjacency,
        road_sequences=sequences,
        source=res.free_ids.get(FREE_S),
        target=res.free_ids.get(FREE_T),
        base_count=base_count,
    )


def sssp(g: PathGraph, source: int, reversed: bool = False):
    """Dijkstra from ``source`` (or towards it when ``reversed``).

    Returns ``(dist, pred)``. ``pred[v]`` is the tree edge entering ``v`` in
    the forward case and the tree edge leaving ``v`` towards ``source`` in the
    reversed case. Unreachable vertices keep ``math.inf``. Equal keys pop in
    ascending vertex id.
    """
    n = len(g.vertices)
    d = [math.inf] * n
    pred: list[Optional[GraphEdge]] = [None] * n
    done = [False] * n
    d[source] = 0.0
    heap = [(0.0, source)]
    adj = g.reverse_adjacency() if reversed else g.adjacency
    while heap:
        du, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for e in adj[u]:
            v = e.source if reversed else e.target
            nd = du + e.weight
            if nd < d[v]:
                d[v] = nd
                pred[v] = e
                heapq.heappush(heap, (nd, v))
    return d, pred


def walk_edges_to_legs(g: PathGraph, edges: list[GraphEdge]) -> list[Leg]:
    """Merge consecutive same-road rides and drop zero-length walks."""
    legs: list[Leg] = []
    for e in edges:
        a = g.vertices[e.source].location
        c = g.vertices[e.target].location
        if e.kind == WALK and e.weight == 0.0:
            continue
        if e.kind == RIDE and legs and legs[-1].kind == RIDE and legs[-1].road == e.road:
            prev = legs[-1]
            legs[-1] = Leg(RIDE, prev.start, c, prev.cost + e.weight, e.road)
        else:
            legs.append(Leg(e.kind, a, c, e.weight, e.road))
    return legs


def _tree_path(pred, target: int) -> list[GraphEdge]:
    edges = []
    v = target
    while pred[v] is not None:
        e = pred[v]
        edges.append(e)
        v = e.source
    edges.reverse()
    return edges


def quickest_path(net: Network, s, t) -> QuickestPath:
    """Exact minimum transportation distance from ``s`` to ``t`` with a witness."""
    g = build_graph(net, s, t)
    d, pred = sssp(g, g.source)
    edges = _tree_path(pred, g.target)
    legs = walk_edges_to_legs(g, edges)
    return QuickestPath(d[g.target], tuple(legs))


def graph_size(net: Network, s=None, t=None) -> tuple[int, int]:
    g = build_graph(net, s, t)
    return len(g.vertices), g.edge_count
