"""Candidate first/last vertices for approximate queries.

Two kinds of candidates connect a free query point to the preprocessed graph:

* type 1: road endpoints, one per cone around the query point, chosen as the
  endpoint whose projection onto the cone bisector is nearest the apex;
* type 2: interior road points reached by shooting rays at the optimal
  entry (or exit) angle of each orientation/weight bucket of roads.

Both structures answer by linear scans over their point or road sets; the
answers are identical to those of the logarithmic-time structures.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .geometry import EPS_GEOM, TWO_PI, Point, normalize_angle, ray_hit_param, segment_param
from .network import Network

SOURCE = "source"
DESTINATION = "destination"


class ParameterError(ValueError):
    """Raised for approximation parameters outside their allowed range."""


def check_eps(eps: float, name: str = "eps") -> float:
    eps = float(eps)
    if not (0.0 < eps < 1.0):
        raise ParameterError(f"{name} must lie in (0, 1), got {eps!r}")
    return eps


def cone_count(eps: float) -> int:
    return max(9, math.ceil(36.0 * math.pi / eps))


@dataclass(frozen=True)
class ConeIndex:
    k: int
    points: np.ndarray  # (m, 2)

    @property
    def width(self) -> float:
        return TWO_PI / self.k

    def axis(self, cone: int) -> float:
        """Bisector direction of ``cone``."""
        return (cone + 0.5) * self.width


def build_cone_index(endpoints, eps: float) -> ConeIndex:
    eps = check_eps(eps)
    pts = np.asarray(list(endpoints), dtype=float).reshape(-1, 2)
    return ConeIndex(cone_count(eps), pts)


def cone_of(index: ConeIndex, dx: float, dy: float) -> int:
    """Cone holding direction ``(dx, dy)``; boundary directions go to the
    lower-indexed of the two cones."""
    if dx == 0.0 and dy == 0.0:
        return 0
    a = normalize_angle(math.atan2(dy, dx))
    c = math.ceil(a / index.width) - 1
    if c < 0:
        c = 0
    return min(c, index.k - 1)


def d1(index: ConeIndex, q) -> list[tuple[int, int]]:
    """Type-1 candidates as ``(cone, point index)`` pairs in cone order."""
    best: dict[int, tuple[float, int]] = {}
    for i, (px, py) in enumerate(index.points):
        dx, dy = px - q[0], py - q[1]
        c = cone_of(index, dx, dy)
        a = index.axis(c)
        proj = dx * math.cos(a) + dy * math.sin(a)
        cur = best.get(c)
        if cur is None or proj < cur[0]:
            best[c] = (proj, i)
    return [(c, best[c][1]) for c in sorted(best)]


@dataclass(frozen=True)
class TupleD2:
    road: int
    hit: Point
    hit_param: float
    next_vertex: int


@dataclass
class RoadBuckets:
    """Roads partitioned by orientation and by weight."""

    eps: float
    theta: float
    alpha_min: float
    alpha_max: float
    m: int
    b: int
    buckets: dict[tuple[int, int], list[int]] = field(default_factory=dict)

    @property
    def orientation_width(self) -> float:
        return self.theta * self.alpha_min

    def reference_weight(self, j: int) -> float:
        return self.alpha_min * (1.0 + self.eps) ** (j - 1)

    def reference_orientation(self, i: int) -> float:
        return (i - 1) * self.orientation_width


def orientation_bucket(orient: float, theta: float, alpha_min: float, m: int) -> int:
    w = theta * alpha_min
    i = int(math.floor(orient / w)) + 1
    # guard the floor against rounding at bucket edges
    while i > 1 and orient < (i - 1) * w:
        i -= 1
    while i < m and orient >= i * w:
        i += 1
    return min(max(i, 1), m)


def weight_bucket(alpha: float, eps: float, alpha_min: float, b: int) -> int:
    j = int(math.floor(math.log(alpha / alpha_min) / math.log1p(eps))) + 1
    while j > 1 and alpha < alpha_min * (1.0 + eps) ** (j - 1):
        j -= 1
    while j < b and alpha >= alpha_min * (1.0 + eps) ** j:
        j += 1
    return min(max(j, 1), b)


def build_road_buckets(net: Network, eps: float) -> RoadBuckets:
    eps = check_eps(eps)
    theta = eps / 18.0
    a_min, a_max = net.alpha_min, net.alpha_max
    m = math.ceil(TWO_PI / (theta * a_min))
    b = max(1, math.ceil(math.log(a_max / a_min) / math.log1p(eps)))
    rb = RoadBuckets(eps, theta, a_min, a_max, m, b)
    for r in net.roads:
        key = (
            orientation_bucket(r.orientation, theta, a_min, m),
            weight_bucket(r.alpha, eps, a_min, b),
        )
        rb.buckets.setdefault(key, []).append(r.id)
    return rb


def gamma_directions(i: int, j: int, buckets: RoadBuckets, side: str = SOURCE) -> tuple[float, float]:
    """The two ray directions shot for bucket ``(i, j)``.

    On the source side a ray leaves the query point and meets a road of the
    bucket's reference orientation at the reference optimal entry angle, once
    approaching from the right of the road and once from the left. On the
    destination side the rays run back from the query point along the optimal
    exit directions.
    """
    psi = buckets.reference_orientation(i)
    phi = math.acos(min(1.0, buckets.reference_weight(j)))
    if side == SOURCE:
        return normalize_angle(psi + phi), normalize_angle(psi - phi)
    return normalize_angle(psi + phi + math.pi), normalize_angle(psi - phi + math.pi)


def first_hit(net: Network, roads: list[int], q, angle: float) -> Optional[tuple[int, float]]:
    """Nearest road among ``roads`` hit by the ray; ties go to the lower id."""
    best = None
    for rid in roads:
        r = net.roads[rid]
        t = ray_hit_param(q, angle, r.u, r.v)
        if t is None:
            continue
        if best is None or t < best[1] - EPS_GEOM or (abs(t - best[1]) <= EPS_GEOM and rid < best[0]):
            best = (rid, t)
    return best


def _neighbor(seq_params: list[float], seq_ids: list[int], param: float, side: str) -> int:
    if side == SOURCE:
        i = bisect.bisect_left(seq_params, param - EPS_GEOM)
        return seq_ids[min(i, len(seq_ids) - 1)]
    i = bisect.bisect_right(seq_params, param + EPS_GEOM) - 1
    return seq_ids[max(i, 0)]


def d2(
    buckets: RoadBuckets,
    net: Network,
    sequences: list[tuple[list[float], list[int]]],
    q,
    side: str = SOURCE,
) -> list[TupleD2]:
    """Type-2 candidates for query point ``q``.

    ``sequences[r]`` holds the sorted params and vertex ids of the graph
    vertices on road ``r``; the tuple's vertex is the first one at or after the
    hit along the road (source side) or the last one at or before it
    (destination side).
    """
    out: list[TupleD2] = []
    for (i, j) in sorted(buckets.buckets):
        roads = buckets.buckets[(i, j)]
        for angle in gamma_directions(i, j, buckets, side):
            hit = first_hit(net, roads, q, angle)
            if hit is None:
                continue
            rid, t = hit
            r = net.roads[rid]
            p = Point(q[0] + t * math.cos(angle), q[1] + t * math.sin(angle)) if t > 0 else Point(*q)
            param = min(max(segment_param(p, r.u, r.v), 0.0), r.length)
            params, ids = sequences[rid]
            out.append(TupleD2(rid, p, param, _neighbor(params, ids, param, side)))
    return out
