"""Random valid networks and query points for tests and benchmarks."""
from __future__ import annotations

import math

import numpy as np

from .geometry import Point, interiors_intersect
from .network import Network, RoadSpec, make_network


def _seg_distance(a0, a1, b0, b1) -> float:
    def point_seg(p, s0, s1):
        dx, dy = s1[0] - s0[0], s1[1] - s0[1]
        L2 = dx * dx + dy * dy
        f = ((p[0] - s0[0]) * dx + (p[1] - s0[1]) * dy) / L2
        f = min(max(f, 0.0), 1.0)
        return math.hypot(p[0] - s0[0] - f * dx, p[1] - s0[1] - f * dy)

    if interiors_intersect(a0, a1, b0, b1):
        return 0.0
    return min(point_seg(a0, b0, b1), point_seg(a1, b0, b1), point_seg(b0, a0, a1), point_seg(b1, a0, a1))


def random_network(
    n: int,
    rng: np.random.Generator | int | None = None,
    *,
    box: float = 40.0,
    min_length: float = 2.0,
    max_length: float = 15.0,
    alpha_range: tuple[float, float] = (0.2, 1.0),
    undirected_fraction: float = 0.0,
    clearance: float = 0.25,
    max_tries: int = 20000,
) -> Network:
    """Rejection-sample ``n`` road records inside ``[0, box]^2``.

    Records keep at least ``clearance`` from each other so the instances stay
    away from numerically fragile near-contacts. Undirected records count as
    one of the ``n``.
    """
    rng = np.random.default_rng(rng)
    specs: list[RoadSpec] = []
    tries = 0
    while len(specs) < n:
        tries += 1
        if tries > max_tries:
            raise RuntimeError(f"could not place {n} roads after {max_tries} tries")
        length = rng.uniform(min_length, max_length)
        theta = rng.uniform(0.0, 2.0 * math.pi)
        x0, y0 = rng.uniform(0.0, box, size=2)
        x1, y1 = x0 + length * math.cos(theta), y0 + length * math.sin(theta)
        if not (0.0 <= x1 <= box and 0.0 <= y1 <= box):
            continue
        u, v = Point(float(x0), float(y0)), Point(float(x1), float(y1))
        if any(_seg_distance(u, v, s.u, s.v) < clearance for s in specs):
            continue
        alpha = float(rng.uniform(*alpha_range))
        directed = bool(rng.uniform() >= undirected_fraction)
        specs.append(RoadSpec(u, v, alpha, directed))
    return make_network(specs)


def random_point(rng: np.random.Generator, box: float = 40.0) -> Point:
    x, y = rng.uniform(0.0, box, size=2)
    return Point(float(x), float(y))


def add_random_road(net: Network, rng: np.random.Generator, **kwargs) -> Network | None:
    """``net`` plus one more valid road record, or ``None`` if none fit."""
    box = kwargs.get("box", 40.0)
    clearance = kwargs.get("clearance", 0.25)
    lo, hi = kwargs.get("alpha_range", (0.2, 1.0))
    for _ in range(2000):
        length = rng.uniform(kwargs.get("min_length", 2.0), kwargs.get("max_length", 15.0))
        theta = rng.uniform(0.0, 2.0 * math.pi)
        x0, y0 = rng.uniform(0.0, box, size=2)
        u = Point(float(x0), float(y0))
        v = Point(float(x0 + length * math.cos(theta)), float(y0 + length * math.sin(theta)))
        if not (0.0 <= v.x <= box and 0.0 <= v.y <= box):
            continue
        specs = list(net.specs)
        if any(_seg_distance(u, v, s.u, s.v) < clearance for s in specs):
            continue
        specs.append(RoadSpec(u, v, float(rng.uniform(lo, hi)), True))
        return make_network(specs)
    return None


def parallel_roads(n: int, spacing: float = 3.0, length: float = 10.0, alpha: float = 0.5) -> Network:
    """``n`` disjoint horizontal roads stacked vertically."""
    specs = [
        RoadSpec(Point(0.0, i * spacing), Point(length, i * spacing), alpha, True) for i in range(n)
    ]
    return make_network(specs)
