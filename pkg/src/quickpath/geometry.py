"""Planar primitives used throughout the package.

Points are plain ``(x, y)`` float tuples; every predicate here works under a
single absolute tolerance, :data:`EPS_GEOM`.
"""
from __future__ import annotations

import math
from typing import NamedTuple, Optional

EPS_GEOM = 1e-9
TWO_PI = 2.0 * math.pi


class Point(NamedTuple):
    x: float
    y: float


class DomainError(ValueError):
    """Raised when a numeric argument lies outside its mathematical domain."""


def dist(p, q) -> float:
    return math.hypot(q[0] - p[0], q[1] - p[1])


def normalize_angle(a: float) -> float:
    """Map an angle in radians onto ``[0, 2*pi)``."""
    a = math.fmod(a, TWO_PI)
    if a < 0.0:
        a += TWO_PI
    # fmod of a tiny negative value can round up to exactly 2*pi
    if a >= TWO_PI:
        a = 0.0
    return a


def direction(angle: float) -> Point:
    return Point(math.cos(angle), math.sin(angle))


def orientation(u, v) -> float:
    """Angle of the directed segment ``u -> v`` in ``[0, 2*pi)``."""
    return normalize_angle(math.atan2(v[1] - u[1], v[0] - u[0]))


def cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def optimal_entry_angle(alpha: float) -> float:
    """Angle between an entering straight walk and the road's backward direction.

    A road ridden at cost ``alpha`` per unit length is best joined at
    ``arccos(alpha)``; for ``alpha == 1`` this degenerates to 0.
    """
    if not (0.0 < alpha <= 1.0) or math.isnan(alpha):
        raise DomainError(f"road weight must lie in (0, 1], got {alpha!r}")
    return math.acos(alpha)


def _road_frame(p, u, v):
    length = dist(u, v)
    ux = (v[0] - u[0]) / length
    uy = (v[1] - u[1]) / length
    along = (p[0] - u[0]) * ux + (p[1] - u[1]) * uy
    height = abs((p[0] - u[0]) * uy - (p[1] - u[1]) * ux)
    return length, ux, uy, along, height


def _project(p, u, v, alpha, sign):
    if alpha >= 1.0:
        return None
    length, ux, uy, along, height = _road_frame(p, u, v)
    if height <= EPS_GEOM:
        # p sits on the supporting line: it can step onto the road directly
        if -EPS_GEOM <= along <= length + EPS_GEOM:
            return Point(float(p[0]), float(p[1]))
        return None
    cot_phi = alpha / math.sqrt(1.0 - alpha * alpha)
    t = along + sign * height * cot_phi
    if t < -EPS_GEOM or t > length + EPS_GEOM:
        return None
    t = min(max(t, 0.0), length)
    return Point(u[0] + t * ux, u[1] + t * uy)


def project_entry(p, u, v, alpha: float) -> Optional[Point]:
    """Point ``q`` on road ``u -> v`` where a walk from ``p`` should join it.

    ``q`` satisfies ``angle(p, q, u) == arccos(alpha)``; ``None`` when that point
    falls outside the closed segment or when ``alpha == 1``.
    """
    return _project(p, u, v, alpha, +1.0)


def project_exit(p, u, v, alpha: float) -> Optional[Point]:
    """Mirror of :func:`project_entry`: where to leave the road to walk to ``p``."""
    return _project(p, u, v, alpha, -1.0)


def on_segment(p, a, b, eps: float = EPS_GEOM) -> bool:
    """Closed-segment membership test."""
    length = dist(a, b)
    if length <= eps:
        return dist(p, a) <= eps
    dx = (b[0] - a[0]) / length
    dy = (b[1] - a[1]) / length
    along = (p[0] - a[0]) * dx + (p[1] - a[1]) * dy
    off = abs((p[0] - a[0]) * dy - (p[1] - a[1]) * dx)
    return off <= eps and -eps <= along <= length + eps


def segment_param(p, a, b) -> float:
    """Signed distance of the foot of ``p`` along ``a -> b`` measured from ``a``."""
    length = dist(a, b)
    return ((p[0] - a[0]) * (b[0] - a[0]) + (p[1] - a[1]) * (b[1] - a[1])) / length


def ray_hit_param(origin, angle: float, a, b) -> Optional[float]:
    """Ray parameter of the first hit of the ray with segment ``[a, b]``, or ``None``.

    The ray direction is a unit vector, so the parameter is the distance from
    ``origin``. An origin lying on the segment yields ``0.0``.
    """
    if on_segment(origin, a, b):
        return 0.0
    dx, dy = math.cos(angle), math.sin(angle)
    ex, ey = b[0] - a[0], b[1] - a[1]
    wx, wy = a[0] - origin[0], a[1] - origin[1]
    denom = dx * ey - dy * ex
    seg_len = math.hypot(ex, ey)
    if abs(denom) <= EPS_GEOM * seg_len:
        # parallel: only a collinear segment ahead of the origin can be hit
        if abs(wx * dy - wy * dx) > EPS_GEOM:
            return None
        ta = wx * dx + wy * dy
        tb = (b[0] - origin[0]) * dx + (b[1] - origin[1]) * dy
        if max(ta, tb) < -EPS_GEOM:
            return None
        return max(0.0, min(ta, tb))
    t = (wx * ey - wy * ex) / denom
    s = (wx * dy - wy * dx) / denom
    tol = EPS_GEOM / seg_len
    if t < -EPS_GEOM or s < -tol or s > 1.0 + tol:
        return None
    return max(t, 0.0)


def ray_hit(origin, angle: float, a, b) -> Optional[Point]:
    """First intersection of the ray from ``origin`` at ``angle`` with ``[a, b]``."""
    t = ray_hit_param(origin, angle, a, b)
    if t is None:
        return None
    if t == 0.0:
        return Point(float(origin[0]), float(origin[1]))
    return Point(origin[0] + t * math.cos(angle), origin[1] + t * math.sin(angle))


def interiors_intersect(a0, a1, b0, b1, eps: float = EPS_GEOM) -> bool:
    """True when two segments meet anywhere other than at shared endpoints.

    Touching at a common endpoint is allowed; an endpoint lying in the other
    segment's relative interior, a proper crossing, or a collinear overlap are
    all reported.
    """

    def interior_contains(p, s0, s1):
        return on_segment(p, s0, s1, eps) and dist(p, s0) > eps and dist(p, s1) > eps

    if interior_contains(a0, b0, b1) or interior_contains(a1, b0, b1):
        return True
    if interior_contains(b0, a0, a1) or interior_contains(b1, a0, a1):
        return True
    shared = {
        i for i, p in enumerate((a0, a1)) for q in (b0, b1) if dist(p, q) <= eps
    }
    if len(shared) == 2:
        # both endpoints coincide: the same segment (possibly reversed)
        return True
    d1 = cross(b0, b1, a0)
    d2 = cross(b0, b1, a1)
    d3 = cross(a0, a1, b0)
    d4 = cross(a0, a1, b1)
    scale_a = dist(a0, a1)
    scale_b = dist(b0, b1)
    if abs(d1) <= eps * scale_b or abs(d2) <= eps * scale_b:
        return False
    if abs(d3) <= eps * scale_a or abs(d4) <= eps * scale_a:
        return False
    return (d1 > 0) != (d2 > 0) and (d3 > 0) != (d4 > 0)
