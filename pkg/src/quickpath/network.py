"""Transportation network model and the ``qpn v1`` text format."""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .geometry import EPS_GEOM, Point, dist, interiors_intersect, orientation

FORMAT_HEADER = "qpn v1"


class NetworkError(ValueError):
    """Base class for malformed or invalid networks."""


class NetworkFormatError(NetworkError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class NetworkValidationError(NetworkError):
    def __init__(self, violations: Sequence["Violation"]):
        self.violations = list(violations)
        super().__init__("; ".join(v.message for v in self.violations))


@dataclass(frozen=True)
class Violation:
    kind: str  # "weight-range" | "degenerate" | "intersection" | "non-finite"
    roads: tuple[int, ...]
    message: str


@dataclass(frozen=True)
class RoadSpec:
    """One ``road`` line as written in a network file."""

    u: Point
    v: Point
    alpha: float
    directed: bool = True


@dataclass(frozen=True)
class Road:
    id: int
    u: Point
    v: Point
    alpha: float

    @property
    def length(self) -> float:
        return dist(self.u, self.v)

    @property
    def orientation(self) -> float:
        return orientation(self.u, self.v)

    def point_at(self, param: float) -> Point:
        """Point at distance ``param`` from ``u`` along the road."""
        length = self.length
        f = param / length
        return Point(
            self.u[0] + f * (self.v[0] - self.u[0]),
            self.u[1] + f * (self.v[1] - self.u[1]),
        )


@dataclass(frozen=True)
class Network:
    """Directed roads plus the file-level records they were expanded from.

    Construct through :func:`make_network` or :func:`parse_network`, which
    validate; the raw constructor does not.
    """

    roads: tuple[Road, ...]
    specs: tuple[RoadSpec, ...] = field(default=(), compare=False)

    @property
    def alpha_min(self) -> float:
        return min((r.alpha for r in self.roads), default=1.0)

    @property
    def alpha_max(self) -> float:
        return max((r.alpha for r in self.roads), default=1.0)

    def __len__(self) -> int:
        return len(self.roads)

    def endpoints(self) -> list[Point]:
        pts = []
        for r in self.roads:
            pts.append(r.u)
            pts.append(r.v)
        return pts


def expand(specs: Iterable[RoadSpec]) -> tuple[Road, ...]:
    """Turn file records into directed roads; an undirected record yields
    its forward road immediately followed by the reversed twin."""
    roads: list[Road] = []
    for spec in specs:
        roads.append(Road(len(roads), spec.u, spec.v, spec.alpha))
        if not spec.directed:
            roads.append(Road(len(roads), spec.v, spec.u, spec.alpha))
    return tuple(roads)


def validate(net: Network) -> list[Violation]:
    """List every violated network invariant; an empty list means valid."""
    out: list[Violation] = []
    roads = net.roads
    for r in roads:
        coords = (*r.u, *r.v, r.alpha)
        if not all(math.isfinite(c) for c in coords):
            out.append(Violation("non-finite", (r.id,), f"road {r.id}: non-finite value"))
            continue
        if not (0.0 < r.alpha <= 1.0):
            out.append(
                Violation("weight-range", (r.id,), f"road {r.id}: alpha {r.alpha!r} not in (0, 1]")
            )
        if dist(r.u, r.v) <= EPS_GEOM:
            out.append(Violation("degenerate", (r.id,), f"road {r.id}: zero length"))
    bad = {v.roads[0] for v in out}
    for i in range(len(roads)):
        if i in bad:
            continue
        a = roads[i]
        for j in range(i + 1, len(roads)):
            if j in bad:
                continue
            b = roads[j]
            if _reversed_twins(a, b):
                continue
            if interiors_intersect(a.u, a.v, b.u, b.v):
                out.append(
                    Violation("intersection", (i, j), f"roads {i} and {j} intersect")
                )
    return out


def _reversed_twins(a: Road, b: Road) -> bool:
    # the two directions of one undirected road share their whole extent
    return dist(a.u, b.v) <= EPS_GEOM and dist(a.v, b.u) <= EPS_GEOM


def make_network(specs: Iterable[RoadSpec]) -> Network:
    specs = tuple(specs)
    net = Network(expand(specs), specs)
    violations = validate(net)
    if violations:
        raise NetworkValidationError(violations)
    return net


def from_roads(rows) -> Network:
    """Build a network from rows ``(x1, y1, x2, y2, alpha[, directed])``."""
    specs = []
    for row in rows:
        row = list(row)
        directed = True if len(row) < 6 else bool(row[5])
        specs.append(
            RoadSpec(
                Point(float(row[0]), float(row[1])),
                Point(float(row[2]), float(row[3])),
                float(row[4]),
                directed,
            )
        )
    return make_network(specs)


def _real(token: str, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise NetworkFormatError(f"not a number: {token!r}", lineno) from None
    if not math.isfinite(value):
        raise NetworkFormatError(f"non-finite number: {token!r}", lineno)
    return value


def parse_specs(text: str) -> list[RoadSpec]:
    lines = text.splitlines()
    header_seen = False
    specs = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            if line != FORMAT_HEADER:
                raise NetworkFormatError(f"expected header {FORMAT_HEADER!r}", lineno)
            header_seen = True
            continue
        parts = line.split()
        if parts[0] != "road":
            raise NetworkFormatError(f"unknown record {parts[0]!r}", lineno)
        if len(parts) != 7:
            raise NetworkFormatError("road needs x1 y1 x2 y2 alpha directed|undirected", lineno)
        x1, y1, x2, y2, alpha = (_real(t, lineno) for t in parts[1:6])
        if parts[6] not in ("directed", "undirected"):
            raise NetworkFormatError(f"bad direction flag {parts[6]!r}", lineno)
        specs.append(RoadSpec(Point(x1, y1), Point(x2, y2), alpha, parts[6] == "directed"))
    if not header_seen:
        raise NetworkFormatError(f"missing header {FORMAT_HEADER!r}", 1)
    return specs


def parse_network(text: str) -> Network:
    return make_network(parse_specs(text))


def load_network(path) -> Network:
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read())


def fmt(x: float) -> str:
    """17 significant digits: exact round trip for binary64."""
    return format(x, ".17g")


def serialize_network(net: Network) -> str:
    specs = net.specs or tuple(RoadSpec(r.u, r.v, r.alpha, True) for r in net.roads)
    lines = [FORMAT_HEADER]
    for s in specs:
        flag = "directed" if s.directed else "undirected"
        lines.append(
            " ".join(["road", fmt(s.u[0]), fmt(s.u[1]), fmt(s.v[0]), fmt(s.v[1]), fmt(s.alpha), flag])
        )
    return "\n".join(lines) + "\n"


def network_hash(net: Network) -> str:
    return hashlib.sha256(serialize_network(net).encode("utf-8")).hexdigest()
