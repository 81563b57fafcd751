"""Well-separated pair decomposition of planar point sets."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import EPS_GEOM


@dataclass
class SplitNode:
    id: int
    lo: tuple[float, float]
    hi: tuple[float, float]
    rep: int
    members: np.ndarray
    parent: int = -1
    left: int = -1
    right: int = -1

    @property
    def is_leaf(self) -> bool:
        return self.left < 0

    @property
    def center(self) -> tuple[float, float]:
        return ((self.lo[0] + self.hi[0]) / 2.0, (self.lo[1] + self.hi[1]) / 2.0)

    @property
    def radius(self) -> float:
        """Radius of the circle circumscribing the bounding box."""
        return math.hypot(self.hi[0] - self.lo[0], self.hi[1] - self.lo[1]) / 2.0


@dataclass
class SplitTree:
    points: np.ndarray
    nodes: list[SplitNode]
    leaf_of: np.ndarray  # point index -> leaf node id (duplicates share a leaf)

    @property
    def root(self) -> SplitNode:
        return self.nodes[0]

    def ancestors(self, node: int) -> list[int]:
        out = []
        while node >= 0:
            out.append(node)
            node = self.nodes[node].parent
        return out


def _merge_duplicates(pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Representative index for each point (the lowest index within EPS_GEOM)."""
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    canon = np.arange(len(pts))
    for a_pos, a in enumerate(order):
        if canon[a] != a:
            continue
        for b in order[a_pos + 1 :]:
            if pts[b, 0] - pts[a, 0] > EPS_GEOM:
                break
            if canon[b] == b and abs(pts[b, 1] - pts[a, 1]) <= EPS_GEOM and b != a:
                lo, hi = min(a, b), max(a, b)
                canon[hi] = lo
    # resolve chains to the smallest index
    for i in range(len(canon)):
        j = i
        while canon[j] != j:
            j = canon[j]
        canon[i] = j
    uniq = np.flatnonzero(canon == np.arange(len(pts)))
    return uniq, canon


def build_split_tree(points) -> SplitTree:
    """Fair split tree: boxes split at the middle of their longest side
    (x wins ties); each node's representative is its lowest point index."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(pts) < 1:
        raise ValueError("need at least one point")
    uniq, canon = _merge_duplicates(pts)
    nodes: list[SplitNode] = []
    leaf_of = np.full(len(pts), -1, dtype=np.int64)

    def make(members: np.ndarray, parent: int) -> int:
        sub = pts[members]
        lo = (float(sub[:, 0].min()), float(sub[:, 1].min()))
        hi = (float(sub[:, 0].max()), float(sub[:, 1].max()))
        node = SplitNode(len(nodes), lo, hi, int(members.min()), members, parent)
        nodes.append(node)
        return node.id

    stack = [make(np.sort(uniq), -1)]
    while stack:
        nid = stack.pop()
        node = nodes[nid]
        if len(node.members) == 1:
            leaf_of[node.members[0]] = nid
            continue
        wx = node.hi[0] - node.lo[0]
        wy = node.hi[1] - node.lo[1]
        axis = 0 if wx >= wy else 1
        mid = (node.lo[axis] + node.hi[axis]) / 2.0
        coords = pts[node.members, axis]
        left = node.members[coords <= mid]
        right = node.members[coords > mid]
        node.left = make(left, nid)
        node.right = make(right, nid)
        # right pushed first so the left subtree is numbered depth-first
        stack.append(node.right)
        stack.append(node.left)
    leaf_of = leaf_of[canon]
    return SplitTree(pts, nodes, leaf_of)


def well_separated(a: SplitNode, b: SplitNode, s: float) -> bool:
    """Equal-radius circles around both boxes are at least ``s * r`` apart."""
    r = max(a.radius, b.radius)
    ca, cb = a.center, b.center
    gap = math.hypot(ca[0] - cb[0], ca[1] - cb[1]) - 2.0 * r
    return gap >= s * r and gap > 0.0


@dataclass(frozen=True)
class WSPair:
    a: int  # node ids
    b: int
    rep_a: int  # point indices
    rep_b: int


@dataclass
class PairList:
    pairs: list[WSPair]
    separation: float
    by_nodes: dict[tuple[int, int], int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.pairs)


def wspd_pairs(tree: SplitTree, s: float) -> PairList:
    if not s > 0:
        raise ValueError("separation must be positive")
    nodes = tree.nodes
    pairs: list[WSPair] = []
    work: list[tuple[int, int]] = []
    for node in reversed(nodes):
        if not node.is_leaf:
            work.append((node.left, node.right))
    while work:
        ia, ib = work.pop()
        a, b = nodes[ia], nodes[ib]
        if well_separated(a, b, s):
            pairs.append(WSPair(ia, ib, a.rep, b.rep))
            continue
        if a.radius >= b.radius and not a.is_leaf:
            work.append((a.right, ib))
            work.append((a.left, ib))
        else:
            work.append((ia, b.right))
            work.append((ia, b.left))
    out = PairList(pairs, float(s))
    for k, p in enumerate(pairs):
        out.by_nodes[(p.a, p.b)] = k
    return out


def find_pair(pairs: PairList, tree: SplitTree, p: int, q: int) -> tuple[int, bool]:
    """Index of the pair covering points ``p`` and ``q``.

    The flag is ``True`` when ``p`` lies on the pair's first side.
    """
    lp, lq = int(tree.leaf_of[p]), int(tree.leaf_of[q])
    if lp == lq:
        raise ValueError("p and q must be distinct points")
    up = tree.ancestors(lp)
    uq = tree.ancestors(lq)
    for a in up:
        for b in uq:
            k = pairs.by_nodes.get((a, b))
            if k is not None:
                return k, True
            k = pairs.by_nodes.get((b, a))
            if k is not None:
                return k, False
    raise LookupError("no covering pair; decomposition incomplete")
