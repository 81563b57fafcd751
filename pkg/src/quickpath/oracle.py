"""Brute-force transportation distance by sampling roads densely.

Deliberately naive and independent of :mod:`quickpath.exact`: every sample
point is joined to every other by a straight walk, consecutive samples along
a road by a ride, and Dijkstra runs on the resulting complete graph. The
answer is the cost of a real path, so it never undercuts the exact value, and
it converges to it as the sampling is refined.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .network import Network, RoadSpec


@dataclass(frozen=True)
class OracleConfig:
    samples_per_road: int = 400

    def __post_init__(self):
        if int(self.samples_per_road) < 2:
            raise ValueError("samples_per_road must be at least 2")


def refinement_sequence(k0: int, steps: int) -> list[int]:
    """Sample counts whose point sets nest: k, 2k-1, 4k-3, ..."""
    ks = [k0]
    for _ in range(steps - 1):
        ks.append(2 * ks[-1] - 1)
    return ks


def _records(net) -> list[RoadSpec]:
    if isinstance(net, Network):
        if net.specs:
            return list(net.specs)
        return [RoadSpec(r.u, r.v, r.alpha, True) for r in net.roads]
    return list(net)


def oracle_cost(net, s, t, k: int) -> float:
    """Upper bound on the transportation distance from ``s`` to ``t``.

    ``net`` is a :class:`Network` (its file records are used, so undirected
    roads ride both ways natively) or an iterable of :class:`RoadSpec`.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    records = _records(net)
    xs = [np.array([s[0], t[0]], dtype=float)]
    ys = [np.array([s[1], t[1]], dtype=float)]
    # ride successor / predecessor per node, -1 for none
    nxt = [np.array([-1, -1])]
    prv = [np.array([-1, -1])]
    ride_w = [np.zeros(2)]
    offset = 2
    # i / (k - 1) gives bit-identical coordinates for nested sample sets
    frac = np.arange(k) / (k - 1)
    for rec in records:
        px = rec.u[0] + frac * (rec.v[0] - rec.u[0])
        py = rec.u[1] + frac * (rec.v[1] - rec.u[1])
        xs.append(px)
        ys.append(py)
        idx = offset + np.arange(k)
        fwd = np.full(k, -1)
        fwd[:-1] = idx[1:]
        back = np.full(k, -1)
        if not rec.directed:
            back[1:] = idx[:-1]
        nxt.append(fwd)
        prv.append(back)
        seg = np.hypot(np.diff(px), np.diff(py)) * rec.alpha
        w = np.zeros(k)
        w[:-1] = seg
        ride_w.append(w)
        offset += k
    X = np.concatenate(xs)
    Y = np.concatenate(ys)
    NXT = np.concatenate(nxt)
    PRV = np.concatenate(prv)
    RW = np.concatenate(ride_w)
    # backward ride weight of node i is the forward weight of node i-1
    RWB = np.zeros_like(RW)
    has_back = PRV >= 0
    RWB[has_back] = RW[PRV[has_back]]
    return _dense_dijkstra(X, Y, NXT, RW, PRV, RWB, 0, 1)


def _dense_dijkstra(X, Y, nxt, rw, prv, rwb, source: int, target: int) -> float:
    n = X.shape[0]
    d = np.full(n, np.inf)
    d[source] = 0.0
    open_ = np.ones(n, dtype=bool)
    key = d.copy()
    while True:
        u = int(np.argmin(key))
        du = key[u]
        if not np.isfinite(du):
            return float(d[target])
        if u == target:
            return float(du)
        open_[u] = False
        key[u] = np.inf
        cand = du + np.hypot(X - X[u], Y - Y[u])
        better = open_ & (cand < d)
        d[better] = cand[better]
        for v, w in ((nxt[u], rw[u]), (prv[u], rwb[u])):
            if v >= 0 and open_[v] and du + w < d[v]:
                d[v] = du + w
        key = np.where(open_, d, np.inf)
