"""scikit-learn style wrappers around the solvers and query indices.

``fit`` takes the road network, ``predict`` takes query points and returns
one transportation cost per row, so the routers drop into pipelines, grid
searches over ``eps``/``tau``, and ``clone``.
"""
from __future__ import annotations

import os

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .engine import (
    APSP,
    build_fixed,
    build_two_point,
    query_fixed,
    query_two_point,
)
from .exact import QuickestPath, quickest_path
from .network import Network, from_roads, load_network, parse_network


def check_network(X) -> Network:
    """Accept a :class:`Network`, ``qpn v1`` text, a path to such a file, or an
    array of rows ``(x1, y1, x2, y2, alpha[, directed])``."""
    if isinstance(X, Network):
        return X
    if isinstance(X, (str, os.PathLike)):
        text = str(X)
        if "\n" in text or text.lstrip().startswith("qpn"):
            return parse_network(text)
        return load_network(X)
    rows = np.asarray(X, dtype=float)
    if rows.size == 0:
        return from_roads([])
    rows = check_array(rows, ensure_2d=True, dtype=float)
    if rows.shape[1] not in (5, 6):
        raise ValueError(f"road rows need 5 or 6 columns, got {rows.shape[1]}")
    return from_roads(rows.tolist())


def check_points(X, n_columns: int) -> np.ndarray:
    """Validate query rows: 2-D, finite, exactly ``n_columns`` wide."""
    X = check_array(X, ensure_2d=False, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.shape[1] != n_columns:
        raise ValueError(f"expected {n_columns} columns per query, got {X.shape[1]}")
    return X


class ExactRouter(BaseEstimator):
    """Exact quickest-path costs; ``predict`` rows are ``(sx, sy, tx, ty)``."""

    def fit(self, X, y=None):
        self.network_ = check_network(X)
        self.n_roads_ = len(self.network_)
        return self

    def route(self, s, t) -> QuickestPath:
        check_is_fitted(self, "network_")
        return quickest_path(self.network_, tuple(s), tuple(t))

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "network_")
        X = check_points(X, 4)
        return np.array([quickest_path(self.network_, r[:2], r[2:]).cost for r in X])


class FixedDestinationRouter(BaseEstimator):
    """(1 + eps)-approximate costs from arbitrary sources to one fixed target.

    Parameters
    ----------
    target : pair of floats
        Destination every query is answered for.
    eps : float in (0, 1)
        Approximation parameter.
    """

    def __init__(self, target=(0.0, 0.0), eps=0.25):
        self.target = target
        self.eps = eps

    def fit(self, X, y=None):
        t = check_points(np.asarray(self.target, dtype=float), 2)[0]
        self.network_ = check_network(X)
        self.index_ = build_fixed(self.network_, t, self.eps)
        return self

    def query(self, s):
        check_is_fitted(self, "index_")
        return query_fixed(self.index_, tuple(s))

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "index_")
        X = check_points(X, 2)
        return np.array([query_fixed(self.index_, r, witness=False).cost for r in X])


class TwoPointRouter(BaseEstimator):
    """Approximate costs between arbitrary point pairs.

    ``mode="apsp"`` stores distances between all graph vertices;
    ``mode="wspd"`` stores them only between pair-decomposition
    representatives and needs ``tau``.
    """

    def __init__(self, eps=0.2, mode=APSP, tau=None):
        self.eps = eps
        self.mode = mode
        self.tau = tau

    def fit(self, X, y=None):
        self.network_ = check_network(X)
        self.index_ = build_two_point(self.network_, self.eps, self.mode, self.tau)
        return self

    def query(self, s, t):
        check_is_fitted(self, "index_")
        return query_two_point(self.index_, tuple(s), tuple(t))

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "index_")
        X = check_points(X, 4)
        return np.array([query_two_point(self.index_, r[:2], r[2:]).cost for r in X])
