"""Quickest paths in planar transportation networks."""
from .geometry import DomainError, Point, optimal_entry_angle, project_entry, project_exit
from .network import (
    Network,
    NetworkError,
    NetworkFormatError,
    NetworkValidationError,
    Road,
    RoadSpec,
    load_network,
    make_network,
    parse_network,
    serialize_network,
)
from .exact import PathGraph, QuickestPath, build_graph, quickest_path, sssp
from .oracle import oracle_cost
from .candidates import ParameterError
from .engine import (
    FixedDestIndex,
    QueryAnswer,
    TwoPointIndex,
    build_fixed,
    build_two_point,
    estimate_wspd,
    query_fixed,
    query_two_point,
)
from .persist import load_index, save_index
from .estimators import ExactRouter, FixedDestinationRouter, TwoPointRouter

__version__ = "0.1.0"

__all__ = [
    "DomainError", "Point", "optimal_entry_angle", "project_entry", "project_exit",
    "Network", "NetworkError", "NetworkFormatError", "NetworkValidationError", "Road", "RoadSpec",
    "load_network", "make_network", "parse_network", "serialize_network",
    "PathGraph", "QuickestPath", "build_graph", "quickest_path", "sssp", "oracle_cost", "ParameterError",
    "FixedDestIndex", "QueryAnswer", "TwoPointIndex", "build_fixed", "build_two_point", "estimate_wspd",
    "query_fixed", "query_two_point", "load_index", "save_index",
    "ExactRouter", "FixedDestinationRouter", "TwoPointRouter",
]
