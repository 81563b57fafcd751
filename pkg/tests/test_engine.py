import math

import numpy as np
import pytest

from quickpath.candidates import ParameterError
from quickpath.engine import (
    DIRECT,
    build_fixed,
    build_two_point,
    estimate_wspd,
    query_fixed,
    query_two_point,
    vertex_distance,
)
from quickpath.exact import build_graph, quickest_path, sssp
from quickpath.geometry import dist
from quickpath.network import parse_network


def test_fixed_empty_network(empty_net):
    index = build_fixed(empty_net, (3, 4), 0.5)
    assert index.vertex_count == 1
    ans = query_fixed(index, (0, 0))
    assert ans.cost == 5.0 and ans.candidate_kind == DIRECT


def test_fixed_table_at_exit_projection(one_road):
    index = build_fixed(one_road, (20, 4), 0.25)
    locs = index.anchors.locations
    (v,) = [i for i, p in enumerate(locs) if math.dist(p, (17, 0)) < 1e-9]
    assert index.cost_to_target[v] == pytest.approx(5.0, abs=1e-12)


@pytest.mark.parametrize("eps", [0.0, 1.0, 2.0])
def test_fixed_rejects_eps(one_road, eps):
    with pytest.raises(ParameterError):
        build_fixed(one_road, (0, 0), eps)


def test_fixed_s_equals_t(one_road):
    assert query_fixed(build_fixed(one_road, (20, 4), 0.25), (20, 4)).cost == 0.0


def test_fixed_closed_form_and_witness(one_road):
    index = build_fixed(one_road, (20, 4), 0.1)
    ans = query_fixed(index, (0, 4))
    assert 18.4 - 1e-9 <= ans.cost <= 18.4 * 1.1
    assert sum(leg.cost for leg in ans.witness.legs) == pytest.approx(ans.cost, abs=1e-9)
    assert ans.witness.legs[0].start == (0, 4) and ans.witness.legs[-1].end == (20, 4)


def test_two_point_empty_network(empty_net):
    for mode, tau in (("apsp", None), ("wspd", 0.3)):
        index = build_two_point(empty_net, 0.3, mode, tau)
        assert index.vertex_count == 0
        ans = query_two_point(index, (0, 0), (3, 4))
        assert ans.cost == 5.0 and ans.candidate_kind == DIRECT


def test_two_point_s_equals_t(one_road):
    index = build_two_point(one_road, 0.2)
    assert query_two_point(index, (4, 4), (4, 4)).cost == 0.0


def test_two_point_parameters(one_road):
    with pytest.raises(ParameterError):
        build_two_point(one_road, 0.2, "wspd")
    with pytest.raises(ParameterError):
        build_two_point(one_road, 0.2, "wspd", 1.0)
    with pytest.raises(ParameterError):
        build_two_point(one_road, 0.2, "nearest")
    with pytest.raises(ParameterError):
        build_two_point(one_road, 1.0)


def test_wspd_two_vertex_graph(one_road):
    index = build_two_point(one_road, 0.2, "wspd", 0.2)
    assert index.vertex_count == 2
    assert len(index.pairs) == 1
    g = build_graph(one_road, closure=True)
    d, _ = sssp(g, 0)
    exact = min(d[1], dist(g.vertices[0].location, g.vertices[1].location))
    assert estimate_wspd(index, 0, 1) == exact
    assert estimate_wspd(index, 0, 0) == 0.0


def test_estimate_exact_on_representatives():
    net = parse_network(
        "qpn v1\nroad 0 0 10 0 0.4 directed\nroad 12 3 12 13 0.5 directed\nroad 2 8 8 14 0.7 undirected\n"
    )
    index = build_two_point(net, 0.3, "wspd", 0.2)
    apsp = build_two_point(net, 0.3, "apsp")
    for p in index.pairs.pairs:
        assert estimate_wspd(index, p.rep_a, p.rep_b) == apsp.table[p.rep_a, p.rep_b]
        assert vertex_distance(index, p.rep_b, p.rep_a) == apsp.table[p.rep_b, p.rep_a]


def test_apsp_table_is_a_metric():
    net = parse_network(
        "qpn v1\nroad 0 0 10 0 0.4 directed\nroad 12 3 12 13 0.5 directed\nroad 2 8 8 14 0.7 undirected\n"
    )
    T = build_two_point(net, 0.3).table
    n = len(T)
    assert np.all(np.diag(T) == 0)
    # triangle inequality through every middle vertex
    for k in range(n):
        assert np.all(T <= T[:, [k]] + T[[k], :] + 1e-9)


def test_two_point_closed_form(one_road):
    exact = quickest_path(one_road, (0, 4), (20, 4)).cost
    for mode, tau in (("apsp", None), ("wspd", 0.1)):
        ans = query_two_point(build_two_point(one_road, 0.1, mode, tau), (0, 4), (20, 4))
        assert exact - 1e-9 <= ans.cost <= exact * 1.2 * (1 + 1e-9)
