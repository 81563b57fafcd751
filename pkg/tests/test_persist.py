import numpy as np
import pytest

from quickpath.engine import build_fixed, build_two_point, query_fixed, query_two_point
from quickpath.generate import random_network, random_point
from quickpath.persist import IndexFormatError, dumps, load_index, loads, save_index


@pytest.fixture(scope="module")
def net():
    return random_network(6, np.random.default_rng(4), undirected_fraction=0.3)


def _queries(seed, n=25):
    rng = np.random.default_rng(seed)
    return [(random_point(rng), random_point(rng)) for _ in range(n)]


def test_fixed_round_trip(net, tmp_path):
    index = build_fixed(net, (20, 20), 0.25)
    save_index(index, tmp_path / "f.qpx")
    again = load_index(tmp_path / "f.qpx")
    for s, _ in _queries(1):
        a, b = query_fixed(index, s), query_fixed(again, s)
        assert a.cost == b.cost
        assert a.witness.legs == b.witness.legs


@pytest.mark.parametrize("mode, tau", [("apsp", None), ("wspd", 0.2)])
def test_two_point_round_trip(net, mode, tau):
    index = build_two_point(net, 0.2, mode, tau)
    text = dumps(index)
    again = loads(text)
    assert dumps(again) == text
    for s, t in _queries(2):
        assert query_two_point(index, s, t).cost == query_two_point(again, s, t).cost


def test_rejects_bad_header():
    with pytest.raises(IndexFormatError):
        loads("qpx v0\n")


def test_rejects_truncated(net):
    text = dumps(build_two_point(net, 0.2))
    with pytest.raises(IndexFormatError):
        loads(text[: len(text) // 2])


def test_rejects_tampered_network(net):
    text = dumps(build_fixed(net, (1, 1), 0.3))
    lines = text.splitlines()
    k = next(i for i, line in enumerate(lines) if line.startswith("road "))
    parts = lines[k].split()
    parts[5] = "0.123"
    lines[k] = " ".join(parts)
    with pytest.raises(IndexFormatError):
        loads("\n".join(lines))
