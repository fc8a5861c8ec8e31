import math

import pytest
from hypothesis import given, settings, strategies as st

from giantscope.exact import CapacityError, enumerate_exact, expected_count_dp, tv_distance


def test_n3_law_by_hand():
    p = 0.3
    q = 1 - p
    law = enumerate_exact(3, p).shape_law()
    assert law[(1, (3,))] == pytest.approx(3 * p * p * q + p**3, abs=1e-15)
    assert law[(2, (2, 1))] == pytest.approx(3 * p * q * q, abs=1e-15)
    assert law[(3, (1, 1, 1))] == pytest.approx(q**3, abs=1e-15)


def test_triangle_excess():
    dist = enumerate_exact(3, 0.6)
    excess = dist.total_excess_law()
    assert excess[1] == pytest.approx(0.6**3, abs=1e-15)


@pytest.mark.parametrize("n", range(1, 8))
@pytest.mark.parametrize("p", [0.0, 0.2, 0.5, 1.0])
def test_total_mass_and_dp_cross_check(n, p):
    dist = enumerate_exact(n, p)
    assert math.fsum(dist.table.values()) == pytest.approx(1.0, abs=1e-13)
    mean = dist.expectation(lambda k: k[0])
    assert mean == pytest.approx(expected_count_dp(n, p), abs=1e-12)


def test_extremes():
    assert enumerate_exact(5, 0.0).shape_law() == {(5, (1,) * 5): 1.0}
    full = enumerate_exact(5, 1.0)
    ((key, prob),) = full.table.items()
    assert prob == 1.0 and key[1] == (5,) and key[2] == ((5, 6),)


def test_chunking_does_not_change_result():
    a = enumerate_exact(6, 0.37)
    b = enumerate_exact(6, 0.37, chunks=7)
    assert a.table == b.table


@given(st.floats(0.0, 1.0))
@settings(max_examples=20, deadline=None)
def test_largest_law_is_a_distribution(p):
    law = enumerate_exact(5, p).largest_law()
    assert set(law) <= set(range(1, 6))
    assert math.fsum(law.values()) == pytest.approx(1.0, abs=1e-13)


def test_capacity_and_validation():
    with pytest.raises(CapacityError):
        enumerate_exact(9, 0.5)
    with pytest.raises(ValueError):
        enumerate_exact(4, 1.5)


def test_tv_distance():
    assert tv_distance({"a": 0.5, "b": 0.5}, {"a": 0.5, "b": 0.5}) == 0.0
    assert tv_distance({"a": 1.0}, {"b": 1.0}) == 1.0
    assert tv_distance({"a": 0.7, "b": 0.3}, {"a": 0.4, "c": 0.6}) == pytest.approx(0.6)


def test_json_round_trip(tmp_path):
    import json

    dist = enumerate_exact(4, 0.5)
    path = tmp_path / "e.json"
    dist.to_json(path, meta={"tool": "x"})
    doc = json.loads(path.read_text())
    assert doc["n"] == 4 and doc["meta"] == {"tool": "x"}
    assert math.fsum(e["prob"] for e in doc["entries"]) == pytest.approx(1.0)
