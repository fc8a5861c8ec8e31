import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from giantscope.exact import enumerate_exact, tv_distance
from giantscope.exploration import (
    ComponentSpectrum,
    GraphParams,
    components,
    decode_shape,
    explore,
    explore_spectrum,
    explore_summary,
    sample_direct,
    sample_edges,
    skorohod,
    spectrum_from_edges,
    write_spectra_csv,
    write_trace_csv,
)
from giantscope.limits import empirical_shape_law
from giantscope.trajectory import Trajectory


@given(st.integers(1, 300), st.floats(0.0, 6.0), st.integers(0, 2**32))
@settings(max_examples=60, deadline=None)
def test_trace_invariants(n, c, seed):
    trace = explore(GraphParams(n, c), seed).check()
    spec = components(trace)
    assert spec.n == n
    assert spec.count == trace.phi[-1]
    assert sum(spec.excess) == trace.e[-1]


@given(st.integers(1, 60), st.floats(0.0, 4.0), st.integers(0, 2**32))
@settings(max_examples=40, deadline=None)
def test_direct_sampler_consistent_with_its_edges(n, c, seed):
    params = GraphParams(n, c)
    edges = sample_edges(params, seed)
    spec = spectrum_from_edges(n, edges)
    assert spec.n == n
    assert sum(spec.excess) == len(edges) - (n - spec.count)
    assert sample_direct(params, seed).n == n


def test_degenerate_graphs():
    empty = components(explore(GraphParams(7, 0.0), 1))
    assert empty.sizes == (1,) * 7 and empty.excess == (0,) * 7
    full = components(explore(GraphParams.from_p(6, 1.0), 1))
    assert full.sizes == (6,) and full.excess == (15 - 5,)
    assert components(explore(GraphParams(1, 3.0), 0)).sizes == (1,)


def test_seeded_runs_repeat():
    p = GraphParams(500, 1.5)
    a, b = explore(p, 42), explore(p, 42)
    assert np.array_equal(a.q, b.q) and np.array_equal(a.e, b.e)
    assert explore_spectrum(p, 3) == explore_spectrum(p, 3)


def test_summary_matches_spectrum_law_shape():
    count, largest, ex = explore_summary(GraphParams(2000, 2.0), 9)
    assert 1 <= count <= 2000 and largest > 1000 and ex >= 0


def test_spectrum_from_edges_by_hand():
    spec = spectrum_from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4)])
    assert spec.sizes == (3, 2, 1) and spec.excess == (1, 0, 0)
    with pytest.raises(ValueError):
        spectrum_from_edges(3, [(0, 3)])


def test_component_spectrum_validation_and_order():
    s = ComponentSpectrum((2, 3, 3), (0, 0, 1))
    assert s.sizes == (3, 3, 2) and s.largest_excess == 1
    assert s.shape_key() == (3, (3, 3, 2))
    with pytest.raises(ValueError):
        ComponentSpectrum((2,), (1,))
    with pytest.raises(ValueError):
        ComponentSpectrum((), ())


def test_params_validation():
    with pytest.raises(ValueError):
        GraphParams(0, 1.0)
    with pytest.raises(ValueError):
        GraphParams(5, -1.0)
    with pytest.raises(ValueError):
        GraphParams.from_p(5, 1.2)
    with pytest.raises(ValueError):
        sample_direct(GraphParams(200_000, 1.0))


def test_skorohod_reflection():
    x = Trajectory(np.array([0.0, -1.0, 0.5, -2.0, -1.0]))
    refl, reg = skorohod(x)
    assert np.array_equal(reg.values, [0.0, 1.0, 1.0, 2.0, 2.0])
    assert np.array_equal(refl.values, [0.0, 0.0, 1.5, 0.0, 1.0])


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=50))
def test_skorohod_properties(vals):
    refl, reg = skorohod(Trajectory(np.array(vals)))
    assert np.all(refl.values >= 0)
    assert np.all(np.diff(reg.values) >= 0)
    grows = np.flatnonzero(np.diff(reg.values) > 0) + 1
    assert np.all(refl.values[grows] == 0)


def test_decode_shape_sorted_descending():
    law = empirical_shape_law(5, 0.3, 2000, 1)
    for count, sizes in law:
        assert list(sizes) == sorted(sizes, reverse=True) and len(sizes) == count
        assert sum(sizes) == 5
    assert decode_shape  # exported


@pytest.mark.parametrize("method", ["explore", "direct"])
def test_small_law_close_to_exact(method):
    ref = enumerate_exact(5, 0.3).shape_law()
    emp = empirical_shape_law(5, 0.3, 50_000, 11, method=method)
    assert tv_distance(emp, ref) < 0.02


def test_csv_writers(tmp_path):
    trace = explore(GraphParams(5, 1.0), 0)
    write_trace_csv(trace, tmp_path / "t.csv", ["k: v"])
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines[0] == "# k: v" and lines[1] == "i,v,q,e,phi,s" and len(lines) == 8
    specs = [explore_spectrum(GraphParams(5, 1.0), s) for s in range(3)]
    write_spectra_csv(specs, tmp_path / "s.csv", tmp_path / "m.csv")
    summary = (tmp_path / "m.csv").read_text().splitlines()
    assert summary[0] == "replication,count,largest,largest_excess" and len(summary) == 4
