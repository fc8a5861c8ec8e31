import json
import math

import numpy as np
import pytest

from giantscope import limits
from giantscope.limits import CriticalPath, clt_params, excursions, mc_harness, simulate_critical_limit


def test_clt_params_frozen_and_psd():
    lp = clt_params(2.0)
    assert np.diag(lp.cov) == pytest.approx([0.20318787, 0.45944172, 0.47300701], abs=1e-8)
    assert np.all(np.linalg.eigvalsh(lp.cov) > 0)
    assert np.array_equal(lp.cov, lp.cov.T)
    assert np.all(lp.mean == 0)


def test_clt_params_subcritical():
    lp = clt_params(0.5, theta=1.0)
    assert not lp.valid_beta_gamma
    assert lp.mean[0] == pytest.approx(-0.5)
    assert lp.cov[0, 0] == pytest.approx(0.25)
    assert np.isnan(lp.cov[1, 1])
    assert json.loads(lp.to_json())["cov"][1][1] is None


def test_mdp_rate():
    lp = clt_params(2.0, theta=0.7)
    assert limits.mdp_rate(lp.mean, lp) == 0.0
    assert limits.mdp_rate(lp.mean[0] + 1.0, lp) == pytest.approx(1 / (2 * lp.cov[0, 0]))
    with pytest.raises(ValueError):
        limits.mdp_rate([0, 0, 0], clt_params(0.5))


def test_noiseless_critical_path_is_reflected_drift():
    path = simulate_critical_limit(1.0, T=4.0, dt=1e-3, noise=False)
    t = path.grid
    free = t - t * t / 2
    expected = free - np.minimum(np.minimum.accumulate(free), 0)
    assert np.allclose(path.x, expected, atol=1e-12)
    lengths, marks = excursions(path)
    assert lengths[0] == pytest.approx(2.0, abs=2e-3)
    assert marks[0] == 0


def test_critical_path_properties():
    path = simulate_critical_limit(0.5, T=5.0, dt=1e-3, seed=3)
    assert np.all(path.x >= 0) and path.x[0] == 0
    assert np.all(np.diff(path.marks) >= 0)
    assert path.T == pytest.approx(5.0)
    again = simulate_critical_limit(0.5, T=5.0, dt=1e-3, seed=3)
    assert np.array_equal(path.x, again.x) and np.array_equal(path.marks, again.marks)


def test_excursions_by_hand():
    x = np.array([0, 1, 2, 0, 0, 1, 0, 3, 3, 3, 0, 5], dtype=float)
    marks = np.arange(x.size)
    lengths, m = excursions(CriticalPath(x, marks, 0.5, 0.0))
    assert list(lengths) == [2.0, 1.5, 1.0]
    assert list(m) == [4, 3, 2]


def _draw(rng):
    return (rng.standard_normal(), rng.random())


def test_mc_harness_deterministic_and_worker_independent(monkeypatch):
    monkeypatch.setenv("GIANTSCOPE_THREADS", "2")
    a = mc_harness(_draw, 101, 9, names=("z", "u"), workers=1, keep=True)
    b = mc_harness(_draw, 101, 9, names=("z", "u"), workers=2, keep=True)
    assert np.array_equal(a.values, b.values)
    assert a.mean == b.mean and a.var == b.var
    assert a.stderr["z"] == pytest.approx(math.sqrt(a.var["z"] / 101))
    doc = json.loads(a.to_json(meta={"k": 1}))
    assert doc["summaries"][0]["statistic"] == "z"


def test_worker_count_respects_cap(monkeypatch):
    monkeypatch.setenv("GIANTSCOPE_THREADS", "3")
    assert limits.worker_count(8) == 3
    assert limits.worker_count(2) == 2
    assert limits.worker_count() == 3
    monkeypatch.delenv("GIANTSCOPE_THREADS")
    assert limits.worker_count(1) == 1


def test_mc_harness_validation():
    with pytest.raises(ValueError):
        mc_harness(_draw, 0, 1)


def test_clt_estimator_small_run():
    s = mc_harness(limits.CltEstimator(20_000, 2.0), 200, 4, keep=True)
    lp = clt_params(2.0)
    for i, name in enumerate(limits.STATS):
        assert abs(s.mean[name] - lp.mean[i]) < 5 * s.stderr[name] + 0.05
        assert s.var[name] == pytest.approx(lp.cov[i, i], rel=0.3)


def test_ks_distance():
    x = np.linspace(0, 1, 100)
    assert limits.ks_distance(x, x) == 0.0
    assert limits.ks_distance(x, x + 2) == 1.0
