import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from giantscope import variational as var
from giantscope.rates import k_rho, l_c, lln_constants
from giantscope.trajectory import Trajectory


@pytest.mark.parametrize("c", [1.5, 2.0, 3.0])
def test_lln_curves_end_at_constants(c):
    q, phi, e = var.lln_curves(c, 20001)
    alpha, beta, gamma = lln_constants(c)
    assert phi.values[-1] == pytest.approx(alpha, abs=1e-12)
    assert e.values[-1] == pytest.approx(gamma, abs=1e-12)
    assert np.all(q.values >= 0) and q.values[-1] == 0
    assert var.i_phi_functional(phi, c) < 1e-4
    assert var.i_Q_functional(q, c) < 1e-3


@given(st.floats(0.0, 0.6), st.floats(0.1, 0.4), st.floats(0.01, 0.95))
@settings(max_examples=40, deadline=None)
def test_excursion_shape(s, length, frac):
    t = s + length
    w = frac * length**2 / 2
    traj, rho, cost = var.optimal_excursion(s, t, w, 2.0, 4001)
    x = traj.values
    assert x[0] == 0 and x[-1] == 0 and np.all(x >= -1e-15)
    area = np.trapezoid(x, traj.grid)
    assert area == pytest.approx(w, rel=1e-4)
    # rho is stationary for K_rho(length) + rho w
    h = 1e-6 * max(rho, 1.0)
    d = (k_rho(length, rho + h) - k_rho(length, rho - h)) / (2 * h)
    assert d == pytest.approx(-w, abs=1e-6)


def test_excursion_quadrature_matches_closed_form():
    rng = np.random.default_rng(5)
    for _ in range(5):
        s = rng.uniform(0, 0.6)
        t = rng.uniform(s + 0.1, 1.0)
        w = rng.uniform(0.05, 0.9) * (t - s) ** 2 / 2
        traj, _, cost = var.optimal_excursion(s, t, w, 3.0, 20001)
        assert var.i_S_functional(traj, 3.0) == pytest.approx(cost, abs=1e-6)


def test_zero_excursion_is_idle_cost():
    traj, rho, cost = var.optimal_excursion(0.2, 0.7, 0.0, 2.0, 101)
    assert rho == 0 and np.all(traj.values == 0)
    assert cost == pytest.approx(l_c(0.7, 2.0) - l_c(0.2, 2.0), abs=1e-15)


def test_excursion_domain():
    with pytest.raises(ValueError):
        var.excursion_rho(0.5, 0.125)
    with pytest.raises(ValueError):
        var.optimal_excursion(0.5, 0.4, 0.01, 2.0)


@given(st.floats(0.0, 0.5), st.floats(0.1, 1.5), st.floats(0.0, 0.5), st.floats(-1.0, 2.0))
@settings(max_examples=40, deadline=None)
def test_critical_parabola(s, length, w, theta):
    t = s + length
    traj = var.optimal_excursion_critical(s, t, w, 20001)
    assert np.trapezoid(traj.values, traj.grid) == pytest.approx(w, abs=1e-8)
    cost = var.critical_excursion_cost(s, t, w, theta)
    assert var.i_S_breve_functional(traj, theta) == pytest.approx(cost, rel=1e-7, abs=1e-6)


def test_regulator_closed_form_value():
    phi, cost = var.optimal_regulator(0.25, 0.6, 2.0, 20001)
    assert cost == pytest.approx(0.05791462074373503, rel=1e-12)
    assert phi.values[-1] == 0.25
    assert var.phi_integral(phi, 2.0) == pytest.approx(cost, abs=1e-7)


@given(st.floats(0.05, 0.6), st.floats(0.0, 0.9), st.sampled_from([1.5, 3.0]))
@settings(max_examples=30, deadline=None)
def test_regulator_is_admissible(a, tau, c):
    phi, cost = var.optimal_regulator(a, tau, c, 4001)
    if phi is None:
        assert cost == math.inf
        return
    slopes = phi.derivative
    assert np.all(slopes <= 1 + 1e-9)
    assert np.all(np.diff(phi.values) >= -1e-12)
    flat = phi.values <= 0
    assert phi.grid[flat].max() >= min(tau, 1.0) - 2 * phi.step


def test_regulator_infeasible_and_degenerate():
    assert var.optimal_regulator(0.9, 0.5, 2.0) == (None, math.inf)
    phi, cost = var.optimal_regulator(0.0, 0.0, 2.0, 11)
    assert np.all(phi.values == 0) and cost == pytest.approx(l_c(1.0, 2.0))


def test_critical_regulator():
    phi, cost = var.optimal_regulator_critical(0.5, 1.0, T=3.0, N=3001)
    assert cost == pytest.approx(1 / 6)
    assert np.all(np.diff(phi.values) >= 0)
    assert phi.derivative[-1] == pytest.approx(3.0 - 1.0, abs=2e-3)
    assert var.regulator_cost_critical(2.0, 1.0) == pytest.approx(2 / 6)


def test_i_phi_penalises_flat_stretches():
    c = 2.0
    phi = Trajectory(np.concatenate([np.zeros(501), np.linspace(0, 0.25, 501)[1:]]))
    integral = var.phi_integral(phi, c)
    assert var.i_phi_functional(phi, c) == pytest.approx(max(integral + k_rho(0.5, c), 0.0), abs=1e-12)
    assert var.i_phi_functional(Trajectory(np.array([0.0, 0.3, 0.1])), c) == math.inf


def test_i_S_rejects_steep_descent():
    bad = Trajectory(np.array([0.0, -0.6, -1.2]))
    assert var.i_S_functional(bad, 2.0) == math.inf


def test_increasing_rearrangement():
    phi = Trajectory(np.array([0.0, 0.3, 0.35, 0.9, 0.95]))
    r = var.increasing_rearrangement(phi)
    assert np.all(np.diff(r.derivative) >= -1e-12)
    assert r.values[-1] == pytest.approx(phi.values[-1])
