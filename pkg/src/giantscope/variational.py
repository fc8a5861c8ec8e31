"""Optimal trajectories and process-level action functionals by quadrature.

Paths are :class:`Trajectory` objects read as piecewise-linear interpolants.
The functionals have integrands of the form ``pi(A / B) B`` where ``A`` is a
slope (constant per cell) and ``B`` is linear in the cell, so every cell is
integrated in closed form; the only approximation is the interpolation of
the path itself.  This keeps the integrable log singularity at ``t = 1``
under control.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import xlogy

from ._numerics import root, saddle_gap
from .exploration import skorohod
from .rates import beta_fp, k_rho, l_c
from .trajectory import Trajectory

__all__ = [
    "lln_curves",
    "optimal_excursion",
    "excursion_rho",
    "excursion_cost",
    "optimal_excursion_critical",
    "critical_excursion_cost",
    "i_S_functional",
    "i_S_breve_functional",
    "i_phi_functional",
    "i_Q_functional",
    "phi_integral",
    "optimal_regulator",
    "optimal_regulator_critical",
    "regulator_cost",
    "regulator_cost_critical",
    "increasing_rearrangement",
]

DEFAULT_N = 4096
FLAT_TOL = 1e-12
DOMAIN_TOL = 1e-12
# cell slopes come from differences of values of order 1 over width h
SLOPE_TOL = 1e-9


def lln_curves(c, N=DEFAULT_N):
    """Law-of-large-numbers limits of the queue, the regulator and the
    cumulative excess, each on ``[0, 1]`` with ``N`` points."""
    if not c > 0:
        raise ValueError("c must be positive")
    beta = beta_fp(c)
    t = np.linspace(0.0, 1.0, N)
    q = np.where(t <= beta, 1 - t - np.exp(-c * t), 0.0)
    q = np.maximum(q, 0.0)
    phi = np.where(t >= beta, c / 2 * (t * t - beta * beta) - (c - 1) * (t - beta), 0.0)
    m = np.minimum(t, beta)
    e = np.expm1(-c * m) + c * m - c * m * m / 2
    return Trajectory(q), Trajectory(phi), Trajectory(e)


# ---------------------------------------------------------------------------
# optimal excursions


def excursion_rho(length, w):
    """``rho`` solving ``dK_rho(length)/drho = -w``; 0 when ``w = 0``."""
    y = w / (length * length)
    if not 0 <= y < 0.5:
        raise ValueError("need 0 <= w < length^2 / 2")
    if y == 0:
        return 0.0
    if y < 1e-8:
        # invert y = x/12 - x^3/720 + O(x^5)
        x = 12 * y
        return (x + x**3 / 60) / length
    x = root(lambda x: saddle_gap(x) / x - y if x > 0 else -y, 0.0, 1 / (0.5 - y) + 1, xtol=1e-300)
    return x / length


def excursion_cost(s, t, w, c):
    """Least cost of an excursion on ``[s, t]`` with area ``w``."""
    rho = excursion_rho(t - s, w)
    return k_rho(t - s, rho) + (rho - c) * w + l_c(t, c) - l_c(s, c)


def optimal_excursion(s, t, w, c, N=DEFAULT_N):
    """Cheapest path on ``[s, t]`` vanishing at both ends with area ``w``.

    Returns
    -------
    traj : Trajectory
        The minimiser sampled at ``N`` points.
    rho_tilde : float
        Its exponential rate.
    cost : float
        The minimal value of the functional, in closed form.
    """
    if not 0 <= s < t <= 1:
        raise ValueError("need 0 <= s < t <= 1")
    length = t - s
    rho = excursion_rho(length, w)
    p = np.linspace(s, t, N)
    if rho == 0:
        x = np.zeros(N)
    else:
        x = (s - p) + length * np.expm1(-rho * (p - s)) / math.expm1(-rho * length)
        x[0] = x[-1] = 0.0
    cost = k_rho(length, rho) + (rho - c) * w + l_c(t, c) - l_c(s, c)
    return Trajectory(x, s, t), rho, cost


def optimal_excursion_critical(s, t, w, N=DEFAULT_N):
    """Parabola ``6 w (p - s)(t - p) / (t - s)^3`` on ``[s, t]``."""
    if not (0 <= s < t) or w < 0:
        raise ValueError("need 0 <= s < t and w >= 0")
    p = np.linspace(s, t, N)
    return Trajectory(6 * w * (p - s) * (t - p) / (t - s) ** 3, s, t)


def critical_excursion_cost(s, t, w, theta):
    length = t - s
    return 6 * w * w / length**3 - w + ((t - theta) ** 3 - (s - theta) ** 3) / 6


# ---------------------------------------------------------------------------
# cellwise quadrature


def _mean_log(b0, b1):
    """Mean of ``log`` over the segment from ``b0`` to ``b1`` (both >= 0)."""
    m = (b0 + b1) / 2
    z = np.divide(b1 - b0, 2 * m, out=np.zeros_like(m), where=m > 0)
    small = np.abs(z) < 1e-3
    z2 = z * z
    series = -z2 / 6 - z2 * z2 / 20 - z2**3 / 42
    with np.errstate(divide="ignore", invalid="ignore"):
        zs = np.where(small, 0.5, z)
        exact = (xlogy(1 + zs, 1 + zs) - xlogy(1 - zs, 1 - zs)) / (2 * zs) - 1
        out = np.log(m) + np.where(small, series, exact)
    return out


def _pi_cells(a, b0, b1, h):
    """``sum over cells of int pi(a / B) B`` with ``a`` constant and ``B``
    linear from ``b0`` to ``b1`` on each cell of width ``h``."""
    total = np.zeros_like(a)
    pos = a > 0
    mean_b = (b0 + b1) / 2
    total[~pos] = mean_b[~pos]
    if np.any(pos):
        ap = a[pos]
        total[pos] = xlogy(ap, ap) - ap * _mean_log(b0[pos], b1[pos]) - ap + mean_b[pos]
    return math.fsum(total * h)


def i_S_functional(traj, c):
    """Rate of the centred walk path ``traj``: the integral of
    ``pi((x' + 1) / (c(1 - t - R(x)_t))) c(1 - t - R(x)_t)``, with ``R`` the
    reflection at zero.  ``inf`` if a cell slope is below -1 or the reflected
    path exceeds ``1 - t``."""
    if len(traj) < 2:
        return 0.0
    slope = traj.derivative
    if np.any(slope < -1 - SLOPE_TOL):
        return math.inf
    reflected, _ = skorohod(traj)
    b = c * (1 - traj.grid - reflected.values)
    if np.any(b < -DOMAIN_TOL):
        return math.inf
    b = np.maximum(b, 0.0)
    a = np.maximum(slope + 1, 0.0)
    if np.any((a > 0) & (b[:-1] == 0) & (b[1:] == 0)):
        return math.inf
    return _pi_cells(a, b[:-1], b[1:], traj.step)


def i_S_breve_functional(traj, theta):
    """Critical-window rate ``(1/2) int (x' + p - theta)^2 dp``, exact for the
    piecewise-linear path."""
    if len(traj) < 2:
        return 0.0
    m = traj.derivative
    g = traj.grid
    hi = (m + g[1:] - theta) ** 3
    lo = (m + g[:-1] - theta) ** 3
    return math.fsum((hi - lo) / 6)


def phi_integral(phi, c):
    """``int pi((1 - phi') / (c(1 - t))) c(1 - t) dt`` over the path's span."""
    slope = phi.derivative
    b = c * (1 - phi.grid)
    if np.any(b < -DOMAIN_TOL):
        return math.inf
    b = np.maximum(b, 0.0)
    a = np.maximum(1 - slope, 0.0)
    return _pi_cells(a, b[:-1], b[1:], phi.step)


def _flat_runs(values, tol):
    flat = np.abs(np.diff(values)) < tol
    runs = []
    k = 0
    n = flat.size
    while k < n:
        if flat[k]:
            j = k
            while j < n and flat[j]:
                j += 1
            runs.append((k, j))
            k = j
        else:
            k += 1
    return runs


def i_phi_functional(phi, c, flat_tol=FLAT_TOL):
    """Rate of a regulator path on ``[0, 1]``: the integral part plus
    ``K_c`` of the length of every maximal constancy interval.

    Cells with ``|delta phi| < flat_tol`` count as flat.  ``inf`` for a
    decreasing path or a slope above 1.
    """
    slope = phi.derivative
    if np.any(np.diff(phi.values) < -flat_tol) or np.any(slope > 1 + SLOPE_TOL):
        return math.inf
    total = phi_integral(phi, c)
    for i, j in _flat_runs(phi.values, flat_tol):
        total += k_rho((j - i) * phi.step, c)
    return max(total, 0.0)


def i_Q_functional(q, c):
    """Rate of a queue path on ``[0, 1]``.

    Cells where the path is positive contribute ``pi`` of its slope;
    cells where it vanishes contribute the idle cost up to ``(1 - 1/c)^+``.
    A cell counts as positive when either endpoint is; this indicator is
    resolution dependent for paths grazing zero.
    """
    x = q.values
    t = q.grid
    if np.any(x < -DOMAIN_TOL) or np.any(x > 1 - t + DOMAIN_TOL):
        return math.inf
    slope = q.derivative
    if np.any(slope < -1 - SLOPE_TOL):
        return math.inf
    pos = (x[:-1] > 0) | (x[1:] > 0)
    total = 0.0
    if np.any(pos):
        b = np.maximum(c * (1 - t - np.maximum(x, 0.0)), 0.0)
        a = np.maximum(slope + 1, 0.0)
        if np.any(pos & (a > 0) & (b[:-1] == 0) & (b[1:] == 0)):
            return math.inf
        total += _pi_cells(a[pos], b[:-1][pos], b[1:][pos], q.step)
    tc = max(1 - 1 / c, 0.0)
    zero = np.flatnonzero(~pos)
    if tc > 0 and zero.size:
        lo = np.minimum(t[zero], tc)
        hi = np.minimum(t[zero + 1], tc)
        total += math.fsum(l_c(float(h), c) - l_c(float(l), c) for l, h in zip(lo, hi) if h > l)
    return max(total, 0.0)


# ---------------------------------------------------------------------------
# optimal regulators


def regulator_cost(a, tau, c):
    """Closed-form least regulator cost for terminal value ``a`` and flat
    measure at least ``tau``."""
    m = max(1 - 2 * a, tau)
    if a > 1 - m + DOMAIN_TOL:
        return math.inf
    rest = max(1 - a - m, 0.0)
    scale = c * (1 - m) ** 2 / 2
    if scale == 0:
        tail = 0.0 if rest == 0 else math.inf
    else:
        tail = scale * (xlogy(rest / scale, rest / scale) - rest / scale + 1)
    return l_c(min(m, 1.0), c) + float(tail)


def optimal_regulator(a, tau, c, N=DEFAULT_N):
    """Minimiser of the regulator integral with ``phi_1 = a`` and at least
    ``tau`` flat measure: flat on ``[0, m]``, ``m = (1 - 2a) v tau``, then
    ``phi' = 1 - k(1 - t)`` with ``k`` fixed by the terminal value.

    Returns ``(phi, cost)``; ``(None, inf)`` when no admissible path exists.
    """
    if not (0 <= a <= 1 and 0 <= tau <= 1):
        raise ValueError("a and tau must lie in [0, 1]")
    cost = regulator_cost(a, tau, c)
    if math.isinf(cost):
        return None, cost
    m = max(1 - 2 * a, tau)
    t = np.linspace(0.0, 1.0, N)
    if m >= 1:
        return Trajectory(np.zeros(N)), cost
    k = 2 * (1 - m - a) / (1 - m) ** 2
    # phi_t = (t - m) - k((1 - m)^2 - (1 - t)^2) / 2 after m
    after = (t - m) - k * ((1 - m) ** 2 - (1 - t) ** 2) / 2
    phi = np.where(t > m, after, 0.0)
    phi[-1] = a
    return Trajectory(phi), cost


def regulator_cost_critical(tau, theta):
    return (max(tau - theta, 0.0) ** 3 + theta**3) / 6


def optimal_regulator_critical(tau, theta, T=None, N=DEFAULT_N):
    """Critical analogue: ``phi' = 0`` up to ``tau v theta``, then
    ``t - theta``.  Returns ``(phi on [0, T], cost)``."""
    if tau < 0:
        raise ValueError("tau must be non-negative")
    m = max(tau, theta)
    if T is None:
        T = max(m, 0.0) + 1.0
    t = np.linspace(0.0, T, N)
    start = max(m, 0.0)
    phi = np.where(t > start, ((t - theta) ** 2 - (start - theta) ** 2) / 2, 0.0)
    return Trajectory(phi, 0.0, T), regulator_cost_critical(tau, theta)


def increasing_rearrangement(phi):
    """Path with the same cell slopes sorted into increasing order."""
    slopes = np.sort(phi.derivative)
    vals = np.concatenate([[phi.values[0]], phi.values[0] + np.cumsum(slopes) * phi.step])
    return phi.with_values(vals)
