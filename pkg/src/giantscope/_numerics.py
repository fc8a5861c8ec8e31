"""Stable elementary functions and 1-d solvers shared by the rate modules."""

from __future__ import annotations

import math

import numpy as np
from scipy import optimize, special

SERIES_CUTOFF = 1.0
_TERMS = 14


def _even_series(coef, y):
    y2 = y * y
    acc = 0.0
    for a in reversed(coef):
        acc = acc * y2 + a
    return acc * y2


# Taylor coefficients in y^2 of log(sinh y / y) and y coth y - 1, from the
# Bernoulli numbers; used for y = x/2 < 1/2 where the direct forms cancel.
_B = special.bernoulli(2 * _TERMS)
_LOG_SINHC = [float(4**k * _B[2 * k] / (2 * k * math.factorial(2 * k))) for k in range(1, _TERMS + 1)]
_Y_COTH = [float(4**k * _B[2 * k] / math.factorial(2 * k)) for k in range(1, _TERMS + 1)]


def log_ratio(x):
    """``log(x / (1 - exp(-x)))`` for ``x >= 0``, equal to 0 at ``x = 0``.

    Computed as ``x/2 - log(sinh(x/2) / (x/2))``.
    """
    x = float(x)
    if x < SERIES_CUTOFF:
        return x / 2 - _even_series(_LOG_SINHC, x / 2)
    return math.log(x) - math.log(-math.expm1(-x))


def ratio(x):
    """``x / (1 - exp(-x))`` with the removable singularity at 0 filled in."""
    x = float(x)
    if x < 1e-3:
        return 1 + x / 2 + x * x / 12 - x**4 / 720
    return x / -math.expm1(-x)


def bose(x):
    """``x / (exp(x) - 1)``, equal to 1 at 0."""
    x = float(x)
    if abs(x) < 1e-3:
        return 1 - x / 2 + x * x / 12 - x**4 / 720
    return x / math.expm1(x)


def saddle_gap(x):
    """``x / (1 - e^-x) - x/2 - 1 = (x/2) coth(x/2) - 1``; ~ x^2/12 near 0."""
    x = float(x)
    if x < SERIES_CUTOFF:
        return _even_series(_Y_COTH, x / 2)
    return x / -math.expm1(-x) - x / 2 - 1


def rel_entropy(x, y):
    """``y * pi(x / y) = x log(x/y) - x + y`` with ``0 log 0 = 0``,
    ``0 * pi(0/0) = 0`` and ``0 * pi(inf) = inf``."""
    if x < 0 or y < 0:
        return math.inf
    if x == 0:
        return y
    if y == 0:
        return math.inf
    return x * math.log(x / y) - x + y


def root(fn, lo, hi, xtol=1e-15):
    """Bracketed root of ``fn`` on ``[lo, hi]`` (signs must differ)."""
    flo, fhi = fn(lo), fn(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ValueError(f"root not bracketed on [{lo}, {hi}]: f={flo}, {fhi}")
    return optimize.brentq(fn, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=500)


def maximize(fn, lo, hi, grid=4096, xatol=1e-12, values=None):
    """Global maximum of a 1-d function on ``[lo, hi]``: grid scan, then a
    bounded Brent refinement in the two cells around the best grid point.

    Returns ``(max value, argmax)``.  ``values`` may carry precomputed
    ``fn`` values on ``np.linspace(lo, hi, grid)``.
    """
    if hi <= lo:
        return fn(lo), lo
    ts = np.linspace(lo, hi, grid)
    vals = np.array([fn(t) for t in ts]) if values is None else np.asarray(values)
    k = int(np.nanargmax(vals))
    best, arg = float(vals[k]), float(ts[k])
    a, b = ts[max(k - 1, 0)], ts[min(k + 1, grid - 1)]
    res = optimize.minimize_scalar(
        lambda t: -fn(t), bounds=(a, b), method="bounded", options={"xatol": xatol}
    )
    if res.success and -res.fun > best:
        best, arg = float(-res.fun), float(res.x)
    return best, arg


def minimize(fn, lo, hi, grid=4096, xatol=1e-12):
    val, arg = maximize(lambda t: -fn(t), lo, hi, grid=grid, xatol=xatol)
    return -val, arg
