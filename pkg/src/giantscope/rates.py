"""Closed-form rate functions for component statistics of G(n, c/n).

Large deviations (speed n) of the component count ``a``, the ordered giant
sizes ``u`` and their excess-edge densities ``r``, the phase points of the
count rate, the log-moment generating function of the count, and the
moderate-deviation (critical window) analogues.

Conventions: ``0 log 0 = 0``, ``0 * pi(0/0) = 0``, ``0 * pi(x/0) = inf`` for
``x > 0``.  Infinite rates are returned as ``math.inf``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np
from scipy import optimize
from scipy.special import xlogy

from ._numerics import (
    bose,
    log_ratio,
    maximize,
    minimize,
    rel_entropy,
    root,
    saddle_gap,
)

__all__ = [
    "RateParams",
    "PhasePoints",
    "SpectrumQuery",
    "SolverDisagreement",
    "pi_fn",
    "k_rho",
    "l_c",
    "beta_fp",
    "lln_constants",
    "r_star",
    "k_star",
    "i_joint",
    "count_profile",
    "tau_star",
    "i_alpha",
    "phase_points",
    "i_beta",
    "u_hat",
    "block_thresholds",
    "i_beta_blocks",
    "i_beta_gamma",
    "i_alpha_beta_gamma",
    "i_U",
    "i_UR",
    "contraction_pivot",
    "stepanov_S",
    "legendre_i_alpha",
    "convex_hull_i_alpha",
    "breve_i_UR",
    "breve_i_U",
    "breve_i_beta",
    "breve_i_alpha_UR",
]

NEG_TOL = 1e-12
SUM_TOL = 1e-12
CHECK_TOL = 1e-6


class SolverDisagreement(RuntimeError):
    """A transcendental solve and its grid-scan cross-check disagree."""


@dataclass(frozen=True)
class RateParams:
    c: float
    tol: float = 1e-12
    grid: int = 4096

    def __post_init__(self):
        if not (self.c > 0 and math.isfinite(self.c)):
            raise ValueError("c must be a positive finite real")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if int(self.grid) != self.grid or self.grid < 16:
            raise ValueError("grid must be an integer >= 16")


@dataclass(frozen=True)
class PhasePoints:
    c: float
    a_star: float
    tau_max: float
    a_tilde: float | None = None
    a_hat: float | None = None
    tau_tilde: float | None = None

    def to_json(self, path=None, meta=None):
        doc = asdict(self)
        if meta is not None:
            doc = {"meta": meta, **doc}
        text = json.dumps(doc, indent=1)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text + "\n")
        return text


@dataclass(frozen=True)
class SpectrumQuery:
    """Component count density ``a`` (optional), giant sizes ``u`` in
    non-increasing order and aligned excess densities ``r``.  Shorter ``r``
    is zero-padded."""

    u: tuple = ()
    r: tuple = ()
    a: float | None = None

    def __post_init__(self):
        u = tuple(float(x) for x in self.u)
        r = tuple(float(x) for x in self.r)
        if len(r) > len(u):
            raise ValueError("more excess entries than sizes")
        r = r + (0.0,) * (len(u) - len(r))
        if any(x < 0 for x in u) or any(x < 0 for x in r):
            raise ValueError("sizes and excesses must be non-negative")
        if any(u[i] < u[i + 1] for i in range(len(u) - 1)):
            raise ValueError("sizes must be non-increasing")
        if math.fsum(u) > 1 + SUM_TOL:
            raise ValueError("sizes must sum to at most 1")
        if self.a is not None and not 0 <= self.a <= 1:
            raise ValueError("a must lie in [0, 1]")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "r", r)


def _clamp(value):
    if value < 0:
        if value < -1e-9:
            raise SolverDisagreement(f"rate evaluated to {value}")
        return 0.0
    return value


# ---------------------------------------------------------------------------
# elementary pieces


def pi_fn(x):
    """``pi(x) = x log x - x + 1`` for ``x >= 0``; ``pi(0) = 1``."""
    if x < 0:
        raise ValueError("pi is defined for x >= 0")
    if math.isinf(x):
        return math.inf
    return float(xlogy(x, x) - x + 1)


def k_rho(u, rho):
    """``K_rho(u) = u log(rho u / (1 - e^{-rho u})) - rho u^2 / 2``."""
    if u < 0 or rho < 0:
        raise ValueError("K_rho needs u >= 0 and rho >= 0")
    x = rho * u
    return u * log_ratio(x) - x * u / 2


def l_c(u, c):
    """``L_c(u) = (1-u) log(1-u) + (c - log c) u - c u^2 / 2``."""
    if not 0 <= u <= 1:
        raise ValueError("L_c needs u in [0, 1]")
    return float(xlogy(1 - u, 1 - u)) + (c - math.log(c)) * u - c * u * u / 2


@lru_cache(maxsize=256)
def beta_fp(c, tol=1e-12):
    """Positive root of ``1 - beta = exp(-c beta)`` for ``c > 1``, else 0."""
    if not c > 0:
        raise ValueError("c must be positive")
    if c <= 1:
        return 0.0
    f = lambda b: 1 - b - math.exp(-c * b)
    lo = min(0.5, (c - 1) / (c * c))
    while f(lo) <= 0:
        lo /= 2
    beta = root(f, lo, 1.0, xtol=min(tol, lo) * 1e-3)
    if abs(f(beta)) > tol:
        raise SolverDisagreement(f"fixed point residual {f(beta)} at c={c}")
    return beta


def lln_constants(c):
    """Limits ``(alpha, beta, gamma)`` of the component count, the giant size
    and the giant's excess-edge count, all divided by n."""
    beta = beta_fp(c)
    alpha = 1 - beta - c * (1 - beta) ** 2 / 2
    gamma = (c - 1) * beta - c * beta * beta / 2
    return alpha, beta, gamma


def r_star(u, c):
    """Typical excess density of a component of size ``u``: the ``r`` at
    which the excess maximiser is ``rho = c``."""
    return u * saddle_gap(c * u)


def _k_star_scan(u, r, c):
    """Independent maximisation of ``K_rho(u) + r log(rho/c)`` over a fixed
    log grid ``rho u in [e^-20, e^8]``."""
    f = lambda s: k_rho(u, math.exp(s)) + r * (s - math.log(c))
    lo, hi = -20.0 - math.log(u), 8.0 - math.log(u)
    val, _ = maximize(f, lo, hi, grid=4097, xatol=1e-13)
    return val


def k_star(u, r, c, check=False):
    """``sup_rho K_rho(u) + r log(rho/c)``.

    The interior maximiser solves ``(x/2) coth(x/2) - 1 = r/u`` with
    ``x = rho u``.  With ``check=True`` the value is compared with a
    log-grid scan and :class:`SolverDisagreement` is raised on a gap above
    1e-6.

    Returns 0 for ``r = 0`` and ``inf`` for ``u = 0 < r``.
    """
    if u < 0 or r < 0 or not c > 0:
        raise ValueError("k_star needs u >= 0, r >= 0, c > 0")
    if r == 0:
        return 0.0
    if u == 0:
        return math.inf
    rho = k_star_rho(u, r)
    value = k_rho(u, rho) + r * math.log(rho / c)
    if check:
        ref = _k_star_scan(u, r, c)
        if abs(ref - value) > CHECK_TOL * max(1.0, abs(value)):
            raise SolverDisagreement(f"k_star({u}, {r}, {c}): solve {value} vs scan {ref}")
    return value


def k_star_rho(u, r):
    """Maximiser ``rho`` of ``K_rho(u) + r log rho`` (0 when ``r = 0``)."""
    if r == 0:
        return 0.0
    y = r / u
    if y < 1e-8:
        # invert y = x^2/12 - x^4/720 + O(x^6)
        return math.sqrt(12 * y * (1 + y / 5)) / u
    x = root(lambda x: saddle_gap(x) - y, 0.0, 2 * (y + 1) + 1, xtol=1e-300)
    return x / u


# ---------------------------------------------------------------------------
# joint rate and the component count


def i_joint(q, c):
    """Joint rate of the count density ``a`` and the giant spectrum
    ``(u, r)`` (``q`` is a :class:`SpectrumQuery` with ``a`` set)."""
    if q.a is None:
        raise ValueError("i_joint needs the component density a")
    a, u, r = q.a, q.u, q.r
    su = math.fsum(u)
    if su > 1 - a + SUM_TOL:
        return math.inf
    su = min(su, 1 - a)
    total = 0.0
    for ui, ri in zip(u, r):
        ks = k_star(ui, ri, c)
        if math.isinf(ks):
            return math.inf
        total += ks
    m = max(1 - 2 * a, su)
    total += l_c(m, c) + rel_entropy(1 - a - m, c * (1 - m) ** 2 / 2)
    return _clamp(total)


def count_profile(tau, c):
    """``g(tau) = (1 - tau)(1 - c tau / (2 (e^{c tau} - 1)))``: the component
    density obtained when a flat regulator stretch of length ``tau`` is
    followed by the optimal linear one.  Concave on [0, 1]."""
    return (1 - tau) * (1 - bose(c * tau) / 2)


@lru_cache(maxsize=256)
def _profile_peak(c):
    """``(argmax g, max g)``; the peak is at 0 with value 1/2 for c <= 2."""
    if c <= 2:
        return 0.0, 0.5
    res = optimize.minimize_scalar(
        lambda t: -count_profile(t, c), bounds=(0.0, 1.0), method="bounded", options={"xatol": 1e-14}
    )
    return float(res.x), float(-res.fun)


def tau_star(a, c):
    """Greatest root of ``g(tau) = a`` in [0, 1]; 0 when ``a`` exceeds the
    peak ``a*`` of ``g``.

    ``g`` is concave, so the greatest root is the unique root on
    ``[argmax g, 1]``.
    """
    if not 0 <= a <= 1:
        raise ValueError("a must lie in [0, 1]")
    t_max, a_star = _profile_peak(c)
    if a >= a_star:
        return t_max if a == a_star else 0.0
    if a == 0:
        return 1.0
    return root(lambda t: count_profile(t, c) - a, t_max, 1.0)


def _f_branch(tau, a, c):
    return k_rho(tau, c) + l_c(tau, c) + rel_entropy(1 - a - tau, c * (1 - tau) ** 2 / 2)


def _singleton_branch(a, c):
    return rel_entropy(1 - a, c / 2)


def i_alpha(a, c):
    """Rate function of the component count density ``a``."""
    if not 0 <= a <= 1:
        raise ValueError("a must lie in [0, 1]")
    _, a_star = _profile_peak(c)
    if a >= a_star:
        return _clamp(_singleton_branch(a, c))
    value = _f_branch(tau_star(a, c), a, c)
    if a > 0.5:
        value = min(value, _singleton_branch(a, c))
    return _clamp(value)


@lru_cache(maxsize=64)
def phase_points(c):
    """Peak ``a*`` of the count profile and, for ``c > 2``, the convexity
    boundary ``a~`` (through ``tau~``) and the breakup point ``a^``."""
    if not c > 0:
        raise ValueError("c must be positive")
    t_max, a_star = _profile_peak(c)
    if c <= 2:
        return PhasePoints(float(c), a_star, t_max)
    h = lambda t: math.expm1(-c * t) + c * t - c * t * t
    ts = np.linspace(1.0, 0.0, 4097)
    hi = 1.0
    lo = next(t for t in ts[1:] if h(t) > 0)
    hi = lo + ts[0] - ts[1]
    tau_tilde = root(h, lo, min(hi, 1.0))
    a_tilde = count_profile(tau_tilde, c)
    gap = lambda a: _singleton_branch(a, c) - _f_branch(tau_star(a, c), a, c)
    a_hat = root(gap, 0.5, a_star - 1e-15)
    return PhasePoints(float(c), a_star, t_max, a_tilde, a_hat, tau_tilde)


# ---------------------------------------------------------------------------
# giant sizes


def u_hat(y, c):
    """Root of ``x / (1 - e^{-c x}) = y`` in (0, y]; 0 when ``y <= 1/c``."""
    if y <= 1 / c:
        return 0.0
    return root(lambda x: x / -math.expm1(-c * x) - y if x > 0 else 1 / c - y, 0.0, y)


def i_beta(u, c):
    """Rate function of the largest component size ``u``."""
    if not 0 <= u <= 1:
        raise ValueError("u must lie in [0, 1]")
    crit = max(1 - 1 / c, 0.0)
    if u == 0:
        return _clamp(l_c(crit, c))
    if u >= crit:
        return _clamp(k_rho(u, c) + l_c(u, c))
    if crit / u > 1e12:
        # crit/u copies of u, each costing O(u^3)
        return _clamp(l_c(crit, c) + crit * k_rho(u, c) / u)
    m = math.floor(crit / u)
    rest = min(u_hat(1 - m * u, c), u)
    value = m * k_rho(u, c) + k_rho(rest, c) + l_c(min(m * u + rest, 1.0), c)
    return _clamp(value)


def block_thresholds(c, kmax=None):
    """Roots ``x_k`` of ``x / (1 - e^{-c x}) = 1 - k x`` for k = 1, 2, ...
    (decreasing in k).  Stops at ``kmax`` or once ``x_k`` falls below 1e-6."""
    out = []
    k = 1
    while kmax is None or k <= kmax:
        f = lambda x: (x / -math.expm1(-c * x) if x > 0 else 1 / c) - 1 + k * x
        if f(0.0) >= 0:
            break
        x = root(f, 0.0, 1.0 / k)
        out.append(x)
        if x < 1e-6:
            break
        k += 1
    return out


def i_beta_blocks(u, c):
    """The largest-size rate in the form ``k K_c(u) + L_c(k u)`` for
    ``u in [x_k, x_{k-1}]`` (``x_0 = 1``), valid for ``c > 1``, ``u > 0``."""
    if not (c > 1 and 0 < u <= 1):
        raise ValueError("block form needs c > 1 and 0 < u <= 1")
    k = 1
    while True:
        f = lambda x: x / -math.expm1(-c * x) - 1 + k * x if x > 0 else 1 / c - 1
        xk = root(f, 0.0, 1.0 / k)
        if u >= xk:
            return _clamp(k * k_rho(u, c) + l_c(k * u, c))
        k += 1


def i_beta_gamma(u, r, c):
    """Joint rate of the largest component size ``u`` and its excess ``r``."""
    if u < 0 or r < 0:
        raise ValueError("u and r must be non-negative")
    if u == 0:
        return math.inf if r > 0 else i_beta(0.0, c)
    return _clamp(k_star(u, r, c) - k_rho(u, c) + i_beta(u, c))


def i_alpha_beta_gamma(a, u, r, c, grid=33):
    """Joint rate of the count ``a``, the largest size ``u`` and its excess
    ``r``.  The inner infimum over the total giant mass ``tau`` is taken
    piecewise between multiples of ``u``."""
    if not 0 <= a <= 1 or u < 0 or r < 0:
        raise ValueError("arguments out of domain")
    if u == 0:
        if r > 0:
            return math.inf
        m = max(1 - 2 * a, 0.0)
        return _clamp(l_c(m, c) + rel_entropy(1 - a - m, c * (1 - m) ** 2 / 2))
    if u > 1 - a + SUM_TOL:
        return math.inf
    base = k_star(u, r, c) - k_rho(u, c)
    ku = k_rho(u, c)

    def G(tau):
        k = math.floor(tau / u)
        rest = max(tau - k * u, 0.0)
        return (
            k * ku
            + k_rho(rest, c)
            + l_c(tau, c)
            + rel_entropy(max(1 - a - tau, 0.0), c * (1 - tau) ** 2 / 2)
        )

    lo, hi = max(1 - 2 * a, u), 1 - a
    if (hi - lo) / u > 1e5:
        raise ValueError("u too small for the segmented infimum")
    if hi <= lo:
        return _clamp(base + G(min(lo, 1.0)))
    cuts = [lo]
    k = math.floor(lo / u) + 1
    while k * u < hi:
        cuts.append(k * u)
        k += 1
    cuts.append(hi)
    best = math.inf
    for s, t in zip(cuts[:-1], cuts[1:]):
        if t - s <= 0:
            continue
        val, _ = minimize(G, s, t, grid=grid, xatol=1e-13)
        best = min(best, val, G(s), G(t))
    return _clamp(base + best)


def i_U(u, c):
    """Rate of the ordered giant sizes ``u``."""
    q = u if isinstance(u, SpectrumQuery) else SpectrumQuery(u)
    su = min(math.fsum(q.u), 1.0)
    value = math.fsum(k_rho(x, c) for x in q.u) + l_c(max(1 - 1 / c, su, 0.0), c)
    return _clamp(value)


def i_UR(u, r, c):
    """Rate of the ordered giant sizes ``u`` with aligned excesses ``r``."""
    q = SpectrumQuery(u, r)
    total = 0.0
    for x, y in zip(q.u, q.r):
        ks = k_star(x, y, c)
        if math.isinf(ks):
            return math.inf
        total += ks
    su = min(math.fsum(q.u), 1.0)
    return _clamp(total + l_c(max(1 - 1 / c, su, 0.0), c))


def contraction_pivot(u, c):
    """Count density minimising the joint rate for fixed giants ``u``."""
    su = math.fsum(u)
    if su < 1 - 1 / c:
        return 1 / (2 * c)
    return 1 - su - c * (1 - su) ** 2 / 2


# ---------------------------------------------------------------------------
# log-moment generating function of the count


def _stepanov_integrand(tau, lam, c):
    tau = np.asarray(tau, dtype=float)
    om = 1 - tau
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (
            lam * om
            + c / 2 * om * om * math.exp(-lam)
            - xlogy(om, om)
            - c / 2 * (1 - tau * tau)
            - xlogy(tau, tau)
            + xlogy(tau, -np.expm1(-c * tau))
        )
    return out


def stepanov_S(lam, c, grid=4096):
    """``S_c(lambda) = lim n^{-1} log E exp(lambda * count)``, a supremum over
    the flat-stretch length ``tau in [(1 - e^lambda / c)^+, 1]``."""
    if not c > 0:
        raise ValueError("c must be positive")
    lo = max(1 - math.exp(lam) / c, 0.0)
    ts = np.linspace(lo, 1.0, grid)
    vals = _stepanov_integrand(ts, lam, c)
    f = lambda t: float(_stepanov_integrand(t, lam, c))
    val, _ = maximize(f, lo, 1.0, grid=grid, xatol=1e-14, values=vals)
    return val


@lru_cache(maxsize=16)
def _i_alpha_table(c, grid):
    a = np.linspace(0.0, 1.0, grid)
    return a, np.array([i_alpha(float(x), c) for x in a])


def legendre_i_alpha(lam, c, grid=4096):
    """``sup_a lambda a - I^alpha(a)`` by grid scan plus Brent refinement."""
    a, ia = _i_alpha_table(c, grid)
    vals = lam * a - ia
    f = lambda x: lam * x - i_alpha(x, c)
    val, _ = maximize(f, 0.0, 1.0, grid=grid, xatol=1e-13, values=vals)
    return val


def convex_hull_i_alpha(a, c, lam_lo=-30.0, lam_hi=30.0, grid=1201):
    """``sup_lambda lambda a - S_c(lambda)``: the convex hull of I^alpha."""
    f = lambda lam: lam * a - stepanov_S(lam, c)
    val, _ = maximize(f, lam_lo, lam_hi, grid=grid, xatol=1e-10)
    return val


# ---------------------------------------------------------------------------
# critical window (moderate deviations)


def _breve_validate(u, r):
    # rescaled sizes are not densities, so no bound on their sum
    u = tuple(float(x) for x in u)
    r = tuple(float(x) for x in r)
    if len(r) > len(u):
        raise ValueError("more excess entries than sizes")
    r = r + (0.0,) * (len(u) - len(r))
    if any(x < 0 or not math.isfinite(x) for x in u + r):
        raise ValueError("sizes and excesses must be finite and non-negative")
    if any(u[i] < u[i + 1] for i in range(len(u) - 1)):
        raise ValueError("sizes must be non-increasing")
    return u, r


def breve_i_UR(u, r, theta):
    """Critical-window rate of rescaled giant sizes ``u`` and excesses ``r``
    under drift ``theta``."""
    u, r = _breve_validate(u, r)
    total = theta**3 / 6
    su = math.fsum(u)
    total += max(su - theta, 0.0) ** 3 / 6
    for x, y in zip(u, r):
        if x == 0:
            if y > 0:
                return math.inf
            continue
        total += -(x**3) / 24 + x**3 / 24 * pi_fn(12 * y / x**3)
    return _clamp(total)


def breve_i_U(u, theta):
    """Critical-window rate of rescaled giant sizes ``u`` (excess optimised)."""
    u, _ = _breve_validate(u, ())
    su = math.fsum(u)
    total = theta**3 / 6 + max(su - theta, 0.0) ** 3 / 6 - math.fsum(x**3 for x in u) / 24
    return _clamp(total)


def breve_i_beta(u, theta):
    """Critical-window rate of the rescaled largest component size ``u``."""
    if u < 0:
        raise ValueError("u must be non-negative")
    tp = max(theta, 0.0)
    if u == 0:
        return tp**3 / 6
    if u >= tp:
        return _clamp(-(u**3) / 24 + (u - theta) ** 3 / 6 + theta**3 / 6)
    if theta / u > 1e12:
        return _clamp(tp**3 / 6 - theta * u * u / 24)
    k = math.floor(theta / u)
    w = min(2 * (theta - k * u), u)
    value = -k * u**3 / 24 - w**3 / 24 + (k * u + w - theta) ** 3 / 6 + theta**3 / 6
    return _clamp(value)


def breve_i_alpha_UR(a, u, r, theta_hat):
    """Moderate-deviation rate of the count fluctuation ``a`` jointly with
    rescaled giants ``(u, r)``."""
    return _clamp((a + theta_hat / 2) ** 2 + breve_i_UR(u, r, 0.0))
