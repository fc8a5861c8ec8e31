"""Gaussian fluctuation parameters, the critical-window limit process and a
deterministic Monte Carlo harness."""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .exploration import GraphParams, _explore_summary_kernel, decode_shape, shape_sampler
from .rates import lln_constants
from .seeding import mix64, reseed, stream

__all__ = [
    "LimitParams",
    "clt_params",
    "mdp_rate",
    "CriticalPath",
    "simulate_critical_limit",
    "excursions",
    "MCSummary",
    "mc_harness",
    "worker_count",
    "CltEstimator",
    "CriticalGraphEstimator",
    "CriticalLimitEstimator",
    "empirical_shape_law",
    "ks_distance",
]

STATS = ("alpha", "beta", "gamma")


@dataclass(frozen=True)
class LimitParams:
    """Mean and covariance of the fluctuations of (count, largest size,
    excess of the largest).  Entries involving the giant are NaN and
    ``valid_beta_gamma`` is False when ``c <= 1``."""

    c: float
    theta: float
    mean: np.ndarray = field(repr=False)
    cov: np.ndarray = field(repr=False)
    valid_beta_gamma: bool

    def to_json(self, meta=None):
        clean = lambda a: [None if math.isnan(x) else x for x in np.ravel(a)]
        doc = {
            "c": self.c,
            "theta": self.theta,
            "mean": clean(self.mean),
            "cov": [clean(row) for row in self.cov],
            "valid_beta_gamma": self.valid_beta_gamma,
        }
        if meta is not None:
            doc = {"meta": meta, **doc}
        return json.dumps(doc, indent=1)


def clt_params(c, theta=0.0):
    """Limit law of ``sqrt(n)(alpha^n/n - alpha, beta^n/n - beta, gamma^n/n - gamma)``
    for ``sqrt(n)(c_n - c) -> theta``.  The same numbers, with ``theta``
    read as the moderate-deviation drift, give the centre and the quadratic
    form of the moderate-deviation rate (see :func:`mdp_rate`)."""
    if not c > 0:
        raise ValueError("c must be positive")
    _, beta, _ = lln_constants(c)
    mean = np.full(3, np.nan)
    cov = np.full((3, 3), np.nan)
    mean[0] = -theta * (1 - beta**2) / 2
    cov[0, 0] = beta * (1 - beta) + c * (1 - beta) ** 2 / 2
    valid = c > 1
    if valid:
        # expanded form, term by term, so entries are reproducible to the bit
        d = 1 - c * (1 - beta)
        mean[1] = theta * beta * (1 - beta) / d
        mean[2] = theta * beta**2 / 2
        cov[1, 1] = beta * (1 - beta) / d**2
        cov[2, 2] = beta * (1 - beta) + c * beta * (3 * beta / 2 - 1)
        cov[0, 1] = cov[1, 0] = -beta * (1 - beta) / d
        cov[0, 2] = cov[2, 0] = -beta * (1 - beta) * (c - 1)
        cov[1, 2] = cov[2, 1] = beta * (1 - beta) * (c - 1) / d
    return LimitParams(float(c), float(theta), mean, cov, valid)


def mdp_rate(y, params):
    """Quadratic moderate-deviation rate ``(y - mu)^T Sigma^{-1} (y - mu) / 2``.

    ``y`` is a scalar (count only) or a 3-vector (needs ``c > 1``).
    """
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if y.size == 1:
        return float((y[0] - params.mean[0]) ** 2 / (2 * params.cov[0, 0]))
    if not params.valid_beta_gamma:
        raise ValueError("joint rate needs c > 1")
    d = y - params.mean
    return float(d @ np.linalg.solve(params.cov, d) / 2)


# ---------------------------------------------------------------------------
# critical window limit process


@dataclass(frozen=True)
class CriticalPath:
    """Reflected ``W_t + theta t - t^2/2`` on ``[0, T]`` with cumulative
    Poisson marks of intensity ``x_t``."""

    x: np.ndarray = field(repr=False)
    marks: np.ndarray = field(repr=False)
    dt: float
    theta: float

    @property
    def T(self):
        return self.dt * (self.x.size - 1)

    @property
    def grid(self):
        return np.arange(self.x.size) * self.dt

    def to_csv(self, path, header_lines=()):
        with open(path, "w") as fh:
            for line in header_lines:
                fh.write(f"# {line}\n")
            fh.write("t,x,marks\n")
            for t, x, m in zip(self.grid, self.x, self.marks):
                fh.write(f"{t!r},{x!r},{m}\n")


def simulate_critical_limit(theta, T=None, dt=1e-3, seed=0, noise=True):
    """Euler scheme for the critical-window limit.

    The free path gets Gaussian increments of variance ``dt`` plus the exact
    drift integral ``theta dt - (t_{k+1}^2 - t_k^2)/2``; reflection uses the
    running minimum of the free path, so grid values are exactly zero at
    new minima.  Marks are Poisson with the trapezoid area of ``x`` per cell.
    ``T`` defaults to ``2 theta^+ + 6``.
    """
    if T is None:
        T = 2 * max(theta, 0.0) + 6.0
    if not (T > 0 and dt > 0):
        raise ValueError("T and dt must be positive")
    n = int(round(T / dt))
    rng = stream(seed)
    t = np.arange(n + 1) * dt
    inc = theta * dt - (t[1:] ** 2 - t[:-1] ** 2) / 2
    if noise:
        inc = inc + math.sqrt(dt) * rng.standard_normal(n)
    y = np.concatenate([[0.0], np.cumsum(inc)])
    x = y - np.minimum(np.minimum.accumulate(y), 0.0)
    x[x < 0] = 0.0
    area = dt * (x[:-1] + x[1:]) / 2
    counts = rng.poisson(area) if noise else np.zeros(n, dtype=np.int64)
    marks = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
    return CriticalPath(x, marks, float(dt), float(theta))


def excursions(path, min_len=None):
    """Completed excursions of ``path.x`` away from zero.

    Returns ``(lengths, marks)`` sorted by decreasing length.  An excursion
    runs between consecutive grid zeros with at least one positive value in
    between; the stretch after the last zero is not completed and is left
    out.  ``min_len`` defaults to ``2 dt``.
    """
    if min_len is None:
        min_len = 2 * path.dt
    zeros = np.flatnonzero(path.x == 0)
    if zeros.size < 2:
        return np.zeros(0), np.zeros(0, dtype=np.int64)
    i, j = zeros[:-1], zeros[1:]
    keep = (j - i >= 2) & ((j - i) * path.dt >= min_len - 1e-12 * path.dt)
    i, j = i[keep], j[keep]
    lengths = (j - i) * path.dt
    marks = path.marks[j] - path.marks[i]
    order = np.argsort(-lengths, kind="stable")
    return lengths[order], marks[order]


# ---------------------------------------------------------------------------
# Monte Carlo harness


def worker_count(requested=None):
    """Worker processes to use: ``requested`` capped by GIANTSCOPE_THREADS."""
    cap = os.environ.get("GIANTSCOPE_THREADS")
    cap = max(1, int(cap)) if cap else (os.cpu_count() or 1)
    if requested is None:
        return cap
    return max(1, min(int(requested), cap))


@dataclass
class MCSummary:
    names: tuple
    mean: dict
    var: dict
    stderr: dict
    reps: int
    seed: int
    values: np.ndarray | None = field(default=None, repr=False)

    def to_json(self, meta=None):
        rows = [
            {
                "statistic": k,
                "mean": self.mean[k],
                "var": self.var[k],
                "stderr": self.stderr[k],
                "reps": self.reps,
                "seed": self.seed,
            }
            for k in self.names
        ]
        doc = {"meta": meta, "summaries": rows} if meta is not None else rows
        return json.dumps(doc, indent=1)


def _run_block(args):
    estimator, master, lo, hi = args
    bg = np.random.PCG64(0)
    rng = np.random.Generator(bg)
    out = []
    for r in range(lo, hi):
        reseed(bg, mix64(master, r))
        out.append(np.atleast_1d(np.asarray(estimator(rng), dtype=float)))
    return np.array(out)


def mc_harness(estimator, reps, master_seed, names=None, workers=1, keep=False):
    """Run ``estimator(rng)`` for replications ``0..reps-1``; replication
    ``r`` draws from the stream ``(master_seed, r)``.

    Summaries are exact-rounded sums (``math.fsum``), hence independent of
    the order in which blocks finish and of ``workers``.  ``workers`` is
    capped by GIANTSCOPE_THREADS; the estimator must be picklable when more
    than one worker is used.
    """
    if int(reps) != reps or reps < 1:
        raise ValueError("reps must be a positive integer")
    reps = int(reps)
    workers = worker_count(workers)
    blocks = max(1, min(workers * 4, reps)) if workers > 1 else 1
    bounds = [reps * b // blocks for b in range(blocks + 1)]
    jobs = [(estimator, master_seed, bounds[b], bounds[b + 1]) for b in range(blocks)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_run_block, jobs))
    else:
        parts = [_run_block(j) for j in jobs]
    values = np.concatenate(parts, axis=0)
    k = values.shape[1]
    if names is None:
        names = getattr(estimator, "names", None) or tuple(f"x{i}" for i in range(k))
    names = tuple(names)
    mean, var, se = {}, {}, {}
    for i, name in enumerate(names):
        col = values[:, i]
        m = math.fsum(col) / reps
        v = math.fsum((col - m) ** 2) / (reps - 1) if reps > 1 else 0.0
        mean[name], var[name], se[name] = m, v, math.sqrt(v / reps)
    return MCSummary(names, mean, var, se, reps, int(master_seed), values if keep else None)


class CltEstimator:
    """Centred, sqrt(n)-scaled (count, largest, excess of largest) at
    ``c_n = c + theta / sqrt(n)``."""

    names = STATS

    def __init__(self, n, c, theta=0.0):
        self.n, self.c, self.theta = int(n), float(c), float(theta)
        self.params = GraphParams(self.n, self.c + self.theta / math.sqrt(self.n))
        self.centre = lln_constants(self.c)

    def __call__(self, rng):
        count, largest, excess = _explore_summary_kernel(rng, self.n, self.params.p)
        rn = math.sqrt(self.n)
        a, b, g = self.centre
        return (rn * (count / self.n - a), rn * (largest / self.n - b), rn * (excess / self.n - g))


class CriticalGraphEstimator:
    """Largest component over ``n^(2/3)`` and its excess at
    ``c_n = 1 + theta n^(-1/3)``."""

    names = ("largest", "excess")

    def __init__(self, n, theta):
        self.n, self.theta = int(n), float(theta)
        self.params = GraphParams(self.n, 1 + self.theta * self.n ** (-1 / 3))

    def __call__(self, rng):
        _, largest, excess = _explore_summary_kernel(rng, self.n, self.params.p)
        return (largest / self.n ** (2 / 3), excess)


class CriticalLimitEstimator:
    """Longest completed excursion of the limit process and its marks."""

    names = ("largest", "excess")

    def __init__(self, theta, T=None, dt=1e-3, min_len=None):
        self.theta, self.T, self.dt, self.min_len = float(theta), T, float(dt), min_len

    def __call__(self, rng):
        path = simulate_critical_limit(self.theta, self.T, self.dt, rng)
        lengths, marks = excursions(path, self.min_len)
        if lengths.size == 0:
            return (0.0, 0.0)
        return (lengths[0], marks[0])


def _shape_block(args):
    method, n, p, master, lo, hi = args
    kernel = shape_sampler(method)
    bg = np.random.PCG64(0)
    rng = np.random.Generator(bg)
    sizes = np.empty(n, dtype=np.int64)
    excess = np.empty(n, dtype=np.int64)
    codes = np.empty(hi - lo, dtype=np.int64)
    for r in range(lo, hi):
        reseed(bg, mix64(master, r))
        codes[r - lo] = kernel(rng, n, p, sizes, excess)
    return codes


def empirical_shape_law(n, p, reps, seed, method="explore", workers=1):
    """Empirical law of ``(count, sorted sizes)`` over ``reps`` replications."""
    if method == "direct" and n > 1000:
        raise ValueError("bulk direct sampling is meant for small n")
    workers = worker_count(workers)
    blocks = max(1, min(workers * 4, reps)) if workers > 1 else 1
    bounds = [reps * b // blocks for b in range(blocks + 1)]
    jobs = [(method, int(n), float(p), seed, bounds[b], bounds[b + 1]) for b in range(blocks)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_shape_block, jobs))
    else:
        parts = [_shape_block(j) for j in jobs]
    codes, counts = np.unique(np.concatenate(parts), return_counts=True)
    return {decode_shape(int(k), n): int(v) / reps for k, v in zip(codes, counts)}


def ks_distance(x, y):
    """Two-sample Kolmogorov-Smirnov statistic."""
    return float(stats.ks_2samp(x, y).statistic)
