"""Vertex-saturation construction of G(n, c/n) and its component statistics.

At each step one generated-but-unsaturated vertex (or, if there is none, a
fresh vertex) is saturated: it is joined by independent p-coins to every
vertex not yet saturated.  The queue ``q`` of generated, unsaturated
vertices returns to zero exactly when a connected component is finished, so
component sizes are the gaps between zeros of ``q``.  Edges from the
saturated vertex to vertices already in the queue are surplus ("excess")
edges of the current component and are counted in ``e``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from .seeding import stream
from .trajectory import Trajectory

__all__ = [
    "GraphParams",
    "ExplorationTrace",
    "ComponentSpectrum",
    "explore",
    "components",
    "skorohod",
    "sample_direct",
    "sample_edges",
    "spectrum_from_edges",
    "DIRECT_MAX_N",
    "write_trace_csv",
    "write_spectra_csv",
    "explore_spectrum",
    "explore_summary",
    "shape_sampler",
    "spectrum_sampler",
    "decode_shape",
    "EXPLORE_MAX_N",
]

DIRECT_MAX_N = 100_000
EXPLORE_MAX_N = 10_000_000


@dataclass(frozen=True)
class GraphParams:
    """Vertex count ``n`` and intensity ``c``; the edge probability is c/n."""

    n: int
    c: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not (self.c >= 0 and np.isfinite(self.c)):
            raise ValueError(f"c must be a finite non-negative real, got {self.c!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "c", float(self.c))

    @classmethod
    def from_p(cls, n: int, p: float) -> "GraphParams":
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {p!r}")
        return cls(n, p * n)

    @property
    def p(self) -> float:
        return min(max(self.c / self.n, 0.0), 1.0)


@dataclass(frozen=True)
class ExplorationTrace:
    """Integer sample path of the exploration, indices ``0..n``.

    ``v`` generated vertices, ``q = v - i`` queue length, ``e`` cumulative
    excess edges, ``phi`` number of zeros of ``q`` in ``1..i``, ``s`` the
    centred arrival walk and ``eps`` the boundary correction, with
    ``q == s + eps + phi`` identically.
    """

    v: np.ndarray
    q: np.ndarray
    e: np.ndarray
    phi: np.ndarray
    s: np.ndarray
    eps: np.ndarray

    @property
    def n(self) -> int:
        return self.v.size - 1

    def check(self):
        """Raise ``ValueError`` if any structural invariant fails."""
        n = self.n
        arrays = (self.v, self.q, self.e, self.phi, self.s, self.eps)
        if n < 1 or any(a.shape != (n + 1,) for a in arrays):
            raise ValueError("trace arrays must all have length n + 1 >= 2")
        if any(a[0] != 0 for a in arrays):
            raise ValueError("trace must start at zero")
        i = np.arange(n + 1)
        if np.any(self.q != self.v - i) or np.any(self.q < 0):
            raise ValueError("queue must equal v - i and be non-negative")
        if self.v[-1] != n:
            raise ValueError("all n vertices must be generated by time n")
        if np.any(np.diff(self.e) < 0):
            raise ValueError("excess-edge count must be non-decreasing")
        zeros = np.concatenate(([0], np.cumsum(self.q[1:] == 0)))
        if np.any(self.phi != zeros):
            raise ValueError("phi must count the zeros of q")
        if np.any(self.q != self.s + self.eps + self.phi):
            raise ValueError("q must decompose as s + eps + phi")
        return self


@dataclass(frozen=True)
class ComponentSpectrum:
    """Component sizes in descending order with aligned excess-edge counts.

    Equal sizes are ordered by descending excess so that ``largest_excess``
    is well defined.
    """

    sizes: tuple
    excess: tuple

    def __post_init__(self):
        pairs = sorted(zip((int(s) for s in self.sizes), (int(x) for x in self.excess)), reverse=True)
        if len(pairs) != len(self.sizes) or len(self.sizes) != len(self.excess) or not pairs:
            raise ValueError("sizes and excess must be non-empty and aligned")
        for size, ex in pairs:
            if size < 1 or ex < 0 or ex > size * (size - 1) // 2 - (size - 1):
                raise ValueError(f"impossible component (size={size}, excess={ex})")
        object.__setattr__(self, "sizes", tuple(p[0] for p in pairs))
        object.__setattr__(self, "excess", tuple(p[1] for p in pairs))

    @property
    def count(self) -> int:
        return len(self.sizes)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def largest(self) -> int:
        return self.sizes[0]

    @property
    def largest_excess(self) -> int:
        return self.excess[0]

    def key(self):
        """Canonical ``(count, sizes, pairs)`` key used by the exact oracle."""
        return (self.count, self.sizes, tuple(zip(self.sizes, self.excess)))

    def shape_key(self):
        """``(count, sizes)``: the part of the key compared in law tests."""
        return (self.count, self.sizes)


# --------------------------------------------------------------------------
# numba kernels


@numba.njit(cache=True)
def _explore_trace_kernel(rng, n, p, v, q, e, phi, s, eps):
    qp = 0
    restart_coins = 0
    for i in range(1, n + 1):
        if qp > 0:
            b = rng.binomial(n - qp - (i - 1), p)
            qi = qp + b - 1
            s[i] = s[i - 1] + b - 1
            extra_e = rng.binomial(qp - 1, p) if qp > 1 else 0
        else:
            b = rng.binomial(n - i, p)
            # the coin xi_{i, n-i+1}: keeps s a sum of n - q - (i-1) coins
            coin = rng.binomial(1, p)
            restart_coins += coin
            qi = b
            s[i] = s[i - 1] + b + coin - 1
            extra_e = 0
        q[i] = qi
        v[i] = qi + i
        e[i] = e[i - 1] + extra_e
        phi[i] = phi[i - 1] + (1 if qi == 0 else 0)
        eps[i] = (1 if qi > 0 else 0) - restart_coins
        qp = qi


@numba.njit(cache=True)
def _explore_components_kernel(rng, n, p, sizes, excess):
    """Run the exploration keeping only per-component totals; returns count."""
    qp = 0
    k = 0
    start = 0
    cur_excess = 0
    for i in range(1, n + 1):
        if qp > 0:
            b = rng.binomial(n - qp - (i - 1), p)
            if qp > 1:
                cur_excess += rng.binomial(qp - 1, p)
            qi = qp + b - 1
        else:
            qi = rng.binomial(n - i, p)
        if qi == 0:
            sizes[k] = i - start
            excess[k] = cur_excess
            k += 1
            start = i
            cur_excess = 0
        qp = qi
    return k


@numba.njit(cache=True)
def _explore_summary_kernel(rng, n, p):
    """(count, largest size, excess of the largest) without storing sizes."""
    qp = 0
    count = 0
    start = 0
    cur_excess = 0
    best = 0
    best_excess = 0
    for i in range(1, n + 1):
        if qp > 0:
            b = rng.binomial(n - qp - (i - 1), p)
            if qp > 1:
                cur_excess += rng.binomial(qp - 1, p)
            qi = qp + b - 1
        else:
            qi = rng.binomial(n - i, p)
        if qi == 0:
            size = i - start
            count += 1
            if size > best or (size == best and cur_excess > best_excess):
                best = size
                best_excess = cur_excess
            start = i
            cur_excess = 0
        qp = qi
    return count, best, best_excess


@numba.njit(cache=True)
def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


@numba.njit(cache=True)
def _union_edges(n, us, vs, sizes, excess):
    parent = np.arange(n)
    csize = np.ones(n, dtype=np.int64)
    cedges = np.zeros(n, dtype=np.int64)
    for k in range(us.size):
        a = _find(parent, us[k])
        b = _find(parent, vs[k])
        if a == b:
            cedges[a] += 1
        else:
            if csize[a] < csize[b]:
                a, b = b, a
            parent[b] = a
            csize[a] += csize[b]
            cedges[a] += cedges[b] + 1
    m = 0
    for x in range(n):
        if parent[x] == x:
            sizes[m] = csize[x]
            excess[m] = cedges[x] - (csize[x] - 1)
            m += 1
    return m


@numba.njit(cache=True)
def _direct_kernel(rng, n, p, sizes, excess):
    """Flip every edge coin of K_n; returns (component count, edges drawn)."""
    parent = np.arange(n)
    csize = np.ones(n, dtype=np.int64)
    cedges = np.zeros(n, dtype=np.int64)
    total = 0
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                total += 1
                a = _find(parent, i)
                b = _find(parent, j)
                if a == b:
                    cedges[a] += 1
                else:
                    if csize[a] < csize[b]:
                        a, b = b, a
                    parent[b] = a
                    csize[a] += csize[b]
                    cedges[a] += cedges[b] + 1
    m = 0
    for x in range(n):
        if parent[x] == x:
            sizes[m] = csize[x]
            excess[m] = cedges[x] - (csize[x] - 1)
            m += 1
    return m, total


@numba.njit(cache=True)
def _direct_edge_kernel(rng, n, p):
    us = []
    vs = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                us.append(i)
                vs.append(j)
    out = np.empty((len(us), 2), dtype=np.int64)
    for k in range(len(us)):
        out[k, 0] = us[k]
        out[k, 1] = vs[k]
    return out


@numba.njit(cache=True)
def _shape_code(sizes, k, n):
    """Integer code of the descending size list, base n + 1."""
    srt = np.sort(sizes[:k])
    code = 0
    for j in range(k - 1, -1, -1):
        code = code * (n + 1) + srt[j]
    return code


@numba.njit(cache=True)
def _explore_shape_code(rng, n, p, sizes, excess):
    k = _explore_components_kernel(rng, n, p, sizes, excess)
    return _shape_code(sizes, k, n)


@numba.njit(cache=True)
def _direct_shape_code(rng, n, p, sizes, excess):
    k, _ = _direct_kernel(rng, n, p, sizes, excess)
    return _shape_code(sizes, k, n)


@numba.njit(cache=True)
def _direct_components_kernel(rng, n, p, sizes, excess):
    k, _ = _direct_kernel(rng, n, p, sizes, excess)
    return k


def decode_shape(code: int, n: int):
    """Inverse of the shape code: ``(count, sizes)`` with sizes descending."""
    sizes = []
    while code:
        code, d = divmod(code, n + 1)
        sizes.append(d)
    return (len(sizes), tuple(sorted(sizes, reverse=True)))


# --------------------------------------------------------------------------
# public operations


def _check_explore(params: GraphParams):
    if params.n > EXPLORE_MAX_N:
        raise ValueError(f"n={params.n} exceeds the supported maximum {EXPLORE_MAX_N}")


def explore(params: GraphParams, seed=0) -> ExplorationTrace:
    """Run the saturation process once and return its full integer trace.

    Parameters
    ----------
    params : GraphParams
    seed : RngSeed, int or numpy Generator
        An int is taken as the master seed of replication 0.
    """
    _check_explore(params)
    n = params.n
    arrays = [np.zeros(n + 1, dtype=np.int64) for _ in range(6)]
    _explore_trace_kernel(stream(seed), n, params.p, *arrays)
    return ExplorationTrace(*arrays)


def components(trace: ExplorationTrace) -> ComponentSpectrum:
    """Component sizes and excess edges read off the zeros of the queue."""
    trace.check()
    zeros = np.flatnonzero(trace.q == 0)
    sizes = np.diff(zeros)
    excess = np.diff(trace.e[zeros])
    if int(trace.phi[-1]) != sizes.size:
        raise ValueError("component count disagrees with phi_n")
    return ComponentSpectrum(tuple(sizes.tolist()), tuple(excess.tolist()))


def explore_spectrum(params: GraphParams, seed=0) -> ComponentSpectrum:
    """Same law as ``components(explore(...))`` without materialising the trace."""
    _check_explore(params)
    n = params.n
    sizes = np.empty(n, dtype=np.int64)
    excess = np.empty(n, dtype=np.int64)
    k = _explore_components_kernel(stream(seed), n, params.p, sizes, excess)
    return ComponentSpectrum(tuple(sizes[:k].tolist()), tuple(excess[:k].tolist()))


def explore_summary(params: GraphParams, seed=0):
    """``(count, largest, largest_excess)`` of one exploration run."""
    _check_explore(params)
    return _explore_summary_kernel(stream(seed), params.n, params.p)


def skorohod(path: Trajectory):
    """Skorohod reflection at zero of a sampled path.

    Returns ``(reflected, regulator)`` with ``regulator_t = -min(inf_{s<=t} x_s, 0)``
    and ``reflected = path + regulator``.
    """
    if len(path) == 0:
        raise ValueError("empty path")
    x = path.values
    regulator = -np.minimum(np.minimum.accumulate(x), 0.0)
    return path.with_values(x + regulator), path.with_values(regulator)


def _check_direct(params: GraphParams):
    if params.n > DIRECT_MAX_N:
        raise ValueError(
            f"direct sampling flips n(n-1)/2 coins; n={params.n} exceeds the limit {DIRECT_MAX_N}"
        )


def sample_edges(params: GraphParams, seed=0) -> np.ndarray:
    """Edge list ``(m, 2)`` of one G(n, p) draw, one coin per vertex pair."""
    _check_direct(params)
    return _direct_edge_kernel(stream(seed), params.n, params.p)


def spectrum_from_edges(n: int, edges) -> ComponentSpectrum:
    """Components of the graph on ``0..n-1`` with the given edge list (union-find)."""
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if edges.size and (edges.min() < 0 or edges.max() >= n):
        raise ValueError("edge endpoint out of range")
    sizes = np.empty(n, dtype=np.int64)
    excess = np.empty(n, dtype=np.int64)
    m = _union_edges(n, edges[:, 0].copy(), edges[:, 1].copy(), sizes, excess)
    return ComponentSpectrum(tuple(sizes[:m].tolist()), tuple(excess[:m].tolist()))


def sample_direct(params: GraphParams, seed=0) -> ComponentSpectrum:
    """Independent validator: flip all edge coins and union-find the components."""
    _check_direct(params)
    n = params.n
    sizes = np.empty(n, dtype=np.int64)
    excess = np.empty(n, dtype=np.int64)
    m, _ = _direct_kernel(stream(seed), n, params.p, sizes, excess)
    return ComponentSpectrum(tuple(sizes[:m].tolist()), tuple(excess[:m].tolist()))


def spectrum_sampler(method: str):
    """Kernel ``(rng, n, p, sizes, excess) -> component count`` filling the
    (unsorted) per-component sizes and excess counts."""
    try:
        return {"explore": _explore_components_kernel, "direct": _direct_components_kernel}[method]
    except KeyError:
        raise ValueError(f"unknown sampler {method!r}") from None


def shape_sampler(method: str):
    """Kernel ``(rng, n, p, sizes, excess) -> shape code`` for bulk law estimates."""
    try:
        return {"explore": _explore_shape_code, "direct": _direct_shape_code}[method]
    except KeyError:
        raise ValueError(f"unknown sampler {method!r}") from None


# --------------------------------------------------------------------------
# CSV export


def write_trace_csv(trace: ExplorationTrace, path, header_lines=()):
    with open(path, "w") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write("i,v,q,e,phi,s\n")
        for i in range(trace.n + 1):
            fh.write(f"{i},{trace.v[i]},{trace.q[i]},{trace.e[i]},{trace.phi[i]},{trace.s[i]}\n")


def write_spectra_csv(spectra, path, summary_path=None, header_lines=()):
    """Write ``replication,rank,size,excess`` rows, plus an optional summary file
    with one ``replication,count,largest,largest_excess`` row per replication."""
    with open(path, "w") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write("replication,rank,size,excess\n")
        for r, spec in enumerate(spectra):
            for rank, (size, ex) in enumerate(zip(spec.sizes, spec.excess), start=1):
                fh.write(f"{r},{rank},{size},{ex}\n")
    if summary_path is not None:
        with open(summary_path, "w") as fh:
            for line in header_lines:
                fh.write(f"# {line}\n")
            fh.write("replication,count,largest,largest_excess\n")
            for r, spec in enumerate(spectra):
                fh.write(f"{r},{spec.count},{spec.largest},{spec.largest_excess}\n")
