"""Exact law of component statistics of G(n, p) for n <= 8.

All 2^M edge subsets of K_n (M = n(n-1)/2) are visited in Gray-code order,
so consecutive subsets differ by one edge and the adjacency bitmasks are
updated in O(1).  For every subset the canonical key of its components is
tallied together with the subset's edge count k; the probability of a key is
then ``sum_k count_k p^k (1-p)^(M-k)``.  The integer tallies do not depend
on p and are cached per n.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numba
import numpy as np
from numba import types
from numba.typed import Dict

__all__ = [
    "ExactDistribution",
    "CapacityError",
    "enumerate_exact",
    "tv_distance",
    "expected_count_dp",
    "MAX_N",
]

MAX_N = 8


class CapacityError(ValueError):
    """Raised when exhaustive enumeration is requested beyond ``MAX_N``."""


@numba.njit(cache=True)
def _popcount(x):
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


@numba.njit(cache=True)
def _enumerate_kernel(n, lo, hi):
    m = n * (n - 1) // 2
    ei = np.empty(m, dtype=np.int64)
    ej = np.empty(m, dtype=np.int64)
    b = 0
    for i in range(n):
        for j in range(i + 1, n):
            ei[b] = i
            ej[b] = j
            b += 1
    adj = np.zeros(n, dtype=np.int64)
    g = lo ^ (lo >> 1)
    k = 0
    for b in range(m):
        if (g >> b) & 1:
            adj[ei[b]] |= 1 << ej[b]
            adj[ej[b]] |= 1 << ei[b]
            k += 1
    table = Dict.empty(key_type=types.int64, value_type=types.int64)
    full = (1 << n) - 1
    pairs = np.empty(n, dtype=np.int64)
    for idx in range(lo, hi):
        if idx > lo:
            # Gray code: bit flipped between idx-1 and idx is the lowest set bit of idx
            b = 0
            while not (idx >> b) & 1:
                b += 1
            adj[ei[b]] ^= 1 << ej[b]
            adj[ej[b]] ^= 1 << ei[b]
            if (adj[ei[b]] >> ej[b]) & 1:
                k += 1
            else:
                k -= 1
        remaining = full
        npairs = 0
        while remaining:
            low = remaining & -remaining
            comp = low
            frontier = low
            while frontier:
                nxt = 0
                f = frontier
                while f:
                    lb = f & -f
                    v = 0
                    while (lb >> v) != 1:
                        v += 1
                    nxt |= adj[v]
                    f ^= lb
                nxt &= ~comp
                comp |= nxt
                frontier = nxt
            remaining &= ~comp
            size = _popcount(comp)
            if size > 1:
                deg = 0
                f = comp
                while f:
                    lb = f & -f
                    v = 0
                    while (lb >> v) != 1:
                        v += 1
                    deg += _popcount(adj[v])
                    f ^= lb
                pairs[npairs] = size * 32 + (deg // 2 - (size - 1))
                npairs += 1
        srt = np.sort(pairs[:npairs])
        code = 0
        for t in range(npairs):
            code = code * 512 + srt[t]
        key = code * (m + 1) + k
        if key in table:
            table[key] += 1
        else:
            table[key] = 1
    return table


def _run_chunk(args):
    n, lo, hi = args
    return dict(_enumerate_kernel(n, lo, hi))


@lru_cache(maxsize=None)
def _tallies(n: int, chunks: int = 1, workers: int = 1):
    """Map canonical key -> tuple of subset counts indexed by edge count."""
    m = n * (n - 1) // 2
    total = 1 << m
    chunks = max(1, min(chunks, total))
    bounds = [total * c // chunks for c in range(chunks + 1)]
    jobs = [(n, bounds[c], bounds[c + 1]) for c in range(chunks)]
    if workers > 1 and chunks > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_run_chunk, jobs))
    else:
        parts = [_run_chunk(j) for j in jobs]
    merged = {}
    for part in parts:
        for raw, cnt in part.items():
            code, k = divmod(raw, m + 1)
            merged.setdefault(code, [0] * (m + 1))[k] += cnt
    out = {}
    for code, counts in merged.items():
        out[_decode_key(code, n)] = tuple(counts)
    return out


def _decode_key(code: int, n: int):
    pairs = []
    while code:
        code, d = divmod(code, 512)
        pairs.append(divmod(d, 32))
    pairs.sort(reverse=True)
    singletons = n - sum(s for s, _ in pairs)
    pairs.extend([(1, 0)] * singletons)
    sizes = tuple(s for s, _ in pairs)
    return (len(pairs), sizes, tuple(pairs))


@dataclass(frozen=True)
class ExactDistribution:
    """Exact joint law of (count, sizes, (size, excess) pairs) for G(n, p)."""

    n: int
    p: float
    table: dict = field(repr=False)

    def marginal(self, fn):
        """Law of ``fn(key)`` where ``key = (count, sizes, pairs)``."""
        acc = {}
        for key, prob in self.table.items():
            acc.setdefault(fn(key), []).append(prob)
        return {k: math.fsum(v) for k, v in acc.items()}

    def expectation(self, fn) -> float:
        return math.fsum(fn(key) * prob for key, prob in self.table.items())

    def shape_law(self):
        """Law of ``(count, sorted sizes)``."""
        return self.marginal(lambda key: (key[0], key[1]))

    def count_law(self):
        return self.marginal(lambda key: key[0])

    def largest_law(self):
        return self.marginal(lambda key: key[1][0])

    def total_excess_law(self):
        return self.marginal(lambda key: sum(x for _, x in key[2]))

    def to_json(self, path=None, meta=None):
        entries = [
            {
                "count": key[0],
                "sizes": list(key[1]),
                "excess": [x for _, x in key[2]],
                "prob": prob,
            }
            for key, prob in sorted(self.table.items(), key=lambda kv: kv[0])
        ]
        doc = {"n": self.n, "p": self.p, "entries": entries}
        if meta is not None:
            doc["meta"] = meta
        text = json.dumps(doc, indent=1)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text + "\n")
        return text


def enumerate_exact(n: int, p: float, chunks: int = 1, workers: int | None = None) -> ExactDistribution:
    """Exact law of the component statistics of G(n, p) by full enumeration.

    ``chunks`` splits the subset range into contiguous blocks that may be
    processed by ``workers`` processes; the merged integer tallies, and hence
    the result, do not depend on either.
    """
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    if n > MAX_N:
        raise CapacityError(f"exhaustive enumeration supports n <= {MAX_N}, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if workers is None:
        workers = int(os.environ.get("GIANTSCOPE_THREADS", "1"))
    m = n * (n - 1) // 2
    tallies = _tallies(int(n), int(chunks), int(workers))
    weights = [p**k * (1.0 - p) ** (m - k) for k in range(m + 1)]
    table = {}
    for key, counts in tallies.items():
        prob = math.fsum(c * w for c, w in zip(counts, weights) if c)
        if prob > 0.0:
            table[key] = prob
    return ExactDistribution(int(n), float(p), table)


def tv_distance(d1: dict, d2: dict) -> float:
    """Total-variation distance between two laws given as ``{key: prob}``."""
    keys = set(d1) | set(d2)
    return 0.5 * math.fsum(abs(d1.get(k, 0.0) - d2.get(k, 0.0)) for k in keys)


def expected_count_dp(n: int, p: float) -> float:
    """E[number of components] as ``sum_i P(q_i = 0)``, by forward dynamic
    programming over the exploration queue (no graph enumeration)."""
    dist = np.zeros(n + 1)
    dist[0] = 1.0
    total = []
    for i in range(1, n + 1):
        new = np.zeros(n + 1)
        for qp in np.flatnonzero(dist):
            mass = dist[qp]
            trials = n - i if qp == 0 else n - qp - (i - 1)
            pmf = _binom_pmf(trials, p)
            shift = 0 if qp == 0 else qp - 1
            new[shift : shift + trials + 1] += mass * pmf
        dist = new
        total.append(dist[0])
    return math.fsum(total)


def _binom_pmf(trials: int, p: float) -> np.ndarray:
    k = np.arange(trials + 1)
    return np.array([math.comb(trials, int(j)) * p**j * (1 - p) ** (trials - j) for j in k])
