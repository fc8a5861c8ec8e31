"""Deterministic per-replication random streams.

Every replication ``r`` of a Monte Carlo run under master seed ``m`` draws
from its own PCG64 generator whose seed is ``mix64(m, r)``.  The mix is the
SplitMix64 finaliser applied twice, so neighbouring replication indices give
unrelated seeds.  The 64-bit stream seed is expanded to the 128-bit PCG64
state and increment by further SplitMix64 steps and written into the bit
generator directly, which lets bulk loops re-seed one generator object per
replication cheaply.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["RngSeed", "mix64", "stream", "reseed", "pcg_generator"]

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix(z: int) -> int:
    z = (z + _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def mix64(master: int, replication: int) -> int:
    """64-bit avalanche mix of ``(master, replication)``."""
    if master < 0 or replication < 0:
        raise ValueError("seeds must be non-negative")
    h = _splitmix(master & _MASK)
    return _splitmix(h ^ ((replication * _GOLDEN) & _MASK))


@dataclass(frozen=True)
class RngSeed:
    master: int
    replication: int = 0

    def __post_init__(self):
        if not (0 <= self.master <= _MASK and 0 <= self.replication <= _MASK):
            raise ValueError("master and replication must be 64-bit unsigned")

    @property
    def stream_seed(self) -> int:
        return mix64(self.master, self.replication)

    def generator(self) -> np.random.Generator:
        return pcg_generator(self.stream_seed)


def _pcg_state(seed: int) -> dict:
    a = _splitmix(seed)
    b = _splitmix(a)
    inc = _splitmix(b) | 1
    return {
        "bit_generator": "PCG64",
        "state": {"state": (a << 64) | b, "inc": (inc << 64 | _splitmix(inc)) | 1},
        "has_uint32": 0,
        "uinteger": 0,
    }


def reseed(bitgen: np.random.PCG64, seed: int) -> None:
    """Put ``bitgen`` into the state derived from the 64-bit ``seed``."""
    bitgen.state = _pcg_state(seed & _MASK)


def pcg_generator(seed: int) -> np.random.Generator:
    bg = np.random.PCG64(0)
    reseed(bg, seed)
    return np.random.Generator(bg)


def stream(seed) -> np.random.Generator:
    """Coerce an ``RngSeed``, an int master seed or a Generator to a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, RngSeed):
        return seed.generator()
    return RngSeed(int(seed)).generator()
