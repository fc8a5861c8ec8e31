"""Real-valued paths sampled on a uniform time grid."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["Trajectory"]


@dataclass(frozen=True)
class Trajectory:
    """Path values at ``len(values)`` equally spaced points of ``[t0, t1]``.

    The path is read as the piecewise-linear interpolant of its samples, so
    ``derivative`` is the per-cell slope (length ``N - 1``).
    """

    values: np.ndarray
    t0: float = 0.0
    t1: float = 1.0
    grid: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.ndim != 1 or vals.size == 0:
            raise ValueError("trajectory needs a non-empty 1-d array of values")
        if not np.all(np.isfinite(vals)):
            raise ValueError("trajectory values must be finite")
        if vals.size > 1 and not self.t1 > self.t0:
            raise ValueError("grid must be strictly increasing (t1 > t0)")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        grid = np.linspace(self.t0, self.t1, vals.size)
        grid.setflags(write=False)
        object.__setattr__(self, "grid", grid)

    @classmethod
    def from_function(cls, fn, t0=0.0, t1=1.0, n=4096):
        t = np.linspace(t0, t1, n)
        return cls(np.asarray(fn(t), dtype=float) * np.ones_like(t), t0, t1)

    def __len__(self):
        return self.values.size

    @property
    def step(self) -> float:
        return (self.t1 - self.t0) / (self.values.size - 1) if self.values.size > 1 else 0.0

    @property
    def derivative(self) -> np.ndarray:
        return np.diff(self.values) / self.step

    def with_values(self, values) -> "Trajectory":
        return Trajectory(values, self.t0, self.t1)

    def to_csv(self, path, header_lines=()):
        with open(path, "w") as fh:
            for line in header_lines:
                fh.write(f"# {line}\n")
            fh.write("t,value\n")
            for t, v in zip(self.grid, self.values):
                fh.write(f"{t!r},{v!r}\n")
