"""Fuzzy truth values on the grid and their sup-min convolutions."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .grid import Grid, GridMismatchError, snap_array
from .operators import BinaryOp, basic_op


class ClosureError(ValueError):
    """Exact-mode convolution requested for an operator that leaves the grid."""


@dataclass(frozen=True, eq=False)
class FTV:
    """Membership grades ``grades[i] = f(i/n)``."""

    grid: Grid
    grades: np.ndarray

    def __post_init__(self):
        g = np.array(self.grades, dtype=float)
        if g.shape != (self.grid.n + 1,):
            raise ValueError(f"need {self.grid.n + 1} grades, got shape {g.shape}")
        if np.any(np.isnan(g)) or g.min() < 0 or g.max() > 1:
            raise ValueError("grades must lie in [0, 1]")
        g.setflags(write=False)
        object.__setattr__(self, "grades", g)

    def __eq__(self, other):
        if not isinstance(other, FTV):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.grades, other.grades)

    def __hash__(self):
        return hash((self.grid, self.grades.tobytes()))

    def __le__(self, other: "FTV") -> bool:
        _same(self, other)
        return bool(np.all(self.grades <= other.grades))

    def __repr__(self):
        return f"FTV(n={self.grid.n}, grades={np.array2string(self.grades, precision=3)})"

    @classmethod
    def indicator(cls, grid: Grid, x: float) -> "FTV":
        g = np.zeros(grid.n + 1)
        g[grid.index_of(x)] = 1.0
        return cls(grid, g)

    @classmethod
    def constant(cls, grid: Grid, c: float) -> "FTV":
        return cls(grid, np.full(grid.n + 1, float(c)))

    def with_grade(self, i: int, v: float) -> "FTV":
        g = self.grades.copy()
        g[i] = v
        return FTV(self.grid, g)


def _same(*fs) -> Grid:
    grid = fs[0].grid
    for f in fs[1:]:
        if f.grid != grid:
            raise GridMismatchError(f"grid mismatch: n={grid.n} vs n={f.grid.n}")
    return grid


def is_convex(f: FTV) -> bool:
    """``f`` is convex iff it equals the pointwise min of its prefix and suffix maxima."""
    g = f.grades
    pre = np.maximum.accumulate(g)
    suf = np.maximum.accumulate(g[::-1])[::-1]
    return bool(np.all(g >= np.minimum(pre, suf)))


def convolve(G: BinaryOp, f: FTV, g: FTV, mode: str = "exact") -> FTV:
    """Sup-min convolution: ``result[z] = max{min(f[i], g[j]) : G(x_i, x_j) lands on z}``.

    ``exact`` needs a grid-closed operator; ``snap`` sends every output to
    its nearest grid point.  Empty preimages give 0.
    """
    grid = _same(G, f, g)
    if mode == "exact":
        if not G.closed:
            raise ClosureError(f"operator {G.family!r} is not grid-closed; use snap mode")
        idx = G.index
    elif mode == "snap":
        idx = G.index if G.closed else snap_array(grid, G.values)
    else:
        raise ValueError(f"unknown convolution mode {mode!r}")
    out = np.zeros(grid.n + 1)
    np.maximum.at(out, idx.ravel(), np.minimum.outer(f.grades, g.grades).ravel())
    return FTV(grid, out)


@lru_cache(maxsize=64)
def _lattice(grid: Grid, kind: str) -> BinaryOp:
    return basic_op(grid, kind)


def meet(f: FTV, g: FTV) -> FTV:
    return convolve(_lattice(_same(f, g), "TM"), f, g, "exact")


def join(f: FTV, g: FTV) -> FTV:
    return convolve(_lattice(_same(f, g), "SM"), f, g, "exact")


def random_ftv(grid: Grid, seed: int) -> FTV:
    rng = np.random.default_rng(seed)
    return FTV(grid, rng.random(grid.n + 1))


def random_convex(grid: Grid, seed: int) -> FTV:
    """Unimodal grades: non-decreasing up to a random peak, non-increasing after."""
    rng = np.random.default_rng(seed)
    n = grid.n
    p = int(rng.integers(0, n + 1))
    vals = rng.random(n + 1)
    top = int(np.argmax(vals))
    vals[[p, top]] = vals[[top, p]]
    out = np.empty(n + 1)
    out[:p] = np.sort(vals[:p])
    out[p] = vals[p]
    out[p + 1 :] = np.sort(vals[p + 1 :])[::-1]
    return FTV(grid, out)
