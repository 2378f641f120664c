"""Tabulated binary operators, the basic t-norms/t-conorms and generator constructions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .grid import CLOSURE_TOL, Grid, GridMismatchError, closure_indices

Fn2 = Callable[[np.ndarray, np.ndarray], np.ndarray]


class OperatorError(ValueError):
    pass


class InvalidIntervalError(OperatorError):
    pass


class InvalidGeneratorError(OperatorError):
    pass


@dataclass(frozen=True, eq=False)
class BinaryOp:
    """An operator tabulated on a grid: ``raw_values[i, j] = G(x_i, x_j)``.

    ``raw_values`` holds the real-arithmetic evaluation.  When every entry
    lies within 1e-12 of a grid point the operator is *closed*; ``values``
    is then snapped onto exact grid values and ``index`` holds the grid
    indices, which is what exact-mode convolution and zero-tolerance checks
    read.  For non-closed operators ``values`` is ``raw_values`` and
    ``index`` is None.
    """

    grid: Grid
    raw_values: np.ndarray
    meta: dict = field(default_factory=dict)
    values: np.ndarray = field(init=False, repr=False)
    index: np.ndarray | None = field(init=False, repr=False)

    def __post_init__(self):
        raw = np.array(self.raw_values, dtype=float)
        n1 = self.grid.n + 1
        if raw.shape != (n1, n1):
            raise OperatorError(f"table shape {raw.shape} does not match grid n={self.grid.n}")
        if np.any(np.isnan(raw)):
            raise OperatorError("table contains undefined entries")
        if raw.min() < -CLOSURE_TOL or raw.max() > 1 + CLOSURE_TOL:
            raise OperatorError("table entries must lie in [0, 1]")
        raw = np.clip(raw, 0.0, 1.0)
        idx = closure_indices(self.grid, raw)
        values = raw if idx is None else idx / self.grid.n
        for arr in (raw, values) + (() if idx is None else (idx,)):
            arr.setflags(write=False)
        object.__setattr__(self, "raw_values", raw)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "index", idx)

    @property
    def closed(self) -> bool:
        return self.index is not None

    @property
    def family(self) -> str:
        return self.meta.get("family", "custom-table")

    def __call__(self, x: float, y: float) -> float:
        """Value at two grid points."""
        g = self.grid
        return float(self.values[g.index_of(x), g.index_of(y)])

    def evaluate(self, x, y) -> np.ndarray:
        """Bilinear interpolation of the table at arbitrary points of [0,1]^2."""
        return bilinear(self.values, x, y)

    def transpose(self) -> "BinaryOp":
        meta = dict(self.meta, transposed=not self.meta.get("transposed", False))
        return BinaryOp(self.grid, self.raw_values.T, meta)

    def same_table(self, other: "BinaryOp", tol: float = 0.0) -> bool:
        check_same_grid(self, other)
        return bool(np.max(np.abs(self.values - other.values)) <= tol)


def check_same_grid(*objs) -> Grid:
    grid = objs[0].grid
    for o in objs[1:]:
        if o.grid != grid:
            raise GridMismatchError(f"grid mismatch: n={grid.n} vs n={o.grid.n}")
    return grid


def bilinear(table: np.ndarray, x, y) -> np.ndarray:
    n = table.shape[0] - 1
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    y = np.clip(np.asarray(y, dtype=float), 0.0, 1.0)
    fx, fy = x * n, y * n
    # arguments within float noise of a grid point read that entry exactly
    fx = np.where(np.abs(fx - np.rint(fx)) < 1e-9, np.rint(fx), fx)
    fy = np.where(np.abs(fy - np.rint(fy)) < 1e-9, np.rint(fy), fy)
    i0 = np.minimum(np.floor(fx).astype(np.intp), n - 1)
    j0 = np.minimum(np.floor(fy).astype(np.intp), n - 1)
    tx, ty = fx - i0, fy - j0
    out = (
        (1 - tx) * (1 - ty) * table[i0, j0]
        + tx * (1 - ty) * table[i0 + 1, j0]
        + (1 - tx) * ty * table[i0, j0 + 1]
        + tx * ty * table[i0 + 1, j0 + 1]
    )
    ix = np.where(tx == 1.0, i0 + 1, i0)
    jy = np.where(ty == 1.0, j0 + 1, j0)
    hit = ((tx == 0) | (tx == 1)) & ((ty == 0) | (ty == 1))
    return np.where(hit, table[ix, jy], out)


# basic continuous t-norms and t-conorms
BASIC: dict[str, Fn2] = {
    "TM": np.minimum,
    "TP": lambda x, y: x * y,
    "TL": lambda x, y: np.maximum(x + y - 1.0, 0.0),
    "SM": np.maximum,
    "SP": lambda x, y: x + y - x * y,
    "SL": lambda x, y: np.minimum(x + y, 1.0),
}

TNORMS = ("TM", "TP", "TL")
TCONORMS = ("SM", "SP", "SL")


def mesh(grid: Grid) -> tuple[np.ndarray, np.ndarray]:
    return np.meshgrid(grid.points, grid.points, indexing="ij")


def tabulate(grid: Grid, fn: Fn2, **meta) -> BinaryOp:
    X, Y = mesh(grid)
    return BinaryOp(grid, fn(X, Y), meta)


def basic_op(grid: Grid, kind: str) -> BinaryOp:
    if kind not in BASIC:
        raise OperatorError(f"unknown basic operator {kind!r}; expected one of {sorted(BASIC)}")
    family = "basic-tnorm" if kind.startswith("T") else "basic-tconorm"
    return tabulate(grid, BASIC[kind], family=family, kind=kind)


def rescaled(fn: Fn2, low: float, high: float) -> Fn2:
    """``low + (high-low) * fn(u, v)`` with u, v the arguments mapped from [low, high] to [0, 1]."""
    width = high - low

    def block(x, y):
        return low + width * fn((x - low) / width, (y - low) / width)

    return block


def rescale_block(op: BinaryOp, low: float, high: float) -> np.ndarray:
    """Embed ``op`` linearly into [low, high]^2.

    Returns a full grid-sized table that is NaN outside the block; inner
    arguments falling between grid points are read by bilinear interpolation.
    """
    if not 0.0 <= low < high <= 1.0:
        raise InvalidIntervalError(f"need 0 <= low < high <= 1, got [{low}, {high}]")
    X, Y = mesh(op.grid)
    inside = (X >= low - CLOSURE_TOL) & (X <= high + CLOSURE_TOL)
    inside &= (Y >= low - CLOSURE_TOL) & (Y <= high + CLOSURE_TOL)
    out = np.full(X.shape, np.nan)
    out[inside] = rescaled(op.evaluate, low, high)(X[inside], Y[inside])
    return out


@dataclass(frozen=True, eq=False)
class Generator:
    """A strictly monotone function sampled at the grid points."""

    grid: Grid
    samples: np.ndarray

    def __post_init__(self):
        s = np.array(self.samples, dtype=float)
        if s.shape != (self.grid.n + 1,):
            raise InvalidGeneratorError(f"need {self.grid.n + 1} samples, got {s.shape}")
        d = np.diff(s)
        if not (np.all(d > 0) or np.all(d < 0)):
            raise InvalidGeneratorError("generator samples must be strictly monotone")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @classmethod
    def identity(cls, grid: Grid) -> "Generator":
        return cls(grid, grid.points.copy())

    @classmethod
    def from_function(cls, grid: Grid, fn: Callable[[np.ndarray], np.ndarray]) -> "Generator":
        return cls(grid, fn(grid.points))

    @property
    def direction(self) -> str:
        return "increasing" if self.samples[-1] > self.samples[0] else "decreasing"

    @property
    def boundary(self) -> tuple[float, float]:
        return float(self.samples[0]), float(self.samples[-1])

    def __call__(self, x) -> np.ndarray:
        return np.interp(x, self.grid.points, self.samples)

    def inverse(self, v) -> np.ndarray:
        # np.interp does the binary search plus linear interpolation
        if self.direction == "increasing":
            return np.interp(v, self.samples, self.grid.points)
        return np.interp(v, self.samples[::-1], self.grid.points[::-1])


def _require_increasing(s: Generator, *, at_zero: float | None, at_one: float | None):
    if s.direction != "increasing":
        raise InvalidGeneratorError("generator must be increasing")
    lo, hi = s.boundary
    if at_zero is not None and abs(lo - at_zero) > CLOSURE_TOL:
        raise InvalidGeneratorError(f"generator must satisfy s(0)={at_zero}, got {lo}")
    if at_one is not None and abs(hi - at_one) > CLOSURE_TOL:
        raise InvalidGeneratorError(f"generator must satisfy s(1)={at_one}, got {hi}")


def additive_tconorm_fn(s: Generator) -> Fn2:
    _require_increasing(s, at_zero=0.0, at_one=1.0)
    return lambda x, y: s.inverse(np.minimum(s(x) + s(y), 1.0))


def multiplicative_tnorm_fn(s: Generator) -> Fn2:
    _require_increasing(s, at_zero=None, at_one=1.0)
    if s.samples[1] <= 0:
        raise InvalidGeneratorError("multiplicative generator must be positive on (0, 1]")

    def fn(x, y):
        x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
        out = s.inverse(s(x) * s(y))
        return np.where((x == 0) | (y == 0), 0.0, out)

    return fn


def tconorm_from_additive_generator(grid: Grid, s: Generator) -> BinaryOp:
    if s.grid != grid:
        raise GridMismatchError("generator sampled on a different grid")
    return tabulate(grid, additive_tconorm_fn(s), family="generated-tconorm")


def tnorm_from_multiplicative_generator(grid: Grid, s: Generator) -> BinaryOp:
    if s.grid != grid:
        raise GridMismatchError("generator sampled on a different grid")
    return tabulate(grid, multiplicative_tnorm_fn(s), family="generated-tnorm")
