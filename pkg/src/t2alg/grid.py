"""Quantized unit interval shared by every operator and fuzzy truth value."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

CLOSURE_TOL = 1e-12


class GridError(ValueError):
    """Raised for invalid resolutions and out-of-range values."""


class GridMismatchError(ValueError):
    """Raised when objects tabulated on different grids are combined."""


@dataclass(frozen=True)
class Grid:
    """The points ``i/n`` for ``i = 0..n``."""

    resolution: int

    def __post_init__(self):
        if not isinstance(self.resolution, (int, np.integer)) or self.resolution < 2:
            raise GridError(f"invalid resolution {self.resolution!r}: need an integer n >= 2")

    @property
    def n(self) -> int:
        return int(self.resolution)

    @cached_property
    def points(self) -> np.ndarray:
        pts = np.arange(self.n + 1) / self.n
        pts.setflags(write=False)
        return pts

    def __len__(self) -> int:
        return self.n + 1

    def value(self, i: int) -> float:
        return i / self.n

    def index_of(self, v: float, tol: float = CLOSURE_TOL) -> int:
        """Index of the grid point equal to ``v`` (within ``tol``)."""
        i = int(np.floor(v * self.n + 0.5))
        if not 0 <= i <= self.n or abs(i / self.n - v) > tol:
            raise GridError(f"{v!r} is not a point of the grid with n={self.n}")
        return i

    def is_point(self, v: float, tol: float = CLOSURE_TOL) -> bool:
        try:
            self.index_of(v, tol)
        except GridError:
            return False
        return True


def make_grid(n: int) -> Grid:
    return Grid(n)


def snap(grid: Grid, v: float) -> int:
    """Nearest grid index to ``v``; exact halves round up."""
    if not 0.0 <= v <= 1.0:
        raise GridError(f"value {v!r} outside [0, 1]")
    return int(np.floor(v * grid.n + 0.5))


def snap_array(grid: Grid, values: np.ndarray) -> np.ndarray:
    """Vectorized :func:`snap`; values are clipped into [0, 1] first."""
    v = np.clip(np.asarray(values, dtype=float), 0.0, 1.0)
    return np.floor(v * grid.n + 0.5).astype(np.intp)


def closure_indices(grid: Grid, values: np.ndarray, tol: float = CLOSURE_TOL) -> np.ndarray | None:
    """Grid indices of ``values`` if every entry is a grid point, else None."""
    idx = snap_array(grid, values)
    if np.all(np.abs(idx / grid.n - values) <= tol):
        return idx
    return None


def is_grid_closed(grid: Grid, op) -> bool:
    """True iff every table entry of ``op`` is a grid point (within 1e-12)."""
    if op.grid != grid:
        raise GridMismatchError(f"operator tabulated on n={op.grid.n}, expected n={grid.n}")
    return closure_indices(grid, op.raw_values) is not None
