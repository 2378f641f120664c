"""Exhaustive axiom checks and conditional distributivity on tabulated operators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import snap_array
from .operators import BinaryOp, OperatorError, bilinear, check_same_grid

VALUE_TOL = 1e-9


class InvalidNeutralError(OperatorError):
    pass


def _tol(*ops: BinaryOp) -> float:
    return 0.0 if all(op.closed for op in ops) else VALUE_TOL


def grid_index(op: BinaryOp) -> np.ndarray:
    """Grid index of every table entry: exact when closed, snapped otherwise."""
    return op.index if op.closed else snap_array(op.grid, op.values)


@dataclass(frozen=True)
class AxiomReport:
    commutative: bool
    associative: bool
    associativity_residual: float
    monotone: bool
    neutral_elements: tuple[float, ...]
    absorbing_elements: tuple[float, ...]
    boundary_class: str
    max_jump: float
    idempotent: bool
    # min <= U <= max on E for the (unique interior) neutral element, None if not applicable
    region_e_bound: bool | None
    # F(0,x)=x on [0,k] and F(1,x)=x on [k,1] for each absorbing k
    nullnorm_boundary: bool | None

    @property
    def is_uninorm(self) -> bool:
        return self.commutative and self.associative and self.monotone and len(self.neutral_elements) > 0

    @property
    def is_nullnorm(self) -> bool:
        return (
            self.commutative
            and self.associative
            and self.monotone
            and len(self.absorbing_elements) > 0
            and bool(self.nullnorm_boundary)
        )

    def summary(self) -> str:
        fmt = lambda xs: "{" + ", ".join(f"{v:g}" for v in xs) + "}"
        return "\n".join(
            [
                f"commutative        {self.commutative}",
                f"associative        {self.associative} (residual {self.associativity_residual:.3g})",
                f"monotone           {self.monotone}",
                f"neutral elements   {fmt(self.neutral_elements)}",
                f"absorbing elements {fmt(self.absorbing_elements)}",
                f"boundary class     {self.boundary_class}",
                f"max jump           {self.max_jump:.6g}",
                f"idempotent         {self.idempotent}",
                f"E-region bound     {self.region_e_bound}",
                f"nullnorm boundary  {self.nullnorm_boundary}",
            ]
        )


def associativity_residual(op: BinaryOp) -> float:
    V = op.values
    idx = grid_index(op)
    left = V[idx, :]  # left[i, j, k] = G(G(x_i, x_j), x_k)
    right = V[:, idx]  # right[i, j, k] = G(x_i, G(x_j, x_k))
    return float(np.max(np.abs(left - right)))


def axiom_report(op: BinaryOp, assoc_tol: float | None = None) -> AxiomReport:
    """Exhaustive check of the operator axioms over the grid.

    Inner values of ``G(G(x,y),z)`` that fall between grid points are
    snapped, so non-closed operators carry an associativity residual of
    order 1/n; ``assoc_tol`` defaults to 0 for closed operators and 1/n
    otherwise.
    """
    g = op.grid
    V = op.values
    x = g.points
    tol = _tol(op)
    n = g.n

    commutative = bool(np.max(np.abs(V - V.T)) <= tol)
    residual = associativity_residual(op)
    if assoc_tol is None:
        assoc_tol = 0.0 if op.closed else 1.0 / n
    monotone = bool(np.all(np.diff(V, axis=0) >= -VALUE_TOL) and np.all(np.diff(V, axis=1) >= -VALUE_TOL))

    neutral = [
        m for m in range(n + 1) if np.all(np.abs(V[:, m] - x) <= tol) and np.all(np.abs(V[m, :] - x) <= tol)
    ]
    absorbing = [
        m for m in range(n + 1) if np.all(np.abs(V[:, m] - x[m]) <= tol) and np.all(np.abs(V[m, :] - x[m]) <= tol)
    ]

    corner = V[n, 0]
    if abs(corner) <= tol:
        boundary = "conjunctive"
    elif abs(corner - 1.0) <= tol:
        boundary = "disjunctive"
    else:
        boundary = "neither"

    jump = max(float(np.max(np.abs(np.diff(V, axis=0)))), float(np.max(np.abs(np.diff(V, axis=1)))))
    idempotent = bool(np.all(np.abs(np.diag(V) - x) <= tol))

    region_e = None
    if neutral:
        e = x[neutral[0]]
        X, Y = np.meshgrid(x, x, indexing="ij")
        E = ~(((X <= e) & (Y <= e)) | ((X >= e) & (Y >= e)))
        lo, hi = np.minimum(X, Y), np.maximum(X, Y)
        region_e = bool(np.all(V[E] >= lo[E] - tol) and np.all(V[E] <= hi[E] + tol))

    nullnorm_boundary = None
    if absorbing:
        ok = True
        for m in absorbing:
            ok &= bool(np.all(np.abs(V[0, : m + 1] - x[: m + 1]) <= tol))
            ok &= bool(np.all(np.abs(V[n, m:] - x[m:]) <= tol))
        nullnorm_boundary = ok

    return AxiomReport(
        commutative=commutative,
        associative=residual <= assoc_tol,
        associativity_residual=residual,
        monotone=monotone,
        neutral_elements=tuple(float(x[m]) for m in neutral),
        absorbing_elements=tuple(float(x[m]) for m in absorbing),
        boundary_class=boundary,
        max_jump=jump,
        idempotent=idempotent,
        region_e_bound=region_e,
        nullnorm_boundary=nullnorm_boundary,
    )


def is_continuous(op: BinaryOp, slack: float = 2.0) -> bool:
    """Grid-level continuity proxy: no adjacent entries differ by more than ``slack/n``."""
    V = op.values
    jump = max(float(np.max(np.abs(np.diff(V, axis=0)))), float(np.max(np.abs(np.diff(V, axis=1)))))
    return jump <= slack / op.grid.n + VALUE_TOL


def has_neutral(op: BinaryOp, e: float) -> bool:
    g = op.grid
    if not g.is_point(e):
        return False
    m = g.index_of(e)
    tol = _tol(op)
    return bool(np.all(np.abs(op.values[:, m] - g.points) <= tol) and np.all(np.abs(op.values[m, :] - g.points) <= tol))


def underlying_ops(U: BinaryOp, e: float) -> tuple[BinaryOp, BinaryOp]:
    """Underlying t-norm ``U(ex, ey)/e`` and t-conorm ``(U(e+(1-e)x, e+(1-e)y) - e)/(1-e)``."""
    if not 0 < e < 1:
        raise InvalidNeutralError(f"underlying operators need e in (0,1), got {e}")
    if not has_neutral(U, e):
        raise InvalidNeutralError(f"{e:g} is not a neutral element of the operator")
    g = U.grid
    X, Y = np.meshgrid(g.points, g.points, indexing="ij")
    t = bilinear(U.values, e * X, e * Y) / e
    s = (bilinear(U.values, e + (1 - e) * X, e + (1 - e) * Y) - e) / (1 - e)
    return (
        BinaryOp(g, np.clip(t, 0, 1), {"family": "underlying-tnorm", "e": e}),
        BinaryOp(g, np.clip(s, 0, 1), {"family": "underlying-tconorm", "e": e}),
    )


@dataclass(frozen=True)
class CDResult:
    mode: str
    passed: bool
    max_residual: float
    tol: float
    witness: tuple[float, float, float] | None
    triples_checked: int

    def summary(self) -> str:
        w = "none" if self.witness is None else "(" + ", ".join(f"{v:g}" for v in self.witness) + ")"
        verdict = "pass" if self.passed else "FAIL"
        return f"{self.mode}: {verdict}  max residual {self.max_residual:.6g} (tol {self.tol:g})  witness {w}"


def _cd_left(F: BinaryOp, U: BinaryOp):
    # F(x, U(y,z)) vs U(F(x,y), F(x,z)), guarded by U(y,z) < 1
    iu, iF = grid_index(U), grid_index(F)
    lhs = F.values[:, iu]  # [x, y, z]
    rhs = U.values[iF[:, :, None], iF[:, None, :]]
    guard = np.broadcast_to((U.values < 1.0)[None, :, :], lhs.shape)
    return lhs, rhs, guard


def _cd_right(F: BinaryOp, U: BinaryOp):
    # F(U(x,y), z) vs U(F(x,z), F(y,z)), guarded by U(x,y) < 1
    iu, iF = grid_index(U), grid_index(F)
    lhs = F.values[iu, :]  # [x, y, z]
    rhs = U.values[iF[:, None, :], iF[None, :, :]]
    guard = np.broadcast_to((U.values < 1.0)[:, :, None], lhs.shape)
    return lhs, rhs, guard


def check_conditional_distributivity(
    F: BinaryOp, U: BinaryOp, mode: str = "CD", tol: float = 0.0, guarded: bool = True
) -> CDResult:
    """Scan every grid triple for (CDl), (CDr) or both (CD).

    For non-closed operators, inner values are snapped before the outer
    lookup and both final values are snapped before comparison, so the
    residual is a whole number of grid steps and carries the quantization
    error of the real-valued blocks.
    With ``guarded=False`` the U < 1 restriction is dropped and the scan
    checks plain distributivity, which is what the extended laws reduce to
    on point-indicator fuzzy truth values.
    """
    g = check_same_grid(F, U)
    if mode not in ("CD", "CDl", "CDr"):
        raise ValueError(f"unknown mode {mode!r}")
    sides = {"CD": (_cd_left, _cd_right), "CDl": (_cd_left,), "CDr": (_cd_right,)}[mode]
    worst, witness, count = 0.0, None, 0
    x = g.points
    for side in sides:
        lhs, rhs, guard = side(F, U)
        if not (F.closed and U.closed):
            lhs, rhs = snap_array(g, lhs) / g.n, snap_array(g, rhs) / g.n
        if not guarded:
            guard = np.ones_like(guard)
        res = np.where(guard, np.abs(lhs - rhs), 0.0)
        count += int(guard.sum())
        i = np.unravel_index(int(np.argmax(res)), res.shape)
        if witness is None or res[i] > worst:
            worst = float(res[i])
            witness = (float(x[i[0]]), float(x[i[1]]), float(x[i[2]]))
    return CDResult(mode, worst <= tol, worst, tol, witness if worst > 0 else None, count)
