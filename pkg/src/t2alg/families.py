"""Operator families: idempotent uninorms, the CD-lemma uninorm/nullnorm pairs and Z_k operators.

Every family is written as an ordered list of ``(region, formula)`` pieces
evaluated in real arithmetic on the grid mesh; the first matching region
wins, mirroring the top-to-bottom reading of a piecewise definition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .grid import CLOSURE_TOL, Grid
from .operators import (
    BASIC,
    TCONORMS,
    TNORMS,
    BinaryOp,
    Fn2,
    Generator,
    OperatorError,
    additive_tconorm_fn,
    mesh,
    multiplicative_tnorm_fn,
    rescaled,
)

TOL = 1e-9


class SpecViolationError(OperatorError):
    """A family parameter or block violates the side conditions of its construction."""


class MissingBlockError(SpecViolationError):
    pass


class InvalidBoundaryError(SpecViolationError):
    """Boundary function of an idempotent uninorm is not admissible."""


BlockLike = Union[str, BinaryOp, "OperatorSpec", Callable]


@dataclass
class OperatorSpec:
    family: str
    e: float | None = None
    k: float | None = None
    a: float | None = None
    kind: str | None = None
    blocks: dict[str, BlockLike] = field(default_factory=dict)
    generator: Generator | None = None
    gfun: np.ndarray | None = None
    table: BinaryOp | None = None

    def params(self) -> dict:
        return {p: getattr(self, p) for p in ("e", "k", "a", "kind") if getattr(self, p) is not None}


# family -> (required params, optional params, required blocks, optional blocks)
FAMILIES: dict[str, tuple[tuple, tuple, tuple, tuple]] = {
    "basic-tnorm": (("kind",), (), (), ()),
    "basic-tconorm": (("kind",), (), (), ()),
    "idempotent-uninorm": (("e", "gfun"), (), (), ()),
    "underline-uninorm": (("e",), (), (), ()),
    "overline-uninorm": (("e",), (), (), ()),
    "uninorm-disj-i": (("e",), ("k",), (), ()),
    "uninorm-disj-ii": (("e", "a"), ("k", "generator"), (), ()),
    "uninorm-disj-iii": (("e",), ("k",), (), ()),
    "uninorm-conj-i": (("e",), ("k",), (), ()),
    "uninorm-conj-ii": (("e", "a"), ("k", "generator"), (), ()),
    "uninorm-conj-iii": (("e",), ("k",), (), ()),
    "nullnorm-disj-i": (("e", "k"), (), ("S1", "S2", "T"), ()),
    "nullnorm-disj-ii": (("e", "k", "a"), ("generator",), ("S1", "S2", "T1"), ()),
    "nullnorm-disj-iii": (("e", "k"), (), ("S1", "T1", "T2"), ()),
    "nullnorm-conj-i": (("e", "k"), (), ("S1", "T1", "T2"), ()),
    "nullnorm-conj-ii": (("e", "k", "a"), ("generator",), ("S1", "T1", "T2"), ()),
    "nullnorm-conj-iii": (("e", "k"), (), ("S1", "S2", "T"), ()),
    "zk-tconorm-ii": (("a",), ("k",), (), ()),
    "zk-F-tconorm": (("k",), ("a",), (), ("A", "B")),
    "zk-F-umax": (("e", "k"), ("a",), (), ("A1", "A2", "A3", "B")),
    "zk-F-umin": (("e", "k"), ("a",), (), ("A", "B1", "B2", "B3")),
    "custom-table": (("table",), (), (), ()),
}

# blocks that must be t-norms / t-conorms in the CD-lemma families
TNORM_SLOTS = {"T", "T1", "T2"}
TCONORM_SLOTS = {"S1", "S2"}


# ---------------------------------------------------------------------------
# region helpers on the real mesh


def _box(X, Y, x0, x1, y0, y1):
    t = CLOSURE_TOL
    return (X >= x0 - t) & (X <= x1 + t) & (Y >= y0 - t) & (Y <= y1 + t)


def _sq(X, Y, lo, hi):
    return _box(X, Y, lo, hi, lo, hi)


def _piecewise(grid: Grid, pieces, default) -> np.ndarray:
    """First matching piece wins; ``default`` is a function or a constant."""
    X, Y = mesh(grid)
    out = np.full(X.shape, np.nan)
    free = np.ones(X.shape, dtype=bool)
    for region, formula in pieces:
        m = region(X, Y) & free
        if m.any():
            out[m] = formula(X[m], Y[m])
        free &= ~m
    if free.any():
        out[free] = default(X[free], Y[free]) if callable(default) else default
    return out


def _const(c):
    return lambda x, y: np.full(np.shape(x), float(c))


def _mn(x, y):
    return np.minimum(x, y)


def _mx(x, y):
    return np.maximum(x, y)


# ---------------------------------------------------------------------------
# uninorms


def overline_uninorm_table(grid, e):
    return _piecewise(grid, [(lambda X, Y: _sq(X, Y, 0, e), _mn)], _mx)


def underline_uninorm_table(grid, e):
    return _piecewise(grid, [(lambda X, Y: _sq(X, Y, e, 1), _mx)], _mn)


def uninorm_disj_ii_table(grid, e, a, S: Fn2):
    return _piecewise(
        grid,
        [
            (lambda X, Y: _sq(X, Y, 0, e), _mn),
            (lambda X, Y: _sq(X, Y, a, 1), rescaled(S, a, 1)),
        ],
        _mx,
    )


def uninorm_disj_iii_table(grid, e):
    return _piecewise(
        grid,
        [
            (lambda X, Y: _sq(X, Y, e, 1), _mx),
            (lambda X, Y: (X == 1) | (Y == 1), _const(1.0)),
        ],
        _mn,
    )


def uninorm_conj_ii_table(grid, e, a, S: Fn2):
    # min(x, y) = e belongs to the max part, otherwise e would not be neutral
    return _piecewise(
        grid,
        [
            (lambda X, Y: np.minimum(X, Y) < e - CLOSURE_TOL, _mn),
            (lambda X, Y: _sq(X, Y, a, 1), rescaled(S, a, 1)),
        ],
        _mx,
    )


def uninorm_conj_iii_table(grid, e):
    return _piecewise(
        grid,
        [
            (lambda X, Y: _sq(X, Y, 0, e), _mn),
            (lambda X, Y: _sq(X, Y, e, 1), _mx),
            (lambda X, Y: ((X == 1) & (Y != 0)) | ((X != 0) & (Y == 1)), _const(1.0)),
        ],
        _mn,
    )


def idempotent_uninorm(grid: Grid, e: float, gfun) -> BinaryOp:
    """Idempotent uninorm with neutral ``e`` described by its boundary function.

    On the ambiguous set ``y = g(x), x = g(g(x))`` the minimum is taken.
    """
    g = np.asarray(gfun, dtype=float)
    if g.shape != (grid.n + 1,):
        raise InvalidBoundaryError(f"boundary function needs {grid.n + 1} samples, got {g.shape}")
    if np.any(np.diff(g) > CLOSURE_TOL):
        raise InvalidBoundaryError("boundary function must be non-increasing")
    if not 0 < e < 1:
        raise InvalidBoundaryError("neutral element must lie in (0, 1)")
    ge = float(np.interp(e, grid.points, g))
    if abs(ge - e) > CLOSURE_TOL:
        raise InvalidBoundaryError(f"boundary function must satisfy g(e)=e, got g({e})={ge}")

    X, Y = mesh(grid)
    gx = np.broadcast_to(g[:, None], X.shape)
    ggx = np.interp(gx, grid.points, g)
    t = CLOSURE_TOL
    on_curve = np.abs(Y - gx) <= t
    take_max = (Y > gx + t) | (on_curve & (X > ggx + t))
    table = np.where(take_max, np.maximum(X, Y), np.minimum(X, Y))
    table = np.where(_sq(X, Y, 0, e), np.minimum(X, Y), table)
    table = np.where(_sq(X, Y, e, 1), np.maximum(X, Y), table)
    return BinaryOp(grid, table, {"family": "idempotent-uninorm", "e": e})


# ---------------------------------------------------------------------------
# nullnorms


def nullnorm_low_high_table(grid, e, k, S1, S2, T):
    """Nullnorm with e < k: disjunctive case (i), conjunctive case (iii)."""
    return _piecewise(
        grid,
        [
            (lambda X, Y: _sq(X, Y, 0, e), rescaled(S1, 0, e)),
            (lambda X, Y: _sq(X, Y, e, k), rescaled(S2, e, k)),
            (lambda X, Y: _sq(X, Y, k, 1), rescaled(T, k, 1)),
            (lambda X, Y: (np.minimum(X, Y) <= e) & (np.maximum(X, Y) >= e) & (np.maximum(X, Y) <= k), _mx),
        ],
        k,
    )


def nullnorm_disj_ii_table(grid, e, k, a, S1, S2, T1, T):
    pieces = [
        (lambda X, Y: _sq(X, Y, 0, e), rescaled(S1, 0, e)),
        (lambda X, Y: _sq(X, Y, e, k), rescaled(S2, e, k)),
    ]
    if a > k:
        pieces.append((lambda X, Y: _sq(X, Y, k, a), rescaled(T1, k, a)))
    pieces += [
        (lambda X, Y: _sq(X, Y, a, 1), rescaled(T, a, 1)),
        (lambda X, Y: (np.minimum(X, Y) <= e) & (np.maximum(X, Y) >= e) & (np.maximum(X, Y) <= k), _mx),
        (lambda X, Y: (np.minimum(X, Y) >= k) & (np.minimum(X, Y) <= a) & (np.maximum(X, Y) >= a), _mn),
    ]
    return _piecewise(grid, pieces, k)


def nullnorm_high_low_table(grid, e, k, S1, T1, T2):
    """Nullnorm with k < e: disjunctive case (iii), conjunctive case (i)."""
    return _piecewise(
        grid,
        [
            (lambda X, Y: _sq(X, Y, 0, k), rescaled(S1, 0, k)),
            (lambda X, Y: _sq(X, Y, k, e), rescaled(T1, k, e)),
            (lambda X, Y: _sq(X, Y, e, 1), rescaled(T2, e, 1)),
            (lambda X, Y: (np.minimum(X, Y) <= k) & (np.maximum(X, Y) >= k), _const(k)),
        ],
        _mn,
    )


def nullnorm_conj_ii_table(grid, e, k, a, S1, T1, T2, T):
    pieces = [
        (lambda X, Y: _sq(X, Y, 0, k), rescaled(S1, 0, k)),
        (lambda X, Y: _sq(X, Y, k, e), rescaled(T1, k, e)),
    ]
    if a > e:
        pieces.append((lambda X, Y: _sq(X, Y, e, a), rescaled(T2, e, a)))
    pieces += [
        (lambda X, Y: _sq(X, Y, a, 1), rescaled(T, a, 1)),
        (lambda X, Y: (np.minimum(X, Y) <= k) & (np.maximum(X, Y) >= k), _const(k)),
    ]
    return _piecewise(grid, pieces, _mn)


# ---------------------------------------------------------------------------
# Z_k operators (absorbing element k, no commutativity/associativity)


def ordinal_tp_top(low: float, a: float | None) -> Fn2:
    """Default B-type block on [low, 1]^2: minimum, with rescaled product on [a, 1]^2."""
    if a is None:
        return _mn
    tp = rescaled(BASIC["TP"], a, 1)

    def fn(x, y):
        top = (x >= a - CLOSURE_TOL) & (y >= a - CLOSURE_TOL)
        return np.where(top, tp(np.maximum(x, a), np.maximum(y, a)), np.minimum(x, y))

    return fn


def zk_tconorm_ii_table(grid, a):
    return _piecewise(grid, [(lambda X, Y: _sq(X, Y, a, 1), rescaled(BASIC["SL"], a, 1))], _mx)


def zk_tconorm_F_table(grid, k, A, B):
    return _piecewise(
        grid,
        [
            (lambda X, Y: _sq(X, Y, 0, k), A),
            (lambda X, Y: _sq(X, Y, k, 1), B),
        ],
        k,
    )


def zk_umax_F_table(grid, e, k, A1, A2, A3, B):
    return _piecewise(
        grid,
        [
            (lambda X, Y: _sq(X, Y, 0, e), A1),
            (lambda X, Y: _sq(X, Y, e, k), A2),
            (lambda X, Y: _box(X, Y, 0, e, e, k), A3),
            (lambda X, Y: _box(X, Y, e, k, 0, e), _mx),
            (lambda X, Y: _sq(X, Y, k, 1), B),
        ],
        k,
    )


def zk_umin_F_table(grid, e, k, A, B1, B2, B3):
    return _piecewise(
        grid,
        [
            (lambda X, Y: _sq(X, Y, 0, k), A),
            (lambda X, Y: _sq(X, Y, k, e), B1),
            (lambda X, Y: _box(X, Y, e, 1, k, e), B3),
            (lambda X, Y: _box(X, Y, k, e, e, 1), _mn),
            (lambda X, Y: _sq(X, Y, e, 1), B2),
        ],
        k,
    )


# ---------------------------------------------------------------------------
# builder


def _require(cond: bool, family: str, message: str):
    if not cond:
        raise SpecViolationError(f"{family} requires {message}")


def block_fn(grid: Grid, block: BlockLike) -> Fn2:
    """Unit-square function for a block given as a tag, table, nested spec or callable."""
    if isinstance(block, str):
        if block not in BASIC:
            raise SpecViolationError(f"unknown block operator {block!r}")
        return BASIC[block]
    if isinstance(block, BinaryOp):
        return block.evaluate
    if isinstance(block, OperatorSpec):
        if block.family in ("basic-tnorm", "basic-tconorm") and block.kind in BASIC:
            return BASIC[block.kind]
        return build_operator(grid, block).evaluate
    if callable(block):
        return block
    raise SpecViolationError(f"cannot interpret block {block!r}")


def _check_slot(grid: Grid, family: str, name: str, block: BlockLike, fn: Fn2):
    kind = "t-norm" if name in TNORM_SLOTS else "t-conorm"
    if isinstance(block, str):
        ok = block in (TNORMS if kind == "t-norm" else TCONORMS)
        _require(ok, family, f"block {name} to be a continuous {kind}, got {block}")
        return
    X, Y = mesh(grid)
    v = fn(X, Y)
    x = grid.points
    neutral = 1.0 if kind == "t-norm" else 0.0
    ok = np.allclose(fn(x, np.full_like(x, neutral)), x, atol=TOL)
    ok &= np.allclose(v, v.T, atol=TOL)
    ok &= bool(np.all(np.diff(v, axis=0) >= -TOL) and np.all(np.diff(v, axis=1) >= -TOL))
    _require(ok, family, f"block {name} to be a continuous {kind}")


def _check_params(spec: OperatorSpec):
    fam = spec.family
    if fam not in FAMILIES:
        raise SpecViolationError(f"unknown family {fam!r}")
    required, optional, req_blocks, opt_blocks = FAMILIES[fam]
    for p in required:
        if getattr(spec, p) is None:
            raise SpecViolationError(f"{fam} requires parameter {p}")
    allowed = set(required) | set(optional)
    for p in ("e", "k", "a", "kind", "generator", "gfun", "table"):
        if getattr(spec, p) is not None and p not in allowed:
            raise SpecViolationError(f"{fam} does not take parameter {p}")
    for b in req_blocks:
        if b not in spec.blocks:
            raise MissingBlockError(f"{fam} is missing block {b}")
    extra = set(spec.blocks) - set(req_blocks) - set(opt_blocks)
    if extra:
        raise SpecViolationError(f"{fam} does not take block(s) {', '.join(sorted(extra))}")
    for p in ("e", "k", "a"):
        v = getattr(spec, p)
        if v is not None and not 0 <= v <= 1:
            raise SpecViolationError(f"{fam} requires {p} in [0,1], got {v}")


def _unit(fam, name, v):
    _require(0 < v < 1, fam, f"{name} in (0,1)")


def _pair_generator(grid: Grid, spec: OperatorSpec) -> Generator:
    return spec.generator if spec.generator is not None else Generator.identity(grid)


def build_operator(grid: Grid, spec: OperatorSpec) -> BinaryOp:
    """Tabulate the family instance described by ``spec`` on ``grid``."""
    _check_params(spec)
    fam = spec.family
    e, k, a = spec.e, spec.k, spec.a
    meta = {"family": fam, **{p: v for p, v in spec.params().items()}}

    def blk(name, default=None):
        b = spec.blocks.get(name, default)
        fn = block_fn(grid, b)
        if name in TNORM_SLOTS | TCONORM_SLOTS and fam.startswith("nullnorm"):
            _check_slot(grid, fam, name, b, fn)
        meta.setdefault("blocks", {})[name] = b if isinstance(b, str) else type(b).__name__
        return fn

    if fam in ("basic-tnorm", "basic-tconorm"):
        allowed = TNORMS if fam == "basic-tnorm" else TCONORMS
        _require(spec.kind in allowed, fam, f"kind in {allowed}, got {spec.kind}")
        X, Y = mesh(grid)
        table = BASIC[spec.kind](X, Y)

    elif fam == "custom-table":
        _require(spec.table.grid == grid, fam, "the table to be tabulated on the build grid")
        table = spec.table.raw_values

    elif fam == "idempotent-uninorm":
        return idempotent_uninorm(grid, e, spec.gfun)

    elif fam in ("underline-uninorm", "overline-uninorm"):
        _unit(fam, "e", e)
        table = (overline_uninorm_table if fam == "overline-uninorm" else underline_uninorm_table)(grid, e)

    elif fam.startswith("uninorm-"):
        _unit(fam, "e", e)
        disj = "disj" in fam
        case = fam.rsplit("-", 1)[1]
        # e<k for disjunctive (i),(ii) and conjunctive (iii); e>k otherwise
        wants_e_below_k = (disj and case in ("i", "ii")) or (not disj and case == "iii")
        if k is not None:
            _unit(fam, "k", k)
            _require(e < k if wants_e_below_k else e > k, fam, "e<k" if wants_e_below_k else "e>k")
        if case == "ii":
            s = _pair_generator(grid, spec)
            S = additive_tconorm_fn(s)
            if disj:
                lo = k if k is not None else e
                _require(lo <= a < 1 and a > e, fam, f"a in [k,1) with a>e, got a={a}")
                table = uninorm_disj_ii_table(grid, e, a, S)
            else:
                _require(e <= a < 1, fam, f"a in [e,1), got a={a}")
                table = uninorm_conj_ii_table(grid, e, a, S)
        elif fam == "uninorm-disj-i":
            table = overline_uninorm_table(grid, e)
        elif fam == "uninorm-disj-iii":
            table = uninorm_disj_iii_table(grid, e)
        elif fam == "uninorm-conj-i":
            table = underline_uninorm_table(grid, e)
        else:
            table = uninorm_conj_iii_table(grid, e)

    elif fam.startswith("nullnorm-"):
        _unit(fam, "e", e)
        _unit(fam, "k", k)
        disj = "disj" in fam
        case = fam.rsplit("-", 1)[1]
        if (disj and case in ("i", "ii")) or (not disj and case == "iii"):
            _require(e < k, fam, "e<k")
        else:
            _require(e > k, fam, "e>k")
        if fam in ("nullnorm-disj-i", "nullnorm-conj-iii"):
            table = nullnorm_low_high_table(grid, e, k, blk("S1"), blk("S2"), blk("T"))
        elif fam in ("nullnorm-disj-iii", "nullnorm-conj-i"):
            table = nullnorm_high_low_table(grid, e, k, blk("S1"), blk("T1"), blk("T2"))
        elif fam == "nullnorm-disj-ii":
            _require(k <= a < 1, fam, f"a in [k,1), got a={a}")
            T = multiplicative_tnorm_fn(_pair_generator(grid, spec))
            table = nullnorm_disj_ii_table(grid, e, k, a, blk("S1"), blk("S2"), blk("T1"), T)
        else:
            _require(e <= a < 1, fam, f"a in [e,1), got a={a}")
            T = multiplicative_tnorm_fn(_pair_generator(grid, spec))
            table = nullnorm_conj_ii_table(grid, e, k, a, blk("S1"), blk("T1"), blk("T2"), T)

    elif fam == "zk-tconorm-ii":
        if k is not None:
            _require(k <= a < 1, fam, f"a in [k,1), got a={a}")
        _require(0 <= a < 1, fam, f"a in [k,1), got a={a}")
        table = zk_tconorm_ii_table(grid, a)

    elif fam.startswith("zk-F-"):
        _unit(fam, "k", k)
        if fam != "zk-F-tconorm":
            _unit(fam, "e", e)
        table = _build_zk(grid, spec, meta)

    else:  # pragma: no cover - guarded by _check_params
        raise SpecViolationError(f"unknown family {fam!r}")

    op = BinaryOp(grid, table, meta)
    if fam.startswith("zk-F-"):
        _validate_zk(op, spec)
    return op


def _top_block(grid, spec, name, low, meta):
    """B-type block on [low, 1]^2: user table rescaled, or the default ordinal sum."""
    if name in spec.blocks:
        meta.setdefault("blocks", {})[name] = str(spec.blocks[name])
        return rescaled(block_fn(grid, spec.blocks[name]), low, 1)
    return ordinal_tp_top(low, spec.a)


def _square_block(grid, spec, name, low, high, default, meta):
    b = spec.blocks.get(name, default)
    meta.setdefault("blocks", {})[name] = b if isinstance(b, str) else type(b).__name__
    return rescaled(block_fn(grid, b), low, high)


def _direct_block(grid, spec, name, default, meta):
    # off-square blocks are read in the ambient coordinates, no rescaling
    b = spec.blocks.get(name, default)
    meta.setdefault("blocks", {})[name] = b if isinstance(b, str) else type(b).__name__
    return block_fn(grid, b)


def _build_zk(grid: Grid, spec: OperatorSpec, meta: dict) -> np.ndarray:
    fam, e, k, a = spec.family, spec.e, spec.k, spec.a
    if fam == "zk-F-tconorm":
        if a is not None:
            _require(k <= a < 1, fam, f"a in [k,1), got a={a}")
        A = _square_block(grid, spec, "A", 0, k, "SM", meta)
        B = _top_block(grid, spec, "B", k, meta)
        return zk_tconorm_F_table(grid, k, A, B)
    if fam == "zk-F-umax":
        _require(e < k, fam, "e<k")
        if a is not None:
            _require(k <= a < 1, fam, f"a in [k,1), got a={a}")
        A1 = _square_block(grid, spec, "A1", 0, e, "SM", meta)
        A2 = _square_block(grid, spec, "A2", e, k, "SM", meta)
        A3 = _direct_block(grid, spec, "A3", "SM", meta)
        B = _top_block(grid, spec, "B", k, meta)
        return zk_umax_F_table(grid, e, k, A1, A2, A3, B)
    _require(k < e, fam, "k<e")
    if a is not None:
        _require(e <= a < 1, fam, f"a in [e,1), got a={a}")
    A = _square_block(grid, spec, "A", 0, k, "SM", meta)
    B1 = _square_block(grid, spec, "B1", k, e, "TM", meta)
    B3 = _direct_block(grid, spec, "B3", "TM", meta)
    B2 = _top_block(grid, spec, "B2", e, meta)
    return zk_umin_F_table(grid, e, k, A, B1, B2, B3)


def _validate_zk(op: BinaryOp, spec: OperatorSpec):
    """Check the block side conditions on the tabulated operator."""
    fam, e, k, a = spec.family, spec.e, spec.k, spec.a
    g = op.grid
    x = g.points
    V = op.values

    def idx(lo, hi):
        return np.flatnonzero((x >= lo - CLOSURE_TOL) & (x <= hi + CLOSURE_TOL))

    def col(v):
        return g.index_of(v)

    def close(u, w):
        return bool(np.all(np.abs(np.asarray(u) - np.asarray(w)) <= TOL))

    grid_k = g.is_point(k)
    if grid_k:
        _require(close(V[col(k), :], k) and close(V[:, col(k)], k), fam, "k to be absorbing")
    mono = np.all(np.diff(V, axis=0) >= -TOL) and np.all(np.diff(V, axis=1) >= -TOL)
    _require(bool(mono), fam, "increasing blocks")

    def neutral_rows(block, lo, hi, at, side):
        if not g.is_point(at):
            return
        r = idx(lo, hi)
        j = col(at)
        vals = V[r, j] if side == "right" else V[j, r]
        _require(close(vals, x[r]), fam, f"{at:g} to be a {side} side neutral element of {block}")

    if fam == "zk-F-tconorm":
        neutral_rows("A", 0, k, 0.0, "right")
        neutral_rows("A", 0, k, 0.0, "left")
        neutral_rows("B", k, 1, 1.0, "right")
        neutral_rows("B", k, 1, 1.0, "left")
        top_name, top_low = "B", k
    elif fam == "zk-F-umax":
        neutral_rows("A1", 0, e, 0.0, "right")
        neutral_rows("A1", 0, e, 0.0, "left")
        rr = idx(e, k)
        _require(close(V[0, rr], x[rr]), fam, "0 to be a left side neutral element of A3")
        neutral_rows("A2", e, k, e, "right")
        neutral_rows("B", k, 1, 1.0, "right")
        neutral_rows("B", k, 1, 1.0, "left")
        top_name, top_low = "B", k
    else:
        neutral_rows("A", 0, k, 0.0, "right")
        neutral_rows("A", 0, k, 0.0, "left")
        rr = idx(k, e)
        _require(close(V[-1, rr], x[rr]), fam, "1 to be a left side neutral element of B3")
        neutral_rows("B1", k, e, e, "right")
        neutral_rows("B2", e, 1, 1.0, "right")
        neutral_rows("B2", e, 1, 1.0, "left")
        top_name, top_low = "B2", e

    lo_block = idx(0, k)
    _require(bool(np.all(V[np.ix_(lo_block, lo_block)] <= k + TOL)), fam, "A-type blocks mapping into [0,k]")
    hi_block = idx(top_low, 1)
    _require(bool(np.all(V[np.ix_(hi_block, hi_block)] >= top_low - TOL)), fam, f"{top_name} mapping into [{top_low:g},1]")
    if a is not None:
        r = idx(a, 1)
        X, Y = np.meshgrid(x[r], x[r], indexing="ij")
        tp = rescaled(BASIC["TP"], a, 1)(X, Y)
        _require(close(V[np.ix_(r, r)], tp), fam, f"{top_name}=T_P on [a,1]^2")
