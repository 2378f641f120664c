"""Text formats: operator spec files, operator table CSV and FTV CSV."""

from __future__ import annotations

import csv
from fractions import Fraction
from pathlib import Path

import numpy as np

from .families import OperatorSpec
from .ftv import FTV
from .grid import Grid, GridMismatchError, make_grid
from .operators import BASIC, BinaryOp, Generator


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, path: str | Path | None = None):
        where = f"{path}:" if path else ""
        where += f"line {line}: " if line else ""
        super().__init__(where + message)
        self.line = line


SPEC_KEYS = ("family", "e", "k", "a", "kind", "generator", "gfun", "table")


def parse_rational(text: str) -> float:
    """``p/q``, an integer or a decimal, returned as a float."""
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError) as ex:
        raise ValueError(f"not a rational number: {text!r}") from ex


# ---------------------------------------------------------------------------
# sample vectors (FTV grades, generator and boundary-function samples)


def _read_header(lines: list[str], path) -> int:
    if not lines or not lines[0].strip().startswith("n="):
        raise ParseError("first line must be n=<resolution>", 1, path)
    try:
        return int(lines[0].strip()[2:])
    except ValueError:
        raise ParseError(f"bad resolution {lines[0].strip()!r}", 1, path) from None


def _floats(line: str, lineno: int, path) -> np.ndarray:
    try:
        return np.array([float(v) for v in line.split(",")])
    except ValueError:
        raise ParseError(f"bad number in {line.strip()!r}", lineno, path) from None


def _data_lines(path) -> list[str]:
    return [ln for ln in Path(path).read_text().splitlines() if ln.strip()]


def read_samples(path) -> tuple[int, np.ndarray]:
    lines = _data_lines(path)
    n = _read_header(lines, path)
    if len(lines) != 2:
        raise ParseError(f"expected one line of {n + 1} values", len(lines), path)
    vals = _floats(lines[1], 2, path)
    if vals.shape != (n + 1,):
        raise ParseError(f"expected {n + 1} values, got {vals.size}", 2, path)
    return n, vals


def _fmt(v: float) -> str:
    return f"{v:.12g}"


def write_samples(path, values) -> None:
    values = np.asarray(values, dtype=float)
    Path(path).write_text(f"n={values.size - 1}\n" + ",".join(_fmt(v) for v in values) + "\n")


def read_ftv(path, grid: Grid | None = None) -> FTV:
    n, vals = read_samples(path)
    if grid is not None and grid.n != n:
        raise GridMismatchError(f"{path}: resolution {n} does not match n={grid.n}")
    try:
        return FTV(grid or make_grid(n), vals)
    except ValueError as ex:
        raise ParseError(str(ex), 2, path) from None


def write_ftv(path, f: FTV) -> None:
    write_samples(path, f.grades)


# ---------------------------------------------------------------------------
# operator tables


def write_operator(path, op: BinaryOp) -> None:
    rows = [",".join(_fmt(v) for v in row) for row in op.raw_values]
    Path(path).write_text(f"n={op.grid.n}\n" + "\n".join(rows) + "\n")


def read_operator(path, grid: Grid | None = None) -> BinaryOp:
    lines = _data_lines(path)
    n = _read_header(lines, path)
    if len(lines) != n + 2:
        raise ParseError(f"expected {n + 1} table rows, got {len(lines) - 1}", len(lines), path)
    rows = [_floats(ln, i + 2, path) for i, ln in enumerate(lines[1:])]
    for i, r in enumerate(rows):
        if r.size != n + 1:
            raise ParseError(f"expected {n + 1} values, got {r.size}", i + 2, path)
    if grid is not None and grid.n != n:
        raise GridMismatchError(f"{path}: resolution {n} does not match n={grid.n}")
    return BinaryOp(grid or make_grid(n), np.vstack(rows), {"family": "custom-table", "source": str(path)})


# ---------------------------------------------------------------------------
# operator spec files


def parse_spec(text: str, grid: Grid, base_dir: str | Path = ".", path=None) -> OperatorSpec:
    """Parse ``key=value`` lines into an OperatorSpec.

    Keys: family, e, k, a (rationals such as ``1/4``), kind, ``block.<NAME>``
    (a basic operator tag or an operator CSV file), generator and gfun
    (sample files) and table (operator CSV).  Blank lines and ``#`` comments
    are ignored; file paths are relative to ``base_dir``.
    """
    base = Path(base_dir)
    fields: dict = {}
    blocks: dict = {}
    seen: set[str] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected key=value, got {line!r}", lineno, path)
        key, value = (s.strip() for s in line.split("=", 1))
        if key in seen:
            raise ParseError(f"duplicate key {key!r}", lineno, path)
        seen.add(key)
        try:
            if key.startswith("block."):
                name = key[len("block.") :]
                if not name:
                    raise ValueError("empty block name")
                blocks[name] = value if value in BASIC else read_operator(base / value)
            elif key in ("e", "k", "a"):
                fields[key] = parse_rational(value)
            elif key in ("family", "kind"):
                fields[key] = value
            elif key == "generator":
                fields[key] = Generator(grid, _grid_samples(base / value, grid))
            elif key == "gfun":
                fields[key] = _grid_samples(base / value, grid)
            elif key == "table":
                fields[key] = read_operator(base / value, grid)
            else:
                raise ParseError(f"unknown key {key!r}", lineno, path)
        except ParseError:
            raise
        except (ValueError, OSError) as ex:
            raise ParseError(str(ex), lineno, path) from None
    if "family" not in fields:
        raise ParseError("missing family", None, path)
    return OperatorSpec(blocks=blocks, **fields)


def _grid_samples(path: Path, grid: Grid) -> np.ndarray:
    n, vals = read_samples(path)
    if n != grid.n:
        raise GridMismatchError(f"{path}: resolution {n} does not match n={grid.n}")
    return vals


def read_spec(path, grid: Grid) -> OperatorSpec:
    p = Path(path)
    return parse_spec(p.read_text(), grid, p.parent, p)


def format_spec(spec: OperatorSpec) -> str:
    """Inverse of :func:`parse_spec` for specs whose blocks are all basic tags."""
    lines = [f"family={spec.family}"]
    for p in ("e", "k", "a"):
        v = getattr(spec, p)
        if v is not None:
            lines.append(f"{p}={Fraction(v).limit_denominator(10**6)}")
    if spec.kind is not None:
        lines.append(f"kind={spec.kind}")
    for name, b in sorted(spec.blocks.items()):
        if not isinstance(b, str):
            raise ValueError(f"block {name} is not a basic tag; write it to a table file first")
        lines.append(f"block.{name}={b}")
    if spec.generator is not None or spec.gfun is not None or spec.table is not None:
        raise ValueError("file-backed fields cannot be formatted inline")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# suite reports

REPORT_COLUMNS = ("theorem_id", "n", "trials", "mode", "comparison", "tol", "passes", "max_deviation", "witness_file")


def write_report(path, report) -> list[Path]:
    """Report CSV plus, for a failing suite, the worst witness as FTV files beside it.

    The witness files are ``<stem>_f.csv``, ``_g``, ``_h``, ``_lhs`` and
    ``_rhs``; the ``witness_file`` column names the ``_f`` file.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    written = []
    witness_file = ""
    w = report.witness
    if w is not None:
        for name in ("f", "g", "h", "lhs", "rhs"):
            p = path.with_name(f"{path.stem}_{name}.csv")
            write_ftv(p, getattr(w, name))
            written.append(p)
        witness_file = written[0].name
    row = [
        report.theorem_id,
        report.n,
        report.trials,
        report.mode,
        report.comparison,
        _fmt(report.tol),
        report.passes,
        _fmt(report.max_deviation),
        witness_file,
    ]
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(REPORT_COLUMNS)
        writer.writerow(row)
    return [path] + written
