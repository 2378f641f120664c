"""Command-line front end.

Exit status: 0 pass, 1 mathematical failure or exhausted search, 2 usage or
configuration error.  Every command writes a JSON manifest next to its
outputs (or to ``--manifest``).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from .axioms import axiom_report, check_conditional_distributivity
from .families import build_operator
from .ftv import convolve, join, meet
from .grid import make_grid
from .io import read_ftv, read_operator, read_spec, write_ftv, write_operator, write_report
from .lab import (
    DEFAULT_FIXTURE,
    FIXTURES,
    THEOREMS,
    SuiteConfig,
    SuiteRejectedError,
    exhaustive_check,
    fixture_ops,
    run_suite,
    search_counterexample,
    validate_hypotheses,
)

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

DEFAULTS = {"n": 64, "trials": 200, "mode": "snap", "comparison": "dilated", "tol": 0.0, "seed": 0, "jobs": 1}
SEARCH_TRIALS = 1000
DEFAULT_MANIFEST = "t2alg.manifest.json"


class ConfigError(Exception):
    pass


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


class Run:
    """Collects what goes into the manifest of one command."""

    def __init__(self, command: str, args: argparse.Namespace):
        self.command = command
        self.config = {k: v for k, v in vars(args).items() if k not in ("func", "manifest")}
        self.inputs: list[str] = []
        self.outputs: list[str] = []
        self.manifest_path = getattr(args, "manifest", None)

    def input(self, path):
        if path is not None:
            self.inputs.append(str(path))
        return path

    def output(self, path):
        self.outputs.append(str(path))
        return path

    def write_manifest(self, status: int):
        path = self.manifest_path
        if path is None and self.outputs:
            first = Path(self.outputs[0])
            path = first.with_name(first.stem + ".manifest.json")
        elif path is None:
            path = DEFAULT_MANIFEST
        manifest = {
            "command": self.command,
            "config": self.config,
            "inputs": {p: _sha256(p) for p in self.inputs if Path(p).is_file()},
            "outputs": {p: _sha256(p) for p in self.outputs if Path(p).is_file()},
            "exit_status": status,
            "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        }
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("T2ALG_SEED")
    if env is None:
        return DEFAULTS["seed"]
    try:
        return int(env)
    except ValueError:
        raise ConfigError(f"T2ALG_SEED must be an integer, got {env!r}") from None


# ---------------------------------------------------------------------------
# ops


def cmd_ops_build(args, run: Run) -> int:
    grid = make_grid(args.n)
    op = build_operator(grid, read_spec(run.input(args.spec), grid))
    write_operator(run.output(args.out), op)
    print(f"{op.family} on n={grid.n} ({'grid-closed' if op.closed else 'not grid-closed'}) -> {args.out}")
    print(axiom_report(op).summary())
    return EXIT_PASS


def _load_op(path, grid, run: Run):
    run.input(path)
    p = Path(path)
    if p.suffix == ".csv":
        return read_operator(p, grid)
    return build_operator(grid, read_spec(p, grid))


def cmd_ops_check(args, run: Run) -> int:
    grid = make_grid(args.n)
    op = _load_op(args.op, grid, run)
    report = axiom_report(op)
    print(report.summary())
    wants = {
        "uninorm": report.is_uninorm,
        "nullnorm": report.is_nullnorm,
        "any": True,
    }[args.expect]
    return EXIT_PASS if wants else EXIT_FAIL


def cmd_ops_cd_check(args, run: Run) -> int:
    grid = make_grid(args.n)
    F = _load_op(args.F, grid, run)
    U = _load_op(args.U, grid, run)
    tol = args.tol if args.tol is not None else (0.0 if F.closed and U.closed else 2.0 / grid.n)
    res = check_conditional_distributivity(F, U, args.cd_mode, tol)
    print(res.summary())
    return EXIT_PASS if res.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# ftv


def cmd_ftv_conv(args, run: Run) -> int:
    f = read_ftv(run.input(args.f))
    g = read_ftv(run.input(args.g), f.grid)
    op = _load_op(args.op, f.grid, run)
    out = convolve(op, f, g, args.mode)
    write_ftv(run.output(args.out), out)
    print(f"convolution ({op.family}, {args.mode}) -> {args.out}")
    return EXIT_PASS


def _cmd_lattice(fn, name):
    def cmd(args, run: Run) -> int:
        f = read_ftv(run.input(args.f))
        g = read_ftv(run.input(args.g), f.grid)
        write_ftv(run.output(args.out), fn(f, g))
        print(f"{name} -> {args.out}")
        return EXIT_PASS

    return cmd


# ---------------------------------------------------------------------------
# dist


def _suite_config(args) -> SuiteConfig:
    if args.theorem not in THEOREMS:
        raise ConfigError(f"unknown theorem {args.theorem!r}; expected one of {', '.join(THEOREMS)}")
    if (args.spec_F is None) != (args.spec_U is None):
        raise ConfigError("--spec-F and --spec-U must be given together")
    if args.fixture is not None and args.spec_F is not None:
        raise ConfigError("--fixture cannot be combined with --spec-F/--spec-U")
    spec_F = spec_V = None
    if args.spec_F is not None:
        grid = make_grid(args.n)
        spec_F, spec_V = read_spec(args.spec_F, grid), read_spec(args.spec_U, grid)
    cfg = SuiteConfig(
        theorem_id=args.theorem,
        n=args.n,
        trials=args.trials,
        seed=_seed(args),
        mode=args.mode,
        comparison=args.comparison,
        tol=args.tol,
        fixture=args.fixture,
        spec_F=spec_F,
        spec_V=spec_V,
        jobs=args.jobs,
    )
    try:
        cfg.validate()
    except ValueError as ex:
        raise ConfigError(str(ex)) from None
    return cfg


def cmd_dist_suite(args, run: Run) -> int:
    run.input(args.spec_F)
    run.input(args.spec_U)
    cfg = _suite_config(args)
    run.config = {"command": "dist suite", **cfg.resolved(), "report": args.report, "exhaustive": args.exhaustive}
    if args.exhaustive:
        F, V = cfg.operators()
        failed = validate_hypotheses(cfg.theorem_id, F, V)
        if failed:
            raise SuiteRejectedError(f"{cfg.theorem_id} hypotheses not met: " + "; ".join(failed))
        w = exhaustive_check(F, V, THEOREMS[cfg.theorem_id].side, mode=cfg.mode)
        print(f"{cfg.theorem_id} exhaustive over grades {{0, 1/2, 1}} at n={cfg.n}: {'PASS' if w is None else 'FAIL'}")
        if w is not None and args.report:
            _write_witness(run, Path(args.report).with_suffix(""), w)
        return EXIT_PASS if w is None else EXIT_FAIL
    report = run_suite(cfg)
    print(report.summary())
    if args.report:
        for p in write_report(args.report, report):
            run.output(p)
    return EXIT_PASS if report.all_passed else EXIT_FAIL


def _write_witness(run: Run, stem: Path, w) -> list[Path]:
    stem.parent.mkdir(parents=True, exist_ok=True)
    paths = []
    for name in ("f", "g", "h", "lhs", "rhs"):
        p = stem.with_name(f"{stem.name}_{name}.csv")
        write_ftv(p, getattr(w, name))
        run.output(p)
        paths.append(p)
    return paths


def cmd_dist_search(args, run: Run) -> int:
    if args.theorem not in THEOREMS:
        raise ConfigError(f"unknown theorem {args.theorem!r}; expected one of {', '.join(THEOREMS)}")
    if args.trials < 1:
        raise ConfigError("trials must be positive")
    if args.fixture is not None and args.fixture not in FIXTURES:
        raise ConfigError(f"unknown fixture {args.fixture!r}")
    th = THEOREMS[args.theorem]
    fixture = args.fixture or DEFAULT_FIXTURE[args.theorem]
    seed = _seed(args)
    F, V = fixture_ops(fixture, make_grid(args.n), th.side)
    subject = args.subject or ("f" if th.side == "left" else "h")
    run.config = {
        "command": "dist search",
        "theorem_id": args.theorem,
        "fixture": fixture,
        "n": args.n,
        "trials": args.trials,
        "seed": seed,
        "subject": subject,
        "convex_only": args.convex_only,
        "mode": args.mode,
        "tol": args.tol,
        "out": args.out,
    }
    w = search_counterexample(
        F, V, th.side, subject, args.trials, seed, mode=args.mode, tol=args.tol, convex_only=args.convex_only
    )
    if w is None:
        print(f"{args.theorem} [{fixture}] perturbing {subject}: no counterexample in {args.trials} trials")
        return EXIT_FAIL
    print(
        f"{args.theorem} [{fixture}] perturbing {subject}: witness at trial {w.trial}, "
        f"z={w.z}/{args.n}, lhs={w.lhs.grades[w.z]:.6g} rhs={w.rhs.grades[w.z]:.6g}"
    )
    if args.out:
        for p in _write_witness(run, Path(args.out), w):
            print(f"  {p}")
    return EXIT_PASS


# ---------------------------------------------------------------------------
# parser


def _common(p: argparse.ArgumentParser, n=True):
    if n:
        p.add_argument("--n", type=int, default=DEFAULTS["n"], help="grid resolution (default %(default)s)")
    p.add_argument("--manifest", help=f"manifest path (default: next to the first output, else ./{DEFAULT_MANIFEST})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="t2alg", description=__doc__.splitlines()[0])
    top = parser.add_subparsers(dest="group", required=True)

    ops = top.add_parser("ops", help="build and check operators").add_subparsers(dest="command", required=True)
    p = ops.add_parser("build", help="tabulate an operator spec file")
    p.add_argument("spec")
    p.add_argument("--out", required=True)
    _common(p)
    p.set_defaults(func=cmd_ops_build)

    p = ops.add_parser("check", help="axiom report for a spec file or operator CSV")
    p.add_argument("op")
    p.add_argument("--expect", choices=("any", "uninorm", "nullnorm"), default="any")
    _common(p)
    p.set_defaults(func=cmd_ops_check)

    p = ops.add_parser("cd-check", help="conditional distributivity of F over U")
    p.add_argument("F")
    p.add_argument("U")
    p.add_argument("--cd-mode", choices=("CD", "CDl", "CDr"), default="CD")
    p.add_argument("--tol", type=float, default=None, help="default 0 for grid-closed pairs, 2/n otherwise")
    _common(p)
    p.set_defaults(func=cmd_ops_cd_check)

    ftv = top.add_parser("ftv", help="fuzzy truth value operations").add_subparsers(dest="command", required=True)
    p = ftv.add_parser("conv", help="sup-min convolution of two FTV files")
    p.add_argument("op")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("--out", required=True)
    p.add_argument("--mode", choices=("exact", "snap"), default=DEFAULTS["mode"])
    _common(p, n=False)
    p.set_defaults(func=cmd_ftv_conv)
    for name, fn in (("meet", meet), ("join", join)):
        p = ftv.add_parser(name, help=f"extended {'minimum' if name == 'meet' else 'maximum'}")
        p.add_argument("f")
        p.add_argument("g")
        p.add_argument("--out", required=True)
        _common(p, n=False)
        p.set_defaults(func=_cmd_lattice(fn, name))

    dist = top.add_parser("dist", help="distributivity suites").add_subparsers(dest="command", required=True)
    p = dist.add_parser("suite", help="run a theorem suite")
    p.add_argument("--theorem", required=True)
    p.add_argument("--trials", type=int, default=DEFAULTS["trials"])
    p.add_argument("--seed", type=int, default=None, help="default: $T2ALG_SEED, else 0")
    p.add_argument("--mode", choices=("exact", "snap"), default=DEFAULTS["mode"])
    p.add_argument("--comparison", choices=("strict", "dilated"), default=DEFAULTS["comparison"])
    p.add_argument("--tol", type=float, default=DEFAULTS["tol"])
    p.add_argument("--fixture", help=f"shipped operator pair, one of: {', '.join(FIXTURES)}")
    p.add_argument("--spec-F", dest="spec_F")
    p.add_argument("--spec-U", dest="spec_U")
    p.add_argument("--report", help="report CSV path; witness FTVs are written beside it")
    p.add_argument("--jobs", type=int, default=DEFAULTS["jobs"])
    p.add_argument("--exhaustive", action="store_true", help="all grades in {0,1/2,1}, n <= 4")
    _common(p)
    p.set_defaults(func=cmd_dist_suite)

    p = dist.add_parser("search", help="search for a counterexample with a hypothesis dropped")
    p.add_argument("--theorem", required=True)
    p.add_argument("--fixture")
    p.add_argument("--subject", choices=("f", "g", "h"))
    p.add_argument("--trials", type=int, default=SEARCH_TRIALS)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--mode", choices=("exact", "snap"), default="exact")
    p.add_argument("--tol", type=float, default=DEFAULTS["tol"])
    p.add_argument("--convex-only", action="store_true", help="control run: perturbed subject drawn convex")
    p.add_argument("--out", help="witness path stem")
    _common(p)
    p.set_defaults(func=cmd_dist_search)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as ex:
        return EXIT_CONFIG if ex.code else EXIT_PASS
    run = Run(f"{args.group} {args.command}", args)
    try:
        status = args.func(args, run)
    except (ConfigError, OSError, ValueError) as ex:
        # parse, spec-violation, hypothesis and grid errors are all ValueErrors
        print(f"error: {ex}", file=sys.stderr)
        status = EXIT_CONFIG
    run.write_manifest(status)
    return status


if __name__ == "__main__":
    sys.exit(main())
