"""Theorem suites: both sides of each extended distributive law on sampled fuzzy truth values."""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from .axioms import (
    axiom_report,
    check_conditional_distributivity,
    has_neutral,
    is_continuous,
    underlying_ops,
)
from .families import OperatorSpec, build_operator
from .ftv import FTV, convolve, is_convex, random_convex, random_ftv
from .grid import Grid, make_grid
from .operators import BinaryOp, basic_op, check_same_grid


class SuiteRejectedError(ValueError):
    """The operators do not satisfy the hypotheses of the requested theorem."""


# ---------------------------------------------------------------------------
# both sides of the laws


def lhs_rhs_left(F: BinaryOp, V: BinaryOp, f: FTV, g: FTV, h: FTV, mode: str = "exact") -> tuple[FTV, FTV]:
    """``f.F(g.V h)`` and ``(f.F g).V(f.F h)``."""
    left = convolve(F, f, convolve(V, g, h, mode), mode)
    right = convolve(V, convolve(F, f, g, mode), convolve(F, f, h, mode), mode)
    return left, right


def lhs_rhs_right(F: BinaryOp, V: BinaryOp, f: FTV, g: FTV, h: FTV, mode: str = "exact") -> tuple[FTV, FTV]:
    """``(f.V g).F h`` and ``(f.F h).V(g.F h)``."""
    left = convolve(F, convolve(V, f, g, mode), h, mode)
    right = convolve(V, convolve(F, f, h, mode), convolve(F, g, h, mode), mode)
    return left, right


@dataclass(frozen=True)
class Deviation:
    passed: bool
    max_deviation: float
    violations: int
    worst_index: int


def compare(a: FTV, b: FTV, comparison: str = "strict", tol: float = 0.0) -> Deviation:
    """Strict: pointwise ``|a - b| <= tol``.

    Dilated: each grade must be matched within ``tol`` by the other side's
    maximum over the neighbouring indices ``z-1..z+1``.
    """
    check_same_grid(a, b)
    x, y = a.grades, b.grades
    if comparison == "strict":
        dev = np.abs(x - y)
    elif comparison == "dilated":
        dev = np.maximum(np.maximum(x - _window_max(y), y - _window_max(x)), 0.0)
    else:
        raise ValueError(f"unknown comparison {comparison!r}")
    worst = int(np.argmax(dev))
    return Deviation(bool(np.all(dev <= tol)), float(dev[worst]), int(np.sum(dev > tol)), worst)


def _window_max(v: np.ndarray) -> np.ndarray:
    out = v.copy()
    out[1:] = np.maximum(out[1:], v[:-1])
    out[:-1] = np.maximum(out[:-1], v[1:])
    return out


# ---------------------------------------------------------------------------
# theorems, fixtures and hypothesis validation


@dataclass(frozen=True)
class Theorem:
    side: str  # "left": convex f, "right": convex h
    kind: str  # which hypothesis family to validate
    cd_mode: str | None = None


THEOREMS: dict[str, Theorem] = {
    "T-MIN-MAX-i": Theorem("left", "min-max-TM"),
    "T-MIN-MAX-ii": Theorem("left", "min-max-SM"),
    "T-IDEM": Theorem("left", "idempotent"),
    "T-CD-DISJ": Theorem("left", "cd-disjunctive", "CD"),
    "T-CD-CONJ": Theorem("left", "cd-conjunctive", "CD"),
    "T-ZK-S-L": Theorem("left", "zk-tconorm", "CDl"),
    "T-ZK-UMAX-L": Theorem("left", "zk-umax", "CDl"),
    "T-ZK-UMIN-L": Theorem("left", "zk-umin", "CDl"),
    "T-ZK-S-R": Theorem("right", "zk-tconorm", "CDr"),
    "T-ZK-UMAX-R": Theorem("right", "zk-umax", "CDr"),
    "T-ZK-UMIN-R": Theorem("right", "zk-umin", "CDr"),
}

Q, H, TQ = 0.25, 0.5, 0.75
_NN_I = dict(S1="SL", S2="SL", T="TL")
_NN_III = dict(S1="SL", T1="TL", T2="TL")

# named (F, V) operator pairs shipped with the lab
FIXTURES: dict[str, tuple[OperatorSpec, OperatorSpec]] = {
    "min-max-TM": (OperatorSpec("nullnorm-disj-i", e=Q, k=H, blocks=_NN_I), OperatorSpec("basic-tnorm", kind="TM")),
    "min-max-SM": (OperatorSpec("nullnorm-disj-i", e=Q, k=H, blocks=_NN_I), OperatorSpec("basic-tconorm", kind="SM")),
    "idem-overline": (OperatorSpec("nullnorm-disj-i", e=Q, k=H, blocks=_NN_I), OperatorSpec("overline-uninorm", e=Q)),
    "idem-overline-half": (OperatorSpec("nullnorm-disj-i", e=Q, k=H, blocks=_NN_I), OperatorSpec("overline-uninorm", e=H)),
    "idem-underline-half": (OperatorSpec("nullnorm-disj-i", e=Q, k=H, blocks=_NN_I), OperatorSpec("underline-uninorm", e=H)),
    "cd-disj-i": (OperatorSpec("nullnorm-disj-i", e=Q, k=H, blocks=_NN_I), OperatorSpec("uninorm-disj-i", e=Q, k=H)),
    "cd-disj-ii": (
        OperatorSpec("nullnorm-disj-ii", e=Q, k=H, a=TQ, blocks=dict(S1="SL", S2="SL", T1="TL")),
        OperatorSpec("uninorm-disj-ii", e=Q, k=H, a=TQ),
    ),
    "cd-disj-iii": (OperatorSpec("nullnorm-disj-iii", e=H, k=Q, blocks=_NN_III), OperatorSpec("uninorm-disj-iii", e=H, k=Q)),
    "cd-conj-i": (OperatorSpec("nullnorm-conj-i", e=H, k=Q, blocks=_NN_III), OperatorSpec("uninorm-conj-i", e=H, k=Q)),
    "cd-conj-ii": (
        OperatorSpec("nullnorm-conj-ii", e=H, k=Q, a=TQ, blocks=dict(S1="SL", T1="TL", T2="TL")),
        OperatorSpec("uninorm-conj-ii", e=H, k=Q, a=TQ),
    ),
    "cd-conj-iii": (OperatorSpec("nullnorm-conj-iii", e=Q, k=H, blocks=_NN_I), OperatorSpec("uninorm-conj-iii", e=Q, k=H)),
    "zk-s-i": (OperatorSpec("zk-F-tconorm", k=H, blocks=dict(A="SL", B="TL")), OperatorSpec("basic-tconorm", kind="SM")),
    "zk-s-ii": (OperatorSpec("zk-F-tconorm", k=H, a=TQ), OperatorSpec("zk-tconorm-ii", k=H, a=TQ)),
    "zk-umax-i": (OperatorSpec("zk-F-umax", e=Q, k=H, blocks=dict(A1="SL")), OperatorSpec("overline-uninorm", e=Q)),
    "zk-umax-ii": (OperatorSpec("zk-F-umax", e=Q, k=H, a=TQ), OperatorSpec("uninorm-disj-ii", e=Q, k=H, a=TQ)),
    "zk-umin-i": (OperatorSpec("zk-F-umin", e=H, k=Q, blocks=dict(A="SL")), OperatorSpec("underline-uninorm", e=H)),
    "zk-umin-ii": (OperatorSpec("zk-F-umin", e=H, k=Q, a=TQ), OperatorSpec("uninorm-conj-ii", e=H, k=Q, a=TQ)),
}

DEFAULT_FIXTURE = {
    "T-MIN-MAX-i": "min-max-TM",
    "T-MIN-MAX-ii": "min-max-SM",
    "T-IDEM": "idem-overline",
    "T-CD-DISJ": "cd-disj-i",
    "T-CD-CONJ": "cd-conj-i",
    "T-ZK-S-L": "zk-s-i",
    "T-ZK-UMAX-L": "zk-umax-i",
    "T-ZK-UMIN-L": "zk-umin-i",
    "T-ZK-S-R": "zk-s-i",
    "T-ZK-UMAX-R": "zk-umax-i",
    "T-ZK-UMIN-R": "zk-umin-i",
}


def fixture_ops(name: str, grid: Grid, side: str = "left") -> tuple[BinaryOp, BinaryOp]:
    """Build a named fixture; right-side theorems use the mirrored F."""
    spec_F, spec_V = FIXTURES[name]
    F, V = build_operator(grid, spec_F), build_operator(grid, spec_V)
    if side == "right":
        F = F.transpose()
    return F, V


def cd_tolerance(F: BinaryOp, V: BinaryOp) -> float:
    return 0.0 if F.closed and V.closed else 2.0 / F.grid.n


def validate_hypotheses(theorem_id: str, F: BinaryOp, V: BinaryOp) -> list[str]:
    """Names of the theorem hypotheses that the pair violates (empty when admissible)."""
    th = THEOREMS[theorem_id]
    check_same_grid(F, V)
    failed: list[str] = []
    rf = axiom_report(F)
    rv = axiom_report(V)
    if not rf.monotone:
        failed.append("F non-decreasing")
    if not is_continuous(F):
        failed.append("F continuous")

    if th.kind.startswith("min-max"):
        kind = th.kind.rsplit("-", 1)[1]
        if not V.same_table(basic_op(V.grid, kind)):
            failed.append(f"V is {kind}")
        return failed

    if th.kind in ("idempotent", "cd-disjunctive", "cd-conjunctive"):
        if not rf.is_nullnorm:
            failed.append("F is a nullnorm")
        elif not all(0 < k < 1 for k in rf.absorbing_elements):
            failed.append("F has absorbing element k in (0,1)")
    else:
        if not rf.absorbing_elements:
            failed.append("F in Z_k (absorbing element)")

    e = None
    if th.kind == "zk-tconorm":
        if not (rv.is_uninorm and 0.0 in rv.neutral_elements):
            failed.append("V is a t-conorm")
        if not is_continuous(V):
            failed.append("V continuous")
    else:
        interior = [x for x in rv.neutral_elements if 0 < x < 1]
        if not rv.is_uninorm or not interior:
            failed.append("V is a uninorm with neutral element e in (0,1)")
            return failed
        e = interior[0]
        if th.kind == "idempotent" and not rv.idempotent:
            failed.append("V idempotent")
        if th.kind != "idempotent":
            T_U, S_U = underlying_ops(V, e)
            if not (is_continuous(T_U) and is_continuous(S_U)):
                failed.append("V in WCU (continuous underlying t-norm and t-conorm)")
        if th.kind == "cd-disjunctive" and rv.boundary_class != "disjunctive":
            failed.append("V disjunctive")
        if th.kind == "cd-conjunctive" and rv.boundary_class != "conjunctive":
            failed.append("V conjunctive")
        if th.kind in ("zk-umax", "zk-umin"):
            x = V.grid.points
            X, Y = np.meshgrid(x, x, indexing="ij")
            E = ~(((X <= e) & (Y <= e)) | ((X >= e) & (Y >= e)))
            ref = np.maximum(X, Y) if th.kind == "zk-umax" else np.minimum(X, Y)
            if not np.array_equal(V.values[E], ref[E]):
                failed.append("V in U_max" if th.kind == "zk-umax" else "V in U_min")

    if th.cd_mode is not None:
        res = check_conditional_distributivity(F, V, th.cd_mode, cd_tolerance(F, V))
        if not res.passed:
            failed.append(f"({th.cd_mode}) of F over V (residual {res.max_residual:.3g} at {res.witness})")
    return failed


# ---------------------------------------------------------------------------
# suites


@dataclass
class SuiteConfig:
    theorem_id: str
    n: int = 64
    trials: int = 200
    seed: int = 0
    mode: str = "snap"
    comparison: str = "dilated"
    tol: float = 0.0
    fixture: str | None = None
    spec_F: OperatorSpec | None = None
    spec_V: OperatorSpec | None = None
    jobs: int = 1

    def validate(self):
        if self.theorem_id not in THEOREMS:
            raise ValueError(f"unknown theorem {self.theorem_id!r}; expected one of {sorted(THEOREMS)}")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if self.mode not in ("exact", "snap"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.comparison not in ("strict", "dilated"):
            raise ValueError(f"unknown comparison {self.comparison!r}")
        if self.tol < 0:
            raise ValueError("tolerance must be non-negative")
        if self.fixture is not None and self.fixture not in FIXTURES:
            raise ValueError(f"unknown fixture {self.fixture!r}")
        if (self.spec_F is None) != (self.spec_V is None):
            raise ValueError("give both operator specs or neither")
        if self.jobs < 1:
            raise ValueError("jobs must be positive")

    def resolved(self) -> dict:
        d = {
            "theorem_id": self.theorem_id,
            "n": self.n,
            "trials": self.trials,
            "seed": self.seed,
            "mode": self.mode,
            "comparison": self.comparison,
            "tol": self.tol,
            "jobs": self.jobs,
        }
        if self.spec_F is None:
            d["fixture"] = self.fixture or DEFAULT_FIXTURE[self.theorem_id]
        else:
            d["fixture"] = None
            d["spec_F"] = _spec_summary(self.spec_F)
            d["spec_V"] = _spec_summary(self.spec_V)
        return d

    def operators(self) -> tuple[BinaryOp, BinaryOp]:
        grid = make_grid(self.n)
        side = THEOREMS[self.theorem_id].side
        if self.spec_F is None:
            return fixture_ops(self.fixture or DEFAULT_FIXTURE[self.theorem_id], grid, side)
        return build_operator(grid, self.spec_F), build_operator(grid, self.spec_V)


def _spec_summary(spec: OperatorSpec) -> dict:
    d = {"family": spec.family}
    for p, v in spec.params().items():
        d[p] = str(Fraction(v).limit_denominator(10**6)) if isinstance(v, float) else v
    if spec.blocks:
        d["blocks"] = {k: v if isinstance(v, str) else type(v).__name__ for k, v in sorted(spec.blocks.items())}
    return d


@dataclass(frozen=True)
class Witness:
    f: FTV
    g: FTV
    h: FTV
    z: int
    lhs: FTV
    rhs: FTV
    trial: int = -1


@dataclass
class SuiteReport:
    theorem_id: str
    n: int
    trials: int
    mode: str
    comparison: str
    tol: float
    passes: int
    max_deviation: float
    violations: int
    witness: Witness | None = None
    wall_time: float = 0.0
    fixture: str | None = None

    @property
    def failures(self) -> int:
        return self.trials - self.passes

    @property
    def all_passed(self) -> bool:
        return self.passes == self.trials

    def summary(self) -> str:
        verdict = "PASS" if self.all_passed else "FAIL"
        s = (
            f"{self.theorem_id} [{self.fixture or 'custom'}] n={self.n} {self.mode}/{self.comparison} tol={self.tol:g}: "
            f"{self.passes}/{self.trials} {verdict}  max deviation {self.max_deviation:.6g}"
        )
        if self.witness is not None:
            s += f"  worst trial {self.witness.trial} at z={self.witness.z}/{self.n}"
        return s


def subject_seeds(seed: int, trial: int) -> tuple[int, int, int]:
    state = np.random.SeedSequence([seed, trial]).generate_state(3)
    return tuple(int(s) for s in state)


def draw_subjects(grid: Grid, side: str, seed: int, trial: int) -> tuple[FTV, FTV, FTV]:
    sf, sg, sh = subject_seeds(seed, trial)
    if side == "left":
        return random_convex(grid, sf), random_ftv(grid, sg), random_ftv(grid, sh)
    return random_ftv(grid, sf), random_ftv(grid, sg), random_convex(grid, sh)


def _run_trials(args) -> list[tuple]:
    F, V, side, mode, comparison, tol, seed, trials = args
    both = lhs_rhs_left if side == "left" else lhs_rhs_right
    out = []
    for t in trials:
        f, g, h = draw_subjects(F.grid, side, seed, t)
        lhs, rhs = both(F, V, f, g, h, mode)
        d = compare(lhs, rhs, comparison, tol)
        out.append((t, d, (f, g, h, lhs, rhs)))
    return out


def run_suite(config: SuiteConfig) -> SuiteReport:
    """Sample ``trials`` subject triples and compare both sides of the theorem's law.

    Randomness of trial ``t`` derives from ``(seed, t)`` only, so the report
    does not depend on ``jobs``.
    """
    config.validate()
    start = time.perf_counter()
    th = THEOREMS[config.theorem_id]
    F, V = config.operators()
    failed = validate_hypotheses(config.theorem_id, F, V)
    if failed:
        raise SuiteRejectedError(f"{config.theorem_id} hypotheses not met: " + "; ".join(failed))

    trials = list(range(config.trials))
    chunks = [trials[i :: config.jobs] for i in range(config.jobs)]
    args = [(F, V, th.side, config.mode, config.comparison, config.tol, config.seed, c) for c in chunks if c]
    if config.jobs == 1:
        results = _run_trials(args[0])
    else:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = [r for part in pool.map(_run_trials, args) for r in part]
    results.sort(key=lambda r: r[0])

    passes = sum(d.passed for _, d, _ in results)
    violations = sum(d.violations for _, d, _ in results)
    worst_t, worst_d, worst_s = max(results, key=lambda r: (r[1].max_deviation, -r[0]))
    witness = None
    if not worst_d.passed:
        f, g, h, lhs, rhs = worst_s
        witness = Witness(f, g, h, worst_d.worst_index, lhs, rhs, worst_t)
    return SuiteReport(
        theorem_id=config.theorem_id,
        n=config.n,
        trials=config.trials,
        mode=config.mode,
        comparison=config.comparison,
        tol=config.tol,
        passes=passes,
        max_deviation=max(d.max_deviation for _, d, _ in results),
        violations=violations,
        witness=witness,
        wall_time=time.perf_counter() - start,
        fixture=config.resolved()["fixture"],
    )


# ---------------------------------------------------------------------------
# counterexample search


def _violation(F, V, side, f, g, h, mode, tol) -> Deviation:
    both = lhs_rhs_left if side == "left" else lhs_rhs_right
    lhs, rhs = both(F, V, f, g, h, mode)
    return compare(lhs, rhs, "strict", tol)


def _non_convex(grid: Grid, rng: np.random.Generator, max_draws: int = 10_000) -> FTV:
    for _ in range(max_draws):
        f = random_ftv(grid, int(rng.integers(2**63)))
        if not is_convex(f):
            return f
    raise RuntimeError("could not draw a non-convex fuzzy truth value")


def minimize_witness(F, V, side, subjects, constraints, mode="exact", tol=0.0) -> list[FTV]:
    """Greedily zero grades while the violation persists and the convexity constraints hold.

    ``constraints[i]`` is True (must stay convex), False (must stay
    non-convex) or None (free).
    """
    subjects = list(subjects)
    for s in range(3):
        for i in range(subjects[s].grid.n + 1):
            if subjects[s].grades[i] == 0:
                continue
            trial = list(subjects)
            trial[s] = subjects[s].with_grade(i, 0.0)
            c = constraints[s]
            if c is not None and is_convex(trial[s]) != c:
                continue
            if not _violation(F, V, side, *trial, mode, tol).passed:
                subjects = trial
    return subjects


def search_counterexample(
    F: BinaryOp,
    V: BinaryOp,
    side: str = "left",
    subject: str = "f",
    trials: int = 1000,
    seed: int = 0,
    *,
    mode: str = "exact",
    tol: float = 0.0,
    convex_only: bool = False,
    minimize: bool = True,
) -> Witness | None:
    """Look for a strict violation of the law with the convexity hypothesis dropped on ``subject``.

    The subject the theorem requires to be convex (f for left laws, h for
    right laws) stays convex unless it is the one being perturbed.  With
    ``convex_only`` the perturbed subject is drawn convex too, which makes
    this a control run.
    """
    check_same_grid(F, V)
    if side not in ("left", "right"):
        raise ValueError(f"unknown side {side!r}")
    pos = "fgh".index(subject)
    hyp = 0 if side == "left" else 2
    grid = F.grid
    rng = np.random.default_rng(seed)
    for t in range(trials):
        subjects = []
        for s in range(3):
            sub_seed = int(rng.integers(2**63))
            if s == pos:
                subjects.append(random_convex(grid, sub_seed) if convex_only else _non_convex(grid, np.random.default_rng(sub_seed)))
            elif s == hyp:
                subjects.append(random_convex(grid, sub_seed))
            else:
                subjects.append(random_ftv(grid, sub_seed))
        if _violation(F, V, side, *subjects, mode, tol).passed:
            continue
        if minimize:
            constraints: list[bool | None] = [None, None, None]
            constraints[hyp] = True
            if not convex_only:
                constraints[pos] = False
            else:
                constraints[pos] = True
            subjects = minimize_witness(F, V, side, subjects, constraints, mode, tol)
        both = lhs_rhs_left if side == "left" else lhs_rhs_right
        lhs, rhs = both(F, V, *subjects, mode)
        d = compare(lhs, rhs, "strict", tol)
        return Witness(*subjects, d.worst_index, lhs, rhs, t)
    return None


# ---------------------------------------------------------------------------
# exhaustive sub-mode


def exhaustive_check(
    F: BinaryOp, V: BinaryOp, side: str = "left", levels=(0.0, 0.5, 1.0), mode: str = "exact"
) -> Witness | None:
    """Check the law for every convex hypothesis subject with grades in ``levels``.

    Both sides are sup-min convolutions that preserve pointwise maxima and
    commute with ``c ∧ ·`` in each of the two free subjects, so equality for
    all free subjects reduces to equality on pairs of point indicators.
    Only grids with n <= 4 are accepted.
    """
    grid = check_same_grid(F, V)
    if grid.n > 4:
        raise ValueError("exhaustive mode is limited to n <= 4")
    both = lhs_rhs_left if side == "left" else lhs_rhs_right
    points = [FTV.indicator(grid, x) for x in grid.points]
    for grades in itertools.product(levels, repeat=grid.n + 1):
        c = FTV(grid, np.array(grades))
        if not is_convex(c):
            continue
        for p, q in itertools.product(points, repeat=2):
            f, g, h = (c, p, q) if side == "left" else (p, q, c)
            lhs, rhs = both(F, V, f, g, h, mode)
            d = compare(lhs, rhs, "strict", 0.0)
            if not d.passed:
                return Witness(f, g, h, d.worst_index, lhs, rhs)
    return None


def with_seed(config: SuiteConfig, seed: int) -> SuiteConfig:
    return replace(config, seed=seed)
