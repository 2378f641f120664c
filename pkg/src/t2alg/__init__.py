"""Aggregation operators on a quantized unit interval, sup-min convolution of
fuzzy truth values and executable checks of extended distributive laws."""

from .axioms import AxiomReport, CDResult, axiom_report, check_conditional_distributivity, underlying_ops
from .families import FAMILIES, OperatorSpec, SpecViolationError, build_operator
from .ftv import FTV, convolve, is_convex, join, meet, random_convex, random_ftv
from .grid import Grid, is_grid_closed, make_grid, snap
from .lab import (
    FIXTURES,
    THEOREMS,
    SuiteConfig,
    SuiteRejectedError,
    SuiteReport,
    compare,
    exhaustive_check,
    lhs_rhs_left,
    lhs_rhs_right,
    run_suite,
    search_counterexample,
)
from .operators import BinaryOp, Generator, basic_op

__all__ = [
    "AxiomReport",
    "BinaryOp",
    "CDResult",
    "FAMILIES",
    "FIXTURES",
    "FTV",
    "Generator",
    "Grid",
    "OperatorSpec",
    "SpecViolationError",
    "SuiteConfig",
    "SuiteRejectedError",
    "SuiteReport",
    "THEOREMS",
    "axiom_report",
    "basic_op",
    "build_operator",
    "check_conditional_distributivity",
    "compare",
    "convolve",
    "exhaustive_check",
    "is_convex",
    "is_grid_closed",
    "join",
    "lhs_rhs_left",
    "lhs_rhs_right",
    "make_grid",
    "meet",
    "random_convex",
    "random_ftv",
    "run_suite",
    "search_counterexample",
    "snap",
    "underlying_ops",
]
