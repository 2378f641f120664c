import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from oracles import associativity_residual_loop, cd_residual_loop

from t2alg.axioms import (
    InvalidNeutralError,
    associativity_residual,
    axiom_report,
    check_conditional_distributivity,
    has_neutral,
    is_continuous,
    underlying_ops,
)
from t2alg.families import OperatorSpec, build_operator
from t2alg.grid import GridMismatchError, make_grid
from t2alg.lab import FIXTURES, fixture_ops
from t2alg.operators import basic_op, tabulate

G16 = make_grid(16)
NN_I = dict(S1="SL", S2="SL", T="TL")
CLOSED_FIXTURES = [name for name in sorted(FIXTURES) if not name.endswith("-ii")]


def test_minimum_report():
    r = axiom_report(basic_op(G16, "TM"))
    assert r.commutative and r.associative and r.associativity_residual == 0
    assert r.monotone and r.idempotent
    assert r.neutral_elements == (1.0,) and r.absorbing_elements == (0.0,)
    assert r.boundary_class == "conjunctive"
    assert r.max_jump == pytest.approx(1 / 16)
    assert "commutative" in r.summary()


@pytest.mark.parametrize("fam, cls", [("underline-uninorm", "conjunctive"), ("overline-uninorm", "disjunctive")])
def test_boundary_class(fam, cls):
    r = axiom_report(build_operator(G16, OperatorSpec(fam, e=0.5)))
    assert r.boundary_class == cls and r.is_uninorm


def test_neither_class_and_non_commutative():
    op = tabulate(G16, lambda x, y: 0.5 * x + 0.25 * y)
    r = axiom_report(op)
    assert r.boundary_class == "neither"
    assert not r.commutative and not r.associative


def test_product_associativity_residual_is_quantization_sized():
    r = axiom_report(basic_op(G16, "TP"))
    assert 0 < r.associativity_residual <= 1 / 16
    assert r.associative


@given(st.sampled_from(CLOSED_FIXTURES), st.integers(0, 1))
def test_vectorized_associativity_matches_loop(name, which):
    op = fixture_ops(name, make_grid(8))[which]
    assert associativity_residual(op) == associativity_residual_loop(op)


@given(st.sampled_from(CLOSED_FIXTURES), st.sampled_from(["left", "right"]))
def test_vectorized_cd_matches_loop(name, side):
    F, U = fixture_ops(name, make_grid(8))
    mode = "CDl" if side == "left" else "CDr"
    assert check_conditional_distributivity(F, U, mode).max_residual == cd_residual_loop(F, U, side)


def test_continuity_proxy():
    assert is_continuous(basic_op(G16, "TL"))
    assert not is_continuous(build_operator(G16, OperatorSpec("overline-uninorm", e=0.5)))


def test_underlying_operators_of_underline():
    U = build_operator(G16, OperatorSpec("underline-uninorm", e=0.5))
    T, S = underlying_ops(U, 0.5)
    TM, SM = basic_op(G16, "TM"), basic_op(G16, "SM")
    # exact where the rescaled arguments are grid points, bilinear error elsewhere
    even = slice(None, None, 2)
    assert np.array_equal(T.values[even, even], TM.values[even, even])
    assert np.array_equal(S.values[even, even], SM.values[even, even])
    assert T.same_table(TM, tol=1 / 32) and S.same_table(SM, tol=1 / 32)


def test_underlying_tconorm_has_nilpotent_top_block():
    e, a = 0.25, 0.625
    U = build_operator(G16, OperatorSpec("uninorm-disj-ii", e=e, a=a))
    T, S = underlying_ops(U, e)
    x = G16.points
    b = (a - e) / (1 - e)
    top = x >= b - 1e-12
    X, Y = np.meshgrid(x[top], x[top], indexing="ij")
    ref = b + (1 - b) * np.minimum((X - b) / (1 - b) + (Y - b) / (1 - b), 1)
    assert np.allclose(S.values[np.ix_(top, top)], ref, atol=1 / 32)
    assert np.allclose(T.values[:, -1], x, atol=1e-9)


def test_underlying_ops_errors():
    U = build_operator(G16, OperatorSpec("underline-uninorm", e=0.5))
    with pytest.raises(InvalidNeutralError):
        underlying_ops(U, 0.0)
    with pytest.raises(InvalidNeutralError):
        underlying_ops(U, 0.25)
    assert has_neutral(U, 0.5) and not has_neutral(U, 0.3)


def test_cd_spec_examples():
    F = build_operator(G16, OperatorSpec("nullnorm-disj-i", e=0.25, k=0.5, blocks=NN_I))
    U = build_operator(G16, OperatorSpec("uninorm-disj-i", e=0.25))
    assert check_conditional_distributivity(F, U, "CD", 1e-9).passed
    assert check_conditional_distributivity(basic_op(G16, "TP"), basic_op(G16, "SM"), "CD", 0).passed
    bad = check_conditional_distributivity(F, build_operator(G16, OperatorSpec("underline-uninorm", e=0.25)), "CD", 1e-9)
    assert not bad.passed and bad.witness is not None
    assert "FAIL" in bad.summary()


def test_cd_guard_is_strict_and_unguarded_scan_checks_plain_distributivity():
    F, U = fixture_ops("cd-disj-iii", G16)
    assert check_conditional_distributivity(F, U).passed
    plain = check_conditional_distributivity(F, U, guarded=False)
    assert not plain.passed
    # the failures live exactly where U reaches 1
    x, y, z = plain.witness
    assert U(y, z) == 1.0


def test_cd_errors():
    with pytest.raises(ValueError):
        check_conditional_distributivity(basic_op(G16, "TM"), basic_op(G16, "SM"), "CDx")
    with pytest.raises(GridMismatchError):
        check_conditional_distributivity(basic_op(G16, "TM"), basic_op(make_grid(8), "SM"))


# the conjunctive lemma's case (iii) pair: a nullnorm with e < k has F(x, 0) = x
# and F(x, 1) = k on [0, k], while U >= max on [e, 1]^2, so (x, 0, 1) with
# e < x < k violates the law although U(0, 1) = 0 < 1
@given(st.sampled_from([8, 12, 16, 32]))
def test_conjunctive_case_iii_pair_is_not_conditionally_distributive(n):
    F, U = fixture_ops("cd-conj-iii", make_grid(n))
    e, k = 0.25, 0.5
    for i in range(n + 1):
        x = i / n
        if e < x < k:
            assert U(0, 1) == 0.0
            assert F(x, U(0, 1)) == x
            assert U(F(x, 0), F(x, 1)) == k
    assert not check_conditional_distributivity(F, U, "CD", 0).passed
