import csv

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from t2alg.families import OperatorSpec, build_operator
from t2alg.ftv import FTV
from t2alg.grid import GridMismatchError, make_grid
from t2alg.io import (
    ParseError,
    format_spec,
    parse_rational,
    parse_spec,
    read_ftv,
    read_operator,
    read_spec,
    write_ftv,
    write_operator,
    write_report,
    write_samples,
)
from t2alg.lab import FIXTURES, SuiteConfig, run_suite
from t2alg.operators import basic_op

G16 = make_grid(16)


@pytest.mark.parametrize("text, value", [("1/4", 0.25), ("3", 3.0), ("0.375", 0.375), (" 2/8 ", 0.25)])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["1/0", "abc", ""])
def test_parse_rational_rejects(text):
    with pytest.raises(ValueError):
        parse_rational(text)


def test_spec_round_trip_for_every_tag_only_fixture():
    for F, V in FIXTURES.values():
        for spec in (F, V):
            again = parse_spec(format_spec(spec), G16)
            assert build_operator(G16, again).same_table(build_operator(G16, spec))


def test_spec_with_comments_and_files(tmp_path):
    write_operator(tmp_path / "tl.csv", basic_op(G16, "TL"))
    write_samples(tmp_path / "s.csv", G16.points**2)
    (tmp_path / "F.spec").write_text(
        "# case (ii) nullnorm\n"
        "family=nullnorm-disj-ii\n"
        "e=1/4\nk=1/2\na=3/4   # threshold\n\n"
        "block.S1=SL\nblock.S2=SL\nblock.T1=tl.csv\n"
        "generator=s.csv\n"
    )
    spec = read_spec(tmp_path / "F.spec", G16)
    assert (spec.e, spec.k, spec.a) == (0.25, 0.5, 0.75)
    assert spec.generator.samples[-1] == 1.0
    build_operator(G16, spec)


@pytest.mark.parametrize(
    "text, line, message",
    [
        ("family=overline-uninorm\ne=1/2\ncolour=red\n", 3, "unknown key"),
        ("family=overline-uninorm\ne=one half\n", 2, "not a rational"),
        ("family=overline-uninorm\njust words\n", 2, "key=value"),
        ("family=overline-uninorm\ne=1/2\ne=1/4\n", 3, "duplicate"),
        ("family=nullnorm-disj-i\nblock.T=missing.csv\n", 2, "missing.csv"),
    ],
)
def test_spec_parse_errors_carry_line_numbers(tmp_path, text, line, message):
    with pytest.raises(ParseError, match=message) as info:
        parse_spec(text, G16, tmp_path)
    assert info.value.line == line
    assert f"line {line}" in str(info.value)


def test_spec_needs_family():
    with pytest.raises(ParseError, match="missing family"):
        parse_spec("e=1/2\n", G16)


def test_generator_resolution_must_match(tmp_path):
    write_samples(tmp_path / "s.csv", make_grid(8).points)
    with pytest.raises(ParseError, match="resolution"):
        parse_spec("family=uninorm-disj-ii\ne=1/4\na=3/4\ngenerator=s.csv\n", G16, tmp_path)


def test_format_spec_refuses_file_backed_fields():
    with pytest.raises(ValueError):
        format_spec(OperatorSpec("custom-table", table=basic_op(G16, "TM")))


def test_operator_csv_format(tmp_path):
    op = basic_op(G16, "TP")
    write_operator(tmp_path / "tp.csv", op)
    lines = (tmp_path / "tp.csv").read_text().splitlines()
    assert lines[0] == "n=16" and len(lines) == 18
    assert lines[2].split(",")[1] == "0.00390625"
    back = read_operator(tmp_path / "tp.csv")
    assert np.allclose(back.raw_values, op.raw_values, rtol=1e-12, atol=0)
    with pytest.raises(GridMismatchError):
        read_operator(tmp_path / "tp.csv", make_grid(8))


def test_twelve_significant_digits(tmp_path):
    op = basic_op(make_grid(3), "TP")
    write_operator(tmp_path / "tp.csv", op)
    assert "0.111111111111" in (tmp_path / "tp.csv").read_text()


@pytest.mark.parametrize(
    "text, message",
    [
        ("0,1\n", "n=<resolution>"),
        ("n=x\n0,1\n", "bad resolution"),
        ("n=2\n0,1\n", "expected 3"),
        ("n=1\n0,a\n0,1\n", "bad number"),
    ],
)
def test_operator_csv_errors(tmp_path, text, message):
    (tmp_path / "op.csv").write_text(text)
    with pytest.raises(ParseError, match=message):
        read_operator(tmp_path / "op.csv")


@given(st.lists(st.floats(0, 1), min_size=9, max_size=9))
def test_ftv_round_trip(tmp_path_factory, grades):
    path = tmp_path_factory.mktemp("ftv") / "f.csv"
    f = FTV(make_grid(8), np.array(grades))
    write_ftv(path, f)
    assert np.allclose(read_ftv(path).grades, f.grades, rtol=1e-11, atol=1e-300)


def test_ftv_file_errors(tmp_path):
    (tmp_path / "f.csv").write_text("n=2\n0,0.5\n")
    with pytest.raises(ParseError):
        read_ftv(tmp_path / "f.csv")
    (tmp_path / "f.csv").write_text("n=2\n0,0.5,2\n")
    with pytest.raises(ParseError, match="grades"):
        read_ftv(tmp_path / "f.csv")
    (tmp_path / "f.csv").write_text("n=2\n0,0.5,1\n")
    with pytest.raises(GridMismatchError):
        read_ftv(tmp_path / "f.csv", G16)


def test_report_csv_with_witness(tmp_path):
    r = run_suite(SuiteConfig("T-IDEM", n=8, trials=20, fixture="idem-overline-half", mode="exact", comparison="strict"))
    paths = write_report(tmp_path / "rep.csv", r)
    assert [p.name for p in paths] == ["rep.csv", "rep_f.csv", "rep_g.csv", "rep_h.csv", "rep_lhs.csv", "rep_rhs.csv"]
    rows = list(csv.DictReader((tmp_path / "rep.csv").open()))
    assert rows[0]["theorem_id"] == "T-IDEM" and rows[0]["witness_file"] == "rep_f.csv"
    assert int(rows[0]["passes"]) == r.passes
    assert np.allclose(read_ftv(tmp_path / "rep_f.csv").grades, r.witness.f.grades, rtol=1e-11)


def test_report_csv_without_witness(tmp_path):
    r = run_suite(SuiteConfig("T-MIN-MAX-i", n=8, trials=5))
    paths = write_report(tmp_path / "sub" / "rep.csv", r)
    assert len(paths) == 1
    assert list(csv.DictReader(paths[0].open()))[0]["witness_file"] == ""
