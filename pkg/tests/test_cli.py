import json

import numpy as np
import pytest

from t2alg.cli import main
from t2alg.ftv import FTV
from t2alg.grid import make_grid
from t2alg.io import read_ftv, read_operator, write_ftv

NULLNORM = "family=nullnorm-disj-i\ne=1/4\nk=1/2\nblock.S1=SL\nblock.S2=SL\nblock.T=TL\n"


@pytest.fixture
def work(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("T2ALG_SEED", raising=False)
    (tmp_path / "F.spec").write_text(NULLNORM)
    (tmp_path / "U.spec").write_text("family=overline-uninorm\ne=1/4\n")
    (tmp_path / "conjU.spec").write_text("family=underline-uninorm\ne=1/4\n")
    return tmp_path


def test_ops_build_writes_table_report_and_manifest(work, capsys):
    assert main(["ops", "build", "F.spec", "--out", "F.csv", "--n", "16"]) == 0
    out = capsys.readouterr().out
    assert "grid-closed" in out and "absorbing elements {0.5}" in out
    assert read_operator(work / "F.csv").grid.n == 16
    manifest = json.loads((work / "F.manifest.json").read_text())
    assert manifest["command"] == "ops build" and manifest["exit_status"] == 0
    assert set(manifest["inputs"]) == {"F.spec"} and set(manifest["outputs"]) == {"F.csv"}
    assert manifest["config"]["n"] == 16


def test_ops_build_config_errors(work, capsys):
    (work / "bad.spec").write_text(NULLNORM.replace("e=1/4", "e=3/5"))
    assert main(["ops", "build", "bad.spec", "--out", "x.csv"]) == 2
    assert "requires e<k" in capsys.readouterr().err
    (work / "miss.spec").write_text(NULLNORM.replace("block.T=TL\n", ""))
    assert main(["ops", "build", "miss.spec", "--out", "x.csv"]) == 2
    assert "missing block T" in capsys.readouterr().err
    (work / "unk.spec").write_text(NULLNORM + "colour=red\n")
    assert main(["ops", "build", "unk.spec", "--out", "x.csv"]) == 2
    assert "line 7" in capsys.readouterr().err
    assert main(["ops", "build", "nope.spec", "--out", "x.csv"]) == 2
    assert not (work / "x.csv").exists()


def test_ops_check_and_cd_check(work, capsys):
    assert main(["ops", "check", "F.spec", "--n", "16", "--expect", "nullnorm"]) == 0
    assert main(["ops", "check", "U.spec", "--n", "16", "--expect", "nullnorm"]) == 1
    assert main(["ops", "cd-check", "F.spec", "U.spec", "--n", "16"]) == 0
    assert main(["ops", "cd-check", "F.spec", "conjU.spec", "--n", "16"]) == 1
    assert "FAIL" in capsys.readouterr().out
    # a manifest is written even without output files
    assert json.loads((work / "t2alg.manifest.json").read_text())["exit_status"] == 1


def test_ftv_commands(work):
    g = make_grid(8)
    write_ftv(work / "f.csv", FTV.indicator(g, 0.25))
    write_ftv(work / "g.csv", FTV.indicator(g, 0.5))
    assert main(["ops", "build", "U.spec", "--out", "U.csv", "--n", "8"]) == 0
    assert main(["ftv", "conv", "U.csv", "f.csv", "g.csv", "--out", "c.csv", "--mode", "exact"]) == 0
    assert read_ftv(work / "c.csv") == FTV.indicator(g, 0.5)
    assert main(["ftv", "join", "f.csv", "g.csv", "--out", "j.csv"]) == 0
    assert read_ftv(work / "j.csv") == FTV.indicator(g, 0.5)
    assert main(["ftv", "meet", "f.csv", "g.csv", "--out", "m.csv"]) == 0
    assert read_ftv(work / "m.csv") == FTV.indicator(g, 0.25)
    assert main(["ftv", "conv", "F.spec", "f.csv", "g.csv", "--out", "c2.csv"]) == 0
    write_ftv(work / "h.csv", FTV.indicator(make_grid(4), 0.25))
    assert main(["ftv", "meet", "f.csv", "h.csv", "--out", "m.csv"]) == 2


def test_dist_suite_spec_examples(work, capsys):
    assert main(["dist", "suite", "--theorem", "T-MIN-MAX-i"]) == 0
    assert "200/200 PASS" in capsys.readouterr().out
    code = main(["dist", "suite", "--theorem", "T-CD-DISJ", "--spec-F", "F.spec", "--spec-U", "conjU.spec"])
    assert code == 2
    assert "hypotheses not met" in capsys.readouterr().err
    assert main(["dist", "suite", "--theorem", "T-CD-DISJ", "--trials", "0"]) == 2
    assert main(["dist", "suite", "--theorem", "T-CD-DISJ", "--spec-F", "F.spec"]) == 2
    assert main(["dist", "suite", "--theorem", "T-CD-DISJ", "--fixture", "nope"]) == 2


def test_dist_suite_with_spec_files(work):
    args = ["dist", "suite", "--theorem", "T-IDEM", "--spec-F", "F.spec", "--spec-U", "U.spec", "--n", "16"]
    assert main(args + ["--trials", "20", "--mode", "exact", "--comparison", "strict"]) == 0


def test_dist_suite_failure_still_writes_report(work):
    code = main(["dist", "suite", "--theorem", "T-CD-DISJ", "--fixture", "cd-disj-ii", "--trials", "20", "--report", "out/r.csv"])
    assert code == 1
    assert (work / "out" / "r.csv").exists() and (work / "out" / "r_f.csv").exists()
    manifest = json.loads((work / "out" / "r.manifest.json").read_text())
    assert manifest["exit_status"] == 1
    assert manifest["config"]["fixture"] == "cd-disj-ii" and manifest["config"]["mode"] == "snap"


def test_reports_are_byte_identical_across_runs_and_jobs(work):
    base = ["dist", "suite", "--theorem", "T-ZK-S-L", "--fixture", "zk-s-ii", "--trials", "12", "--n", "16"]
    main(base + ["--report", "a/r.csv"])
    main(base + ["--report", "b/r.csv", "--jobs", "2"])
    for name in ("r.csv", "r_f.csv", "r_lhs.csv"):
        assert (work / "a" / name).read_bytes() == (work / "b" / name).read_bytes()
    ma = json.loads((work / "a" / "r.manifest.json").read_text())
    mb = json.loads((work / "b" / "r.manifest.json").read_text())
    assert list(ma["outputs"].values()) == list(mb["outputs"].values())


def test_seed_from_environment(work, monkeypatch):
    monkeypatch.setenv("T2ALG_SEED", "17")
    main(["dist", "suite", "--theorem", "T-IDEM", "--trials", "3", "--n", "8", "--manifest", "m.json"])
    assert json.loads((work / "m.json").read_text())["config"]["seed"] == 17
    main(["dist", "suite", "--theorem", "T-IDEM", "--trials", "3", "--n", "8", "--seed", "4", "--manifest", "m.json"])
    assert json.loads((work / "m.json").read_text())["config"]["seed"] == 4
    monkeypatch.setenv("T2ALG_SEED", "x")
    assert main(["dist", "suite", "--theorem", "T-IDEM", "--trials", "3", "--n", "8"]) == 2


def test_dist_search(work, capsys):
    assert main(["dist", "search", "--theorem", "T-IDEM", "--n", "8", "--out", "w/wit"]) == 0
    f = read_ftv(work / "w" / "wit_f.csv")
    assert f.grid.n == 8
    assert main(["dist", "search", "--theorem", "T-IDEM", "--n", "8", "--convex-only"]) == 1
    assert "no counterexample" in capsys.readouterr().out
    assert main(["dist", "search", "--theorem", "T-NOPE"]) == 2
    assert main(["dist", "search", "--theorem", "T-IDEM", "--trials", "0"]) == 2


def test_dist_suite_exhaustive(work):
    base = ["dist", "suite", "--n", "4", "--mode", "exact", "--exhaustive"]
    assert main(base + ["--theorem", "T-CD-DISJ"]) == 0
    assert main(base + ["--theorem", "T-IDEM", "--fixture", "idem-overline-half", "--report", "ex/r.csv"]) == 1
    assert (work / "ex" / "r_f.csv").exists()
    assert main(["dist", "suite", "--theorem", "T-CD-DISJ", "--exhaustive"]) == 2


def test_usage_errors(work):
    assert main([]) == 2
    assert main(["ops", "frobnicate"]) == 2
    assert main(["dist", "suite", "--theorem", "T-IDEM", "--mode", "fuzzy"]) == 2
    assert main(["--help"]) == 0
