import json

import pytest

from golden import SIGMA2
from lilsigma.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sigma2(capsys):
    code, out, _ = run(capsys, "sigma2", "--p", "13", "--q", "6", "--at", "3/7")
    assert code == 0 and out.strip() == "948/3773"
    code, out, _ = run(capsys, "--format", "structured", "sigma2", "--p", "4", "--q", "3",
                       "--at", "3/7", "--depth", "6")
    doc = json.loads(out)
    assert code == 0 and set(doc) >= {"lower", "upper"}


def test_constant_table(capsys):
    code, out, _ = run(capsys, "constant", "--p", "12", "--q", "7")
    assert code == 0
    assert SIGMA2[(12, 7)] in out
    assert "(1/18335)√(1288914789424650371352900618359881195696318380071236938/" \
           "15230103878098355389592475654267327331681959935)" in out


def test_structured_round_trip(capsys):
    code, out, _ = run(capsys, "--format", "structured", "constant", "--p", "12", "--q", "5")
    doc = json.loads(out)
    assert json.dumps(doc, indent=2) + "\n" == out
    dec = doc["sigma_squared"]["decimal"]
    assert len(dec.replace("0.", "", 1).lstrip("0")) == 30
    assert doc["provenance"] == "TheoremTable"


def test_certify_and_recheck(tmp_path, capsys):
    path = tmp_path / "out"
    code, out, _ = run(capsys, "certify", "--p", "4", "--q", "3", "--c", "3/7",
                       "--emit-certificate", str(path))
    assert code == 0 and out.startswith("Proven")
    code, out, _ = run(capsys, "recheck", str(path))
    assert code == 0
    doc = json.loads(path.read_text())
    doc["verdicts"][1]["margin"] = "-" + doc["verdicts"][1]["margin"]
    path.write_text(json.dumps(doc))
    code, _, _ = run(capsys, "recheck", str(path))
    assert code == 2


def test_certify_failed_and_env(tmp_path, capsys, monkeypatch):
    code, out, _ = run(capsys, "certify", "--p", "12", "--q", "7", "--c", "1/3")
    assert code == 2 and out.startswith("Failed")
    monkeypatch.setenv("LIL_SIGMA_MAX_DEPTH", "12")
    code, _, _ = run(capsys, "certify", "--p", "3", "--q", "2", "--c", "277/665")
    assert code == 0
    code, _, _ = run(capsys, "certify", "--p", "3", "--q", "2", "--c", "277/665", "--max-depth", "8")
    assert code == 2
    monkeypatch.setenv("LIL_SIGMA_MAX_DEPTH", "lots")
    code, _, err = run(capsys, "certify", "--p", "3", "--q", "2", "--c", "277/665")
    assert code == 1 and "LIL_SIGMA_MAX_DEPTH" in err


def test_usage_errors(tmp_path, capsys):
    code, _, err = run(capsys, "certify", "--p", "5", "--q", "1", "--c", "2/5")
    assert code == 1 and "q = 1" in err
    code, _, err = run(capsys, "sigma2", "--p", "4", "--q", "2", "--at", "1/3")
    assert code == 1 and "coprime" in err
    code, _, _ = run(capsys, "sigma2", "--p", "4", "--q", "3", "--at", "7/5")
    assert code == 1
    code, _, _ = run(capsys, "recheck", str(tmp_path / "missing"))
    assert code == 1
    with pytest.raises(SystemExit) as info:
        main(["sigma2", "--p", "4"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["sigma2", "--p", "4", "--q", "3", "--at", "x"])
    assert info.value.code == 1


def test_constant_outcomes(capsys):
    code, out, _ = run(capsys, "constant", "--irrational")
    assert code == 0 and "1/4" in out
    code, out, _ = run(capsys, "constant", "--p", "7", "--q", "4", "--no-certify", "--search-depth", "5")
    assert code == 2 and "SearchOnly" in out
    code, out, _ = run(capsys, "constant", "--p", "34", "--q", "9", "--no-certify", "--search-depth", "3")
    assert code == 2 and out.startswith("Unknown")
    code, out, _ = run(capsys, "constant", "--p", "5", "--q", "1")
    assert code == 0 and "EvenQ1" not in out and "OddOdd" in out


def test_search_and_simulate(tmp_path, capsys):
    code, out, _ = run(capsys, "search", "--p", "12", "--q", "7", "--max-k", "4", "--top", "2")
    assert code == 0 and out.splitlines()[0].startswith("k=4 c=8717/18335")
    target = tmp_path / "sim.json"
    code, out, _ = run(capsys, "--format", "structured", "--output", str(target), "simulate",
                       "--p", "2", "--q", "1", "--x0", "1/1000003", "--n", "512",
                       "--checkpoints", "64", "512")
    assert code == 0 and out == ""
    doc = json.loads(target.read_text())
    assert [r["N"] for r in doc["rows"]] == [64, 512]
    assert doc["reference"]["sigma_squared"]["exact"] == "14/27"
    code, _, _ = run(capsys, "simulate", "--p", "2", "--q", "1", "--x0", "1/3", "--n", "8")
    assert code == 1
