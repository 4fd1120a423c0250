from __future__ import annotations

import subprocess
import sys

import pytest

from tfsr.cli import main
from tfsr.graphcore import cycle, write_graph


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("rho,expected", [
    ("11/50", "piece=Krein value=3/50 (exact)"),
    ("3/10", "piece=rho/3|2rho-1/2 value=1/10"),
    ("9/20", "piece=zero value=0"),
    ("5/16", "piece=2rho-1/2|2rho/5 value=1/8"),
    ("2/5", "piece=3rho-1 value=1/5"),
])
def test_eval_bound(capsys, rho, expected):
    code, out, _ = run(capsys, "eval-bound", "--rho", rho)
    assert code == 0 and out.strip() == expected


def test_eval_bound_enclosure(capsys):
    code, out, _ = run(capsys, "eval-bound", "--rho", "1/4", "--precision", "1e-6")
    assert code == 0
    piece, value = out.split()
    assert piece == "piece=Krein"
    lo, hi = value[len("value=["):-1].split(",")
    assert float(lo) <= 0.0788353904 <= float(hi)


@pytest.mark.parametrize("rho,code", [("3/5", 2), ("-1/10", 2), ("abc", 2), ("1/2", 3)])
def test_eval_bound_errors(capsys, rho, code):
    assert run(capsys, "eval-bound", "--rho", rho)[0] == code


def test_catalog_analyze_roundtrip(capsys, tmp_path):
    for name, expect in [
        ("petersen", "rho=3/10 a=1/10"),
        ("higman_sims", "rho=11/50 a=3/50"),
        ("clebsch", "rho=5/16 a=1/8"),
    ]:
        out = tmp_path / f"{name}.g6"
        assert run(capsys, "catalog", "--name", name, "--out", str(out))[0] == 0
        code, text, _ = run(capsys, "analyze", "--graph", str(out), "--weights", str(out) + ".weights")
        assert code == 0
        assert expect in text and "tight-vs-a0=yes" in text


def test_analyze_c6(capsys, tmp_path):
    p = tmp_path / "c6.g6"
    write_graph(cycle(6), p)
    code, out, _ = run(capsys, "analyze", "--graph", str(p))
    assert code == 0 and "diameter2=no" in out and " a=0 " in out


def test_analyze_triangle(capsys, tmp_path):
    p = tmp_path / "k3.g6"
    p.write_text("Bw\n")
    code, out, _ = run(capsys, "analyze", "--graph", str(p))
    assert code == 3 and "triangle-free=no" in out


def test_malformed_input(capsys, tmp_path):
    p = tmp_path / "bad.g6"
    p.write_text("this is not graph6\n")
    assert run(capsys, "verify", "--graph", str(p))[0] == 2
    assert run(capsys, "analyze", "--graph", str(tmp_path / "missing.g6"))[0] == 2
    assert run(capsys, "catalog", "--name", "nope")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--catalog", "clebsch", "--suite", "cases")
    assert code == 0 and out.strip().endswith("verify: ok")
    assert "twofifth\tapplicable=true\tholds=true\tlhs=1/8\trhs=1/8" in out
    code, out, _ = run(capsys, "verify", "--catalog", "petersen", "--suite", "identities")
    assert code == 0


def test_optimize_weights(capsys, tmp_path):
    p = tmp_path / "p.g6"
    run(capsys, "catalog", "--name", "petersen", "--out", str(p))
    code, out, _ = run(capsys, "optimize-weights", "--graph", str(p))
    assert code == 0 and "rho_G=3/10 a*=1/10 weights=uniform" in out and "certificate=valid" in out


def test_curve(capsys, tmp_path):
    out = tmp_path / "curve.csv"
    assert run(capsys, "curve", "--grid-step", "1/100", "--out", str(out))[0] == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 35 and lines[0] == "rho,a0_lo,a0_hi,piece"
    code, text, _ = run(capsys, "curve", "--grid-step", "1/10", "--out", "-")
    assert code == 0 and len(text.splitlines()) == 5


def test_search(capsys, tmp_path):
    cfg = tmp_path / "n10.cfg"
    cfg.write_text("n_max = 10\nrho_min = 0\nrho_max = 1/3\n")
    out = tmp_path / "res.tsv"
    assert run(capsys, "search", "--config", str(cfg), "--out", str(out))[0] == 0
    assert out.read_text() == "I@OZCMgs?\t3/10\t1/10\t" + ",".join(["1/10"] * 10) + "\n"
    cfg.write_text("garbage\n")
    assert run(capsys, "search", "--config", str(cfg))[0] == 2


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "tfsr.cli", "eval-bound", "--rho", "11/50"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "piece=Krein value=3/50 (exact)"
