import json
import subprocess
import sys

import pytest

from sidoturan.cli import main
from sidoturan.constructions import loose_cycle
from sidoturan.hypergraph import are_isomorphic, parse_hypergraph
from sidoturan.turan import CSV_COLUMNS


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _json_lines(text):
    lines = [json.loads(x) for x in text.splitlines()]
    assert "_meta" in lines[0] and lines[0]["_meta"]["tool"] == "sidoturan"
    return lines[1:]


def test_gap(capsys):
    code, out, _ = run(capsys, "gap", "--f", "loose-cycle:3:3", "--h", "complete:3:3")
    assert code == 0
    (res,) = _json_lines(out)
    assert abs(res["gap"] - 0.1913) < 1e-4 and res["t_f"] == "2/243"


def test_gen_then_hom(capsys, tmp_path):
    f = tmp_path / "f.hg"
    code, _, _ = run(capsys, "gen", "--family", "expansion", "--base", "triangle", "--r", "3", "--out", str(f))
    assert code == 0
    text = f.read_text()
    assert text.startswith("# sidoturan")
    H = parse_hypergraph(text)
    assert are_isomorphic(H, loose_cycle(3, 3))
    code, out, _ = run(capsys, "hom", "--f", str(f), "--h", str(f))
    (res,) = _json_lines(out)
    assert res["hom"] == "24"  # golden value, fixed by the all-maps oracle in test_homomorphism


def test_gen_round_trip(capsys, tmp_path):
    for fam in (["--family", "rs", "--m", "9"], ["--family", "random", "--n", "7", "--p", "0.5", "--r", "3"],
                ["--family", "loose-cycle", "--l", "5", "--r", "4"], ["--family", "complete:5:3"]):
        f = tmp_path / "g.hg"
        assert run(capsys, "gen", *fam, "--out", str(f))[0] == 0
        H = parse_hypergraph(f.read_text())
        g = tmp_path / "g2.hg"
        assert run(capsys, "gen", "--family", str(f), "--out", str(g))[0] == 0
        assert parse_hypergraph(g.read_text()) == H


def test_experiment_deterministic(capsys, tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("n_grid=8,9\np_grid=0.5,1.0\ntrials=2\nstrategies=tensor-auto,random-deletion\n")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(capsys, "experiment", "--config", str(cfg), "--seed", "42", "--out", str(a))[0] == 0
    assert run(capsys, "experiment", "--config", str(cfg), "--seed", "42", "--threads", "4", "--out", str(b))[0] == 0

    def masked(path):
        rows = [ln for ln in path.read_text().splitlines() if not ln.startswith("#")]
        i = CSV_COLUMNS.index("runtime_ms")
        return [",".join(c for j, c in enumerate(r.split(",")) if j != i) for r in rows]

    assert masked(a) == masked(b)
    rows = masked(a)
    assert len(rows) == 1 + 2 * 2 * 2 * 2
    assert "# seed=42" in a.read_text()


def test_other_subcommands(capsys):
    code, out, _ = run(capsys, "bounds", "--bound-mode", "general", "--param", "v=6", "--param", "e=3",
                       "--param", "r=3", "--param", "alpha=2")
    assert code == 0 and _json_lines(out)[0]["exact"] == "1"
    code, out, _ = run(capsys, "behrend", "--m", "9", "--strategy", "exact")
    assert _json_lines(out)[0]["set"] == [1, 2, 4, 8, 9]
    code, out, _ = run(capsys, "validate", "--h", "fano", "--k", "2")
    rep = _json_lines(out)[0]
    assert rep["linear"] and not rep["expansion_free"]
    code, out, _ = run(capsys, "certify", "--f", "loose-cycle:4:3")
    assert _json_lines(out)[0]["certified"] is False
    code, out, _ = run(capsys, "certify", "--f", "loose-cycle:3:3", "--grid-p", "0", "--grid-n", "1")
    assert _json_lines(out)[0]["certified"] is True
    code, out, _ = run(capsys, "search", "--f", "loose-cycle:3:3", "--strategy", "exhaustive", "--vmax", "4")
    assert abs(_json_lines(out)[0]["best"]["gap"] - 0.19127) < 1e-4
    code, out, _ = run(capsys, "density", "--f", "edge:3", "--h", "complete:3:3", "--format", "text")
    assert "density: 2/9" in out
    code, out, _ = run(capsys, "extract", "--f", "loose-cycle:3:3", "--h", "complete:3:3",
                       "--n", "9", "--p", "0.7", "--seed", "1", "--N", "1")
    H = parse_hypergraph(out)
    assert code == 0 and '"certified_f_free": true' in out and H.r == 3


def test_weighted_witness_file(capsys, tmp_path):
    w = tmp_path / "w.txt"
    w.write_text("w 3 3 1 0 0\n0 1 2 1\n")
    code, out, _ = run(capsys, "gap", "--f", "loose-cycle:3:3", "--w", str(w))
    assert code == 0 and abs(_json_lines(out)[0]["gap"] - 0.19127) < 1e-4


def test_exit_codes_and_no_partial_output(capsys, tmp_path):
    out = tmp_path / "x.json"
    assert run(capsys, "hom", "--f", "loose-cycle:2:3", "--h", "complete:3:3", "--out", str(out))[0] == 1
    assert not out.exists()
    code, _, err = run(capsys, "hom", "--f", "loose-cycle:3:3", "--h", "complete:30:3", "--budget", "100",
                       "--out", str(out))
    assert code == 2 and "budget" in err and not out.exists()
    assert run(capsys, "nosuch")[0] == 1
    assert run(capsys, "hom", "--f", str(tmp_path / "missing.hg"), "--h", "complete:3:3")[0] == 1
    bad = tmp_path / "bad.cfg"
    bad.write_text("n_grid\n")
    assert run(capsys, "experiment", "--config", str(bad))[0] == 1
    assert not list(tmp_path.glob(".sidoturan-*"))


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "sidoturan", "behrend", "--m", "3"], capture_output=True, text=True)
    assert p.returncode == 0 and '"size": 2' in p.stdout
