import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from lamplighter import cli
from lamplighter import embedding as em
from lamplighter import group as grp


def run_json(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def check_schema(doc):
    assert doc["schema_version"] == 1
    assert set(doc) == {"schema_version", "header", "config", "result"}
    assert {"created", "version"} <= set(doc["header"])


def test_word_metric_check(capsys, tmp_path):
    dump = tmp_path / "rho.csv"
    code, doc = run_json(capsys, "word-metric-check", "--n", "5", "--csv", str(dump))
    assert code == 0
    check_schema(doc)
    res = doc["result"]
    assert res["order"] == 160
    assert res["oracle_equivalence"]["passed"] and res["oracle_equivalence"]["mismatches"] == 0
    assert res["band"]["passed"]
    assert res["lamp_bound_violations"] == 0
    lines = dump.read_text().splitlines()
    assert lines[0] == "# schema_version=1"
    rows = list(csv.DictReader(lines[1:]))
    assert len(rows) == 160
    ident = [r for r in rows if r["lamps"] == "" and r["pos"] == "0"]
    assert ident[0]["rho"] == "0"


def test_embed_distortion_is_deterministic(capsys):
    argv = ["embed-distortion", "--n", "7", "--sample", "200", "--seed", "3"]
    _, a = run_json(capsys, *argv)
    _, b = run_json(capsys, *argv)
    check_schema(a)
    assert a["config"] == b["config"] and a["result"] == b["result"]
    assert a["result"]["mode"] == "sampled"
    assert a["result"]["distortion"] >= 1


def test_embed_distortion_exact_and_raw_params(capsys):
    _, doc = run_json(capsys, "embed-distortion", "--n", "6")
    res = doc["result"]
    assert res["mode"] == "exact"
    assert res["distortion"] == pytest.approx(3.7313, abs=1e-4)
    assert set(res["witnesses"]) == {"expansion", "contraction"}
    p = em.EmbeddingParams.default(6)
    _, raw = run_json(capsys, "embed-distortion", "--n", "6", "--eta", repr(float(p.eta)), "--delta", repr(float(p.delta)))
    assert raw["result"]["distortion"] == pytest.approx(res["distortion"], rel=1e-12)
    code, err = run_json(capsys, "embed-distortion", "--n", "6", "--eta", "1.0")
    assert code == 2 and err["error"]["type"] == "UsageError"


def test_lower_bound(capsys):
    _, doc = run_json(capsys, "lower-bound", "--n", "12")
    res = doc["result"]
    assert res["bound"] == pytest.approx(2.070, abs=1e-3)
    assert res["moments"]["source"] == "bfs"
    assert res["list_relative"] is True
    _, big = run_json(capsys, "lower-bound", "--n", "60")
    assert big["result"]["moments"]["source"] != "bfs"


def test_zigzag(capsys):
    _, doc = run_json(capsys, "zigzag", "--n", "512", "--count", "40", "--seeds", "3")
    rows = doc["result"]["rows"]
    assert [r["seed"] for r in rows] == [0, 1, 2]
    for r in rows:
        assert 0 <= r["lambda"] <= 1 and r["d_lower"] >= 0


def test_abelian_lp(capsys):
    _, doc = run_json(capsys, "abelian-lp", "--moduli", "2,2,2,2", "--metric", "hamming")
    res = doc["result"]
    assert res["negative_type"] and res["gl"]["measured_l1"] == pytest.approx(1.0)
    _, doc = run_json(capsys, "abelian-lp", "--cycle", "12")
    assert doc["result"]["order"] == 12 and doc["result"]["gl"]["passed"]


def test_abelian_lp_metric_file(capsys, tmp_path):
    path = tmp_path / "m.csv"
    path.write_text("0,0\n1,1\n2,2\n3,1\n")
    _, doc = run_json(capsys, "abelian-lp", "--cycle", "4", "--metric", f"file:{path}")
    assert doc["result"]["weights"] == pytest.approx([0, 0.25, 0, 0.25])


def test_symmetrize_round_trip(capsys, tmp_path):
    n = 3
    rng = np.random.default_rng(0)
    points = [{"lamps": g.members, "pos": g.pos, "vector": rng.normal(size=3).tolist()}
              for g in grp.elements(n)]
    src = tmp_path / "in.json"
    src.write_text(json.dumps({"n": n, "points": points}))
    _, doc = run_json(capsys, "symmetrize", "--input", str(src))
    res = doc["result"]
    assert res["psd"] and not res["degenerate"]
    assert res["distortion_after"] <= res["distortion_before"] + 1e-9
    # feeding the output back in is a fixed point
    again = tmp_path / "again.json"
    again.write_text(json.dumps({"n": n, "points": res["points"]}))
    _, doc2 = run_json(capsys, "symmetrize", "--input", str(again))
    assert doc2["result"]["distortion_after"] == pytest.approx(res["distortion_after"], rel=1e-9)
    assert doc2["result"]["distortion_before"] == pytest.approx(res["distortion_after"], rel=1e-9)


def test_out_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert cli.run(["lower-bound", "--n", "6", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    check_schema(json.loads(out.read_text()))


@pytest.mark.parametrize("argv,code,kind", [
    (["frobnicate"], 7, "CommandError"),
    (["embed-distortion", "--n", "6", "--bogus"], 2, "UsageError"),
    (["embed-distortion"], 2, "UsageError"),
    (["embed-distortion", "--n", "6", "--threads", "0"], 2, "UsageError"),
    (["embed-distortion", "--n", "30"], 3, "SizeGuardError"),
    (["zigzag", "--n", "64", "--count", "64"], 2, "UsageError"),
    (["abelian-lp", "--cycle", "8", "--metric", "nonsense"], 2, "UsageError"),
    ([], 2, "UsageError"),
])
def test_error_codes(capsys, argv, code, kind):
    got, doc = run_json(capsys, *argv)
    assert got == code
    assert doc["error"]["code"] == code and doc["error"]["type"] == kind


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lamplighter", "lower-bound", "--n", "5"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["bound"] > 1
