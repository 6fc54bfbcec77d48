from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest

from codegree.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_s4_text(capsys, tmp_path):
    code, out, _ = run(capsys, "analyze", "s4", "--cache-dir", str(tmp_path))
    assert code == 0
    assert "cod = {1,2,3,8}" in out
    assert "Γ = Γe" in out.splitlines()
    assert "digraph: 2->3" in out


def test_analyze_s5_strict(capsys):
    code, out, _ = run(capsys, "analyze", "s5")
    assert code == 0 and "Γe ⊊ Γ" in out.splitlines()


def test_analyze_cache_round_trip(capsys, tmp_path):
    args = ("analyze", "f21", "--format", "json", "--cache-dir", str(tmp_path))
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    a, b = json.loads(first), json.loads(second)
    assert a["stats"] == {"table_cache_hits": 0, "table_computations": 1}
    assert b["stats"] == {"table_cache_hits": 1, "table_computations": 0}
    a.pop("stats"), b.pop("stats")
    assert a == b
    assert a["codegrees"] == [1, 3, 7] and a["digraph"]["arcs"] == [[3, 7]]


def test_analyze_spec_file_and_out(capsys, tmp_path):
    spec = tmp_path / "z6.json"
    spec.write_text(json.dumps({"kind": "cyclic", "n": 6}))
    target = tmp_path / "out" / "z6.dot"
    code, out, _ = run(capsys, "analyze", str(spec), "--format", "dot", "--out", str(target))
    assert code == 0 and out == ""
    dot = target.read_text()
    assert '"2" -> "3" [dir=none, style=solid];' in dot and "dashed" not in dot
    assert not [p for p in target.parent.iterdir() if p.name.startswith(".tmp-")]


def test_analyze_five_cycle_dot(capsys, corpus_cold):
    cache_dir = corpus_cold[3]
    code, out, _ = run(capsys, "analyze", "five-cycle", "--format", "dot", "--cache-dir", str(cache_dir))
    assert code == 0
    solid = [l for l in out.splitlines() if "style=solid" in l]
    dashed = [l for l in out.splitlines() if "style=dashed" in l]
    assert len(solid) == 5 and len(dashed) == 5
    for p, q in [(2, 5), (2, 7), (3, 7), (3, 31), (5, 31)]:
        assert '  "%d" -> "%d" [style=dashed];' % (p, q) in dashed


def test_malformed_spec(capsys, tmp_path):
    spec = tmp_path / "bad.json"
    spec.write_text(json.dumps({"kind": "semidirect", "kernel": {"kind": "cyclic", "n": 0},
                                "complement": {"kind": "cyclic", "n": 2},
                                "action": {"kind": "automorphism", "images": [[[[0, -1]]]]}}))
    code, _, err = run(capsys, "analyze", str(spec))
    assert code == 2 and "$.kernel.n" in err
    code, _, err = run(capsys, "analyze", "nonsense")
    assert code == 2 and "unknown alias" in err
    code, _, err = run(capsys, "analyze", str(tmp_path / "missing.json"))
    assert code == 2


def test_limit_exit_code(capsys):
    code, _, err = run(capsys, "analyze", "s5", "--limit", "10")
    assert code == 3 and "limit" in err


def test_action_error_exit_code(capsys, tmp_path):
    spec = tmp_path / "f.json"
    spec.write_text(json.dumps({"kind": "frobenius", "kernel": {"kind": "elementary_abelian", "p": 3, "k": 2},
                                "complement": {"kind": "cyclic", "n": 2},
                                "action": {"kind": "matrix", "prime": 3, "dim": 2,
                                           "matrices": [[[0, 1], [1, 0]]]}}))
    code, _, err = run(capsys, "analyze", str(spec))
    assert code == 1 and "NotFixedPointFree" in err


C5 = "2-3,3-5,5-7,7-11,11-2"
C7 = "2-3,3-5,5-7,7-11,11-13,13-17,17-2"


def test_realizable_c5(capsys):
    code, out, _ = run(capsys, "realizable", C5)
    assert code == 0
    assert "realizable: yes" in out and "minimal: yes" in out


def test_realizable_c7(capsys):
    code, out, _ = run(capsys, "realizable", C7)
    assert code == 0 and "realizable: no" in out and "complement triangle:" in out
    code, _, _ = run(capsys, "realizable", C7, "--expect-realizable")
    assert code == 1
    code, out, _ = run(capsys, "realizable", C7, "--format", "json")
    doc = json.loads(out)
    a, b, c = doc["realizability"]["complement_triangle"]
    edges = {tuple(e) for e in doc["graph"]["edges"]}
    assert not any(tuple(sorted(x)) in edges for x in ((a, b), (b, c), (a, c)))
    assert "minimality" not in doc


def test_realizable_k1(capsys):
    code, out, _ = run(capsys, "realizable", "2")
    assert code == 0 and "realizable: yes" in out and "minimal: no" in out


def test_realizable_graph_file(capsys, tmp_path):
    path = tmp_path / "g.json"
    path.write_text(json.dumps({"vertices": [2, 3, 5], "edges": [[2, 3], [3, 5], [2, 5]]}))
    code, out, _ = run(capsys, "realizable", str(path), "--format", "json")
    assert code == 0 and json.loads(out)["realizability"]["realizable"]
    path.write_text(json.dumps({"vertices": [2], "edges": [[2, 3]]}))
    assert run(capsys, "realizable", str(path))[0] == 2
    assert run(capsys, "realizable", "2-x")[0] == 2


def test_verify_empty_and_missing(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", str(tmp_path))
    assert code == 0
    report = json.loads(out)
    assert report["entries"] == [] and report["summary"]["clean"]
    assert run(capsys, "verify", str(tmp_path / "nope"))[0] == 2


def test_verify_broken_frobenius(capsys, tmp_path):
    (tmp_path / "broken.json").write_text(json.dumps(
        {"kind": "frobenius", "kernel": {"kind": "elementary_abelian", "p": 3, "k": 2},
         "complement": {"kind": "cyclic", "n": 2},
         "action": {"kind": "matrix", "prime": 3, "dim": 2, "matrices": [[[0, 1], [1, 0]]]}}))
    (tmp_path / "s3.json").write_text(json.dumps({"kind": "symmetric", "d": 3}))
    out_file = tmp_path / "report.json"
    code, _, _ = run(capsys, "verify", str(tmp_path), "--out", str(out_file))
    assert code == 1
    report = json.loads(out_file.read_text())
    broken = next(e for e in report["entries"] if e["name"] == "broken")
    assert broken["error"]["type"] == "NotFixedPointFree" and len(broken["error"]["witness"]) == 2
    code, out, _ = run(capsys, "verify", str(tmp_path), "--format", "text")
    assert code == 1 and "error broken NotFixedPointFree" in out


def test_environment_and_flag_precedence(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("CODEGREE_FORMAT", "json")
    monkeypatch.setenv("CODEGREE_CACHE_DIR", str(tmp_path))
    code, out, _ = run(capsys, "analyze", "s3")
    assert code == 0 and json.loads(out)["codegrees"] == [1, 2, 3]
    assert list(tmp_path.glob("*.json"))
    code, out, _ = run(capsys, "analyze", "s3", "--format", "text")
    assert out.startswith("group: s3")
    monkeypatch.setenv("CODEGREE_LIMIT", "5")
    assert run(capsys, "analyze", "s3")[0] == 3


def test_module_entry_point(tmp_path):
    env = dict(os.environ, CODEGREE_CACHE_DIR=str(tmp_path))
    proc = subprocess.run([sys.executable, "-m", "codegree", "analyze", "a4"], capture_output=True,
                          text=True, env=env)
    assert proc.returncode == 0 and "digraph: 3->2" in proc.stdout


def test_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["analyze"])
    assert exc.value.code == 2
