import json
import subprocess
import sys

import numpy as np
import pytest

from symrigid import corpus, documents, verify
from symrigid.cli import main
from symrigid.frameworks import EuclideanFramework
from symrigid.groups import make_schoenflies
from symrigid.symgraph import make_gain_graph, quotient_gain_graph


@pytest.fixture
def files(tmp_path):
    out = {}

    def put(name, obj):
        path = tmp_path / f"{name}.json"
        documents.write(obj, path)
        out[name] = str(path)

    put("k3", EuclideanFramework(3, [(0, 1), (1, 2), (0, 2)], [[0, 0], [1, 0.1], [0.3, 1.2]]))
    put("square", EuclideanFramework(4, [(0, 1), (1, 2), (2, 3), (0, 3)], [[0, 0], [1, 0], [1, 1], [0, 1]]))
    put("k4e", corpus.k4e_fixture())
    put("pointline", corpus.mirror_two_line_example())
    put("bucket", corpus.grab_bucket_example())
    put("cs", corpus.random_symmetric_spherical(make_schoenflies(3, "Cs"), 3, 1))
    put("c3", corpus.random_symmetric_spherical(make_schoenflies(3, "Cn", 3), 2, 1))
    put("k4e_gain", quotient_gain_graph(corpus.k4e_graph()))
    put("loops", make_gain_graph(1, [(0, 0, 1), (0, 0, 2)], make_schoenflies(2, "Cn", 4)))
    put("k4e_graph", corpus.k4e_graph())
    out["dir"] = tmp_path
    return out


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr()


def test_analyze_examples(files, capsys):
    code, out = run(capsys, "analyze", files["k3"])
    rep = json.loads(out.out)["rigidity"]
    assert code == 0 and rep["is_inf_rigid"] and rep["is_isostatic"]
    code, out = run(capsys, "analyze", files["square"])
    rep = json.loads(out.out)["rigidity"]
    assert not rep["is_inf_rigid"] and rep["nullity"] == 4
    code, out = run(capsys, "analyze", files["k4e"], "--exact")
    doc = json.loads(out.out)
    assert doc["forced"]["is_forced_rigid"] and doc["rigidity"]["is_inf_rigid"]
    assert doc["combinatorial"]["tags"]["forced"] == "forced-cyclic-plane"


def test_analyze_writes_file(files, capsys):
    target = files["dir"] / "report.json"
    code, _ = run(capsys, "analyze", files["k4e"], "-o", target, "--details")
    assert code == 0
    assert json.loads(target.read_text())["rigidity"]["redundant_edges"] == []


def test_to_sphere_marks_former_lines(files, capsys):
    code, out = run(capsys, "transfer", files["pointline"], "--op", "to-sphere", "--check")
    doc = json.loads(out.out)
    assert code == 0 and doc["space"] == "spherical" and doc["X"] == [4, 5]


def test_pair_trivial_subgroup(files, capsys):
    target = files["dir"] / "paired.json"
    code, _ = run(capsys, "transfer", files["cs"], "--op", "pair", "--subgroup", "trivial", "--check", "-o", target)
    assert code == 0
    fw = documents.read(target)
    # the twisted mirror is the half-turn about the mirror normal
    assert np.allclose(fw.symmetry.group.rep[1], np.diag([1.0, -1.0, -1.0]))


def test_pair_without_index2_subgroup(files, capsys):
    code, out = run(capsys, "transfer", files["c3"], "--op", "pair")
    assert code == 2 and "no index-2 subgroup" in out.err


@pytest.mark.parametrize("name,argv", [
    ("cs", ["--op", "double-cover"]),
    ("cs", ["--op", "invert", "--subset", "0,1"]),
    ("cs", ["--op", "rotate", "--axis", "0,0,1", "--angle", "0.4"]),
    ("k4e", ["--op", "rotate", "--matrix", "[[0, -1], [1, 0]]"]),
    ("bucket", ["--op", "pair-fixed"]),
    ("pointline", ["--op", "to-sphere"]),
])
def test_transfer_checks_pass(files, capsys, name, argv):
    code, out = run(capsys, "transfer", files[name], *argv, "--check")
    assert code == 0, out.err
    assert json.loads(out.out)["kind"] == "framework"


def test_transfer_errors(files, capsys):
    code, out = run(capsys, "transfer", files["cs"], "--op", "invert", "--subset", "0")
    assert code == 2 and "orbit" in out.err
    code, out = run(capsys, "transfer", files["k3"], "--op", "to-ph")
    assert code == 2
    code, out = run(capsys, "transfer", files["cs"], "--op", "rotate", "--matrix", "[[1,0,0],[0,1,0],[0,0,2]]")
    assert code == 2


def test_gain_examples(files, capsys):
    code, out = run(capsys, "gain", files["k4e_gain"], "--k", 2, "--l", 3, "--m", 1)
    g = json.loads(out.out)["gain"]
    assert code == 0 and g["tight"]
    code, out = run(capsys, "gain", files["k4e_gain"], "--k", 2, "--l", 3, "--m", 2, "--find-tight")
    assert len(json.loads(out.out)["gain"]["witness"]) == 2
    code, out = run(capsys, "gain", files["loops"], "--k", 2, "--l", 3, "--m", 1)
    assert json.loads(out.out)["gain"]["violation"] == [0, 1]
    code, out = run(capsys, "gain", files["k4e_graph"], "--k", 2, "--l", 3, "--m", 1)
    assert json.loads(out.out)["gain"]["tight"]
    code, out = run(capsys, "gain", files["loops"], "--k", 2, "--l", 3, "--m", 5)
    assert code == 2


def test_bad_documents(files, capsys):
    bad = files["dir"] / "bad.json"
    bad.write_text('{"kind": "framework", "version": 1, "space": "euclidean", "d": 2, "vertices": 2, "edges": [[0, 5]]}')
    code, out = run(capsys, "analyze", bad)
    assert code == 2 and "$.edges[0]" in out.err
    bad.write_text('{"kind":\n "framework",,}')
    code, out = run(capsys, "analyze", bad)
    assert code == 2 and "line 2" in out.err
    code, out = run(capsys, "analyze", files["dir"] / "missing.json")
    assert code == 2
    code, out = run(capsys, "analyze", files["k4e_gain"])
    assert code == 2


def test_sample(files, capsys):
    code, out = run(capsys, "sample", "--space", "ph", "--n", 4, "--lines", 2, "--seed", 3)
    fw = documents.from_document(json.loads(out.out))
    assert code == 0 and len(fw.hyperplanes) == 2
    code, out = run(capsys, "sample", files["k4e_graph"], "--regular", "--seed", 5)
    fw = documents.from_document(json.loads(out.out))
    assert fw.symmetry is not None and fw.n == 4
    again = run(capsys, "sample", files["k4e_graph"], "--regular", "--seed", 5)[1].out
    assert again == out.out


def test_exact_output(files, capsys):
    code, out = run(capsys, "transfer", files["k4e"], "--op", "rotate", "--matrix", "[[0, -1], [1, 0]]", "--exact-out")
    doc = json.loads(out.out)
    assert all(isinstance(x, str) for x in doc["coords"]["0"])
    assert documents.from_document(doc).n == 4


def test_verify_exit_codes(capsys, tmp_path, monkeypatch):
    summary = tmp_path / "s.json"
    code, out = run(capsys, "verify", "--suite", "inversion", "--trials", 10, "--seed", 1, "-o", summary)
    assert code == 0 and "inversion: 10/10 PASS" in out.out
    assert json.loads(summary.read_text())["suites"][0]["passed"] == 10

    def broken(trials=1, seed=0, tol=None, jobs=1):
        return verify._run("broken", lambda k: "wrong", range(trials), jobs)

    monkeypatch.setitem(verify.SUITES, "inversion", broken)
    code, out = run(capsys, "verify", "--suite", "inversion", "--trials", 2)
    assert code == 3 and "FAIL" in out.out


def test_module_entry_point(files):
    res = subprocess.run([sys.executable, "-m", "symrigid", "analyze", files["k3"]], capture_output=True, text=True)
    assert res.returncode == 0 and '"is_inf_rigid": true' in res.stdout
