import json

import pytest

from moserkit.cli import main


def run(capsys, *argv):
    rc = main(list(argv))
    out = capsys.readouterr()
    return rc, out.out, out.err


def test_mu_both(capsys):
    rc, out, _ = run(capsys, "mu", "--graph", "circulant:6:0,1,3", "--vertex", "1", "--method", "both", "--format", "json")
    data = json.loads(out)
    assert rc == 0 and data["agree"]
    assert data["results"]["flow"]["mu"] == data["results"]["brute"]["mu"] == 2


def test_kernel_and_molecules(capsys):
    rc, out, _ = run(capsys, "kernel", "--graph", "circulant:5:0,1", "--vertex", "1", "--format", "json")
    assert rc == 0 and json.loads(out)["kernel"] == [1]
    rc, out, _ = run(capsys, "molecules", "--graph", "circulant:5:0,1", "--vertex", "1", "--format", "json")
    assert json.loads(out)["molecules"] == [[1], [1, 2], [1, 2, 3], [1, 2, 3, 4]]


def test_reflexive_closure_flag(capsys):
    rc, _, err = run(capsys, "mu", "--graph", "circulant:5:1", "--vertex", "0")
    assert rc == 2 and "reflexive" in err
    rc, out, _ = run(capsys, "mu", "--graph", "circulant:5:1", "--vertex", "0", "--reflexive-closure")
    assert rc == 0 and "mu=1" in out


def test_kernel_graph_and_lemmas(capsys):
    rc, out, _ = run(capsys, "kernel-graph", "--graph", "petersen", "--reflexive-closure", "--check", "--format", "json")
    data = json.loads(out)
    assert rc == 0 and data["check"]["violations"] == []
    rc, out, _ = run(capsys, "lemmas", "--graph", "cayley:D4:0,1,4")
    assert rc == 0 and "violations=0" in out


def test_mader_text(capsys):
    rc, out, _ = run(capsys, "mader", "--graph", "circulant:4:1,3", "--vertex", "0")
    assert rc == 0 and out.splitlines() == ["0 -> 1 -> 0", "0 -> 3 -> 0"]


def test_groups_list(capsys):
    rc, out, _ = run(capsys, "groups", "list", "--format", "json")
    rows = json.loads(out)["groups"]
    assert {"spec": "Q8", "order": 8} in rows


@pytest.mark.parametrize("argv", [
    ["mu", "--graph", "circulant:5:0,1", "--vertex", "9"],
    ["mu", "--graph", "nonsense", "--vertex", "0"],
    ["lemmas", "--graph", "file:/does/not/exist"],
    ["verify", "kemperman"],
    ["verify", "kemperman", "--group", "Z4", "--samples", "5"],
    ["verify", "kemperman", "--group", "S4"],
    ["verify", "bogus", "--group", "Z4"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_non_transitive_file(tmp_path, capsys):
    p = tmp_path / "g.txt"
    p.write_text("3\n0 0\n1 1\n2 2\n0 1\n")
    rc, _, err = run(capsys, "lemmas", "--graph", f"file:{p}")
    assert rc == 2 and "vertex-transitive" in err


def test_verify_formats_and_files(tmp_path, capsys):
    rc, out, _ = run(capsys, "verify", "kemperman", "scherk", "--group", "Z4", "--records", "tight")
    data = json.loads(out)
    assert rc == 0 and set(data) == {"schema", "spec", "summary", "records"}
    rc, out, _ = run(capsys, "verify", "kemperman", "--group", "Z4", "--format", "csv", "--records", "all")
    assert out.splitlines()[0] == "theorem,key,lhs,rhs,holds,tight"
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for f in (a, b):
        assert run(capsys, "verify", "main", "--graph", "circulant:6:1,2", "--samples", "20", "--seed", "5",
                   "--records", "all", "--out", str(f))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    rc, out, _ = run(capsys, "verify", "mader", "--family", "cyclic:5", "--format", "text")
    assert rc == 0 and out.startswith("mader")
