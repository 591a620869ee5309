import json
import subprocess
import sys

import numpy as np
import pytest

from antimagic.cli import main
from antimagic.errors import GraphError
from antimagic.generators import complete, from_spec, min_degree_graph
from antimagic.io import format_edge_list, parse_edge_list, write_graph


# ---------------------------------------------------------------- edge lists

def test_parse_p3():
    g = parse_edge_list("3 2\n0 1\n1 2")
    assert g.n == 3 and g.edges.tolist() == [[0, 1], [1, 2]]


def test_parse_comments_and_blank_lines():
    g = parse_edge_list("# a path\n3 2\n\n0 1  # first\n1 2\n")
    assert g.m == 2


@pytest.mark.parametrize("text, needle", [
    ("2 1\n0 0", "self-loop"),
    ("3 2\n0 1\n0 1", "duplicate"),
    ("3 2\n0 1\n1 0", "duplicate"),
    ("3 1\n0 5", "line 2"),
    ("3 2\n0 1\nx y", "line 3"),
    ("3 2\n0 1", "announces 2 edges"),
    ("", "empty"),
])
def test_parse_errors(text, needle):
    with pytest.raises(GraphError, match=needle):
        parse_edge_list(text)


def test_format_roundtrip():
    g = min_degree_graph(50, 6, seed=3)
    h = parse_edge_list(format_edge_list(g))
    assert np.array_equal(g.edges, h.edges) and g.n == h.n


# ---------------------------------------------------------------- generators

def test_generators():
    assert from_spec("complete(4)").m == 6
    g = from_spec("matching(3)")
    assert g.m == 3 and g.degree.max() == 1
    assert from_spec("min_degree(100, 10)", seed=4).min_degree() >= 10
    assert from_spec("cycle(7)").m == 7
    assert from_spec("stars(2, 3)").m == 5


def test_generator_determinism():
    a = format_edge_list(from_spec("gnp(80, 0.2)", seed=9))
    b = format_edge_list(from_spec("gnp(80, 0.2)", seed=9))
    c = format_edge_list(from_spec("gnp(80, 0.2)", seed=10))
    assert a == b and a != c


def test_generator_rejects_infeasible():
    with pytest.raises(GraphError):
        from_spec("min_degree(10, 10)")
    with pytest.raises(GraphError):
        from_spec("petersen()")


# ---------------------------------------------------------------- CLI

def test_cli_constants(capsys):
    assert main(["constants", "--k1", "13", "--k2", "11"]) == 0
    out = capsys.readouterr().out
    assert "c=297" in out and "d0=4182" in out and "delta=1663" in out


def test_cli_constants_json(capsys):
    assert main(["constants", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["c"] == 297 and doc["d0"] == 4182


def test_cli_brute_k2(tmp_path, capsys):
    write_graph(complete(2), tmp_path / "k2.txt")
    assert main(["brute", "--input", str(tmp_path / "k2.txt")]) == 1
    assert "no antimagic labelling exists" in capsys.readouterr().out


def test_cli_brute_finds(tmp_path):
    out = tmp_path / "lab.json"
    assert main(["brute", "--spec", "cycle(5)", "--output", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["verified"] and len(set(doc["sums"])) == 5


def test_cli_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("2 1\n0 0\n")
    assert main(["core", "--input", str(bad), "--r", "2"]) == 2
    assert "self-loop" in capsys.readouterr().err
    assert main(["core", "--input", str(tmp_path / "missing.txt"), "--r", "2"]) == 2
    assert main(["core", "--r", "2"]) == 2
    assert main(["label", "--spec", "complete(2)"]) == 2
    assert main(["label", "--spec", "complete(5)", "--core-degree", "3"]) == 2


def test_cli_core_and_stars(capsys):
    assert main(["core", "--spec", "complete(6)", "--r", "3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["core"] == list(range(6)) and doc["shell"] == []
    assert main(["stars", "--spec", "complete(12)", "--delta", "5", "--r", "6"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert sorted(doc["V0"] + doc["V1"] + doc["V2"]) == list(range(12))


def test_cli_gen(tmp_path):
    out = tmp_path / "g.txt"
    assert main(["gen", "--spec", "min_degree(40, 5)", "--seed", "2", "--output", str(out)]) == 0
    assert parse_edge_list(out.read_text()).min_degree() >= 5


def test_cli_pipeline_failure_exit_code(tmp_path, capsys):
    # a dense graph plus one vertex of degree 10: the partition stage fails
    from antimagic.generators import gnp
    from antimagic.graph import Graph

    dense = gnp(800, 0.9, seed=0)
    g = Graph(801, np.concatenate([dense.edges, [(v, 800) for v in range(10)]]), check=False)
    write_graph(g, tmp_path / "g.txt")
    rc = main(["label", "--input", str(tmp_path / "g.txt"), "--min-degree-mode",
               "--unsafe-skip-delta-check"])
    assert rc == 3
    assert "stage partition" in capsys.readouterr().err


def test_cli_below_threshold_is_input_error(capsys):
    assert main(["label", "--spec", "gnp(300, 0.5)", "--min-degree-mode"]) == 2
    assert "minimum degree" in capsys.readouterr().err


def test_cli_label_verify_roundtrip(tmp_path, capsys):
    graph = tmp_path / "g.txt"
    lab = tmp_path / "lab.json"
    figs = tmp_path / "figs"
    assert main(["gen", "--spec", "min_degree(1000, 700)", "--seed", "1", "--output", str(graph)]) == 0
    rc = main(["label", "--input", str(graph), "--min-degree-mode", "--unsafe-skip-delta-check",
               "--verify", "--output", str(lab), "--figures", str(figs)])
    assert rc == 0
    doc = json.loads(lab.read_text())
    assert doc["verified"] is True and doc["n"] == 1000
    assert set(doc) == {"n", "m", "labels", "sums", "config", "verified"}
    assert (figs / "labelling_sums.png").stat().st_size > 0
    assert (figs / "labelling_residues.png").stat().st_size > 0
    capsys.readouterr()
    assert main(["verify", "--input", str(graph), "--labelling", str(lab), "--modulus", "143"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["ok"] is True

    # duplicate one label: the verifier must now fail
    doc["labels"][0][2] = doc["labels"][1][2]
    lab.write_text(json.dumps(doc))
    capsys.readouterr()
    assert main(["verify", "--input", str(graph), "--labelling", str(lab)]) == 1
    assert json.loads(capsys.readouterr().out)["bijective"] is False


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "antimagic.cli", "constants"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "c=297" in proc.stdout
