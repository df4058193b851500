import json
import os
import subprocess
import sys

import pytest

from qgeom.cli import run
from qgeom.gf import Field
from qgeom.grassmann import GrassmannGraph
from qgeom.ioformats import parse_graph6, write_edge_csv, write_graph6

CONFIGS = os.path.join(os.path.dirname(__file__), "..", "configs")


def cfg(name):
    return os.path.join(CONFIGS, name)


def read(path):
    with open(path, "rb") as fh:
        return fh.read()


# ---------------------------------------------------------------------------
# graph6 round trips through the independent parser
# ---------------------------------------------------------------------------

def test_graph6_known_answer():
    """Published format vector: 5 vertices, edges {02, 04, 13, 34} <-> 'DQc'."""
    from qgeom.grassmann import FiniteGraph

    g = FiniteGraph(range(5), [[2, 4], [3], [0], [1, 4], [0, 3]])
    assert write_graph6(g) == b"DQc"
    n, edges = parse_graph6(b"DQc")
    assert n == 5
    assert edges == {(0, 2), (0, 4), (1, 3), (3, 4)}


def test_graph6_roundtrip_small():
    g = GrassmannGraph(Field(2), 4, 2)
    n, edges = parse_graph6(write_graph6(g))
    assert n == 35
    assert edges == set(g.edges())


def test_graph6_roundtrip_large_header():
    g = GrassmannGraph(Field(2), 5, 2)  # 155 vertices: long size header
    n, edges = parse_graph6(write_graph6(g))
    assert n == 155
    assert edges == set(g.edges())


def test_edge_csv_sorted():
    g = GrassmannGraph(Field(2), 4, 2)
    lines = write_edge_csv(g).strip().split("\n")
    pairs = [tuple(map(int, ln.split(","))) for ln in lines]
    assert pairs == sorted(pairs)
    assert all(u < v for u, v in pairs)
    assert len(pairs) == 35 * 18 // 2


# ---------------------------------------------------------------------------
# exit codes
# ---------------------------------------------------------------------------

def test_usage_error_exit_64():
    assert run(["bogus"]) == 64
    assert run(["grassmann", "--field", cfg("gf2.json")]) == 64  # missing n, k
    assert run(["grassmann", "--field", cfg("gf2.json"), "--n", "4", "--k", "2",
                "--export", "nope"]) == 64


def test_config_error_exit_65(tmp_path):
    assert run(["field", "--field", "/nonexistent.json"]) == 65
    bad = tmp_path / "bad.json"
    bad.write_text('{"p": 4, "e": 1}')
    assert run(["field", "--field", str(bad)]) == 65
    reducible = tmp_path / "red.json"
    reducible.write_text('{"p": 2, "e": 2, "modulus": [1, 0, 1]}')
    assert run(["field", "--field", str(reducible)]) == 65


def test_violation_exit_2():
    assert run(["embed", "canonical", "--polar", cfg("w32.json"),
                "--n", "4", "--k", "3"]) == 2


def test_success_exit_0(tmp_path):
    out = tmp_path / "f.json"
    assert run(["field", "--field", cfg("gf4.json"), "--out", str(out)]) == 0
    obj = json.loads(out.read_text())
    assert obj["q"] == 4 and obj["modulus"] == [1, 1, 1]


def test_qgeom_cap_env(tmp_path, monkeypatch):
    monkeypatch.setenv("QGEOM_CAP", "10")
    assert run(["grassmann", "--field", cfg("gf2.json"), "--n", "4", "--k", "2"]) == 2
    monkeypatch.setenv("QGEOM_CAP", "not-a-number")
    assert run(["grassmann", "--field", cfg("gf2.json"), "--n", "4", "--k", "2"]) == 65


# ---------------------------------------------------------------------------
# grassmann command
# ---------------------------------------------------------------------------

def test_grassmann_exports(tmp_path):
    g6 = tmp_path / "g.g6"
    csv = tmp_path / "g.csv"
    js = tmp_path / "g.json"
    summ = tmp_path / "s.json"
    code = run(["grassmann", "--field", cfg("gf2.json"), "--n", "4", "--k", "2",
                "--export", f"g6:{g6}", "--export", f"csv:{csv}",
                "--export", f"json:{js}", "--intersection-array",
                "--out", str(summ)])
    assert code == 0
    n, edges = parse_graph6(read(g6))
    assert n == 35 and len(edges) == 315
    csv_pairs = {tuple(map(int, ln.split(",")))
                 for ln in csv.read_text().strip().split("\n")}
    assert csv_pairs == edges
    jobj = json.loads(js.read_text())
    assert jobj["n_vertices"] == 35
    sobj = json.loads(summ.read_text())
    assert sobj["gaussian_binomial"] == 35
    assert sobj["intersection_array"] == {"1": [1, 9, 8], "2": [9, 9, 0]}


def test_grassmann_duality_check(tmp_path):
    summ = tmp_path / "s.json"
    code = run(["grassmann", "--field", cfg("gf2.json"), "--n", "4", "--k", "2",
                "--duality-check", "--out", str(summ)])
    assert code == 0
    perm = json.loads(summ.read_text())["duality_permutation"]
    assert sorted(perm) == list(range(35))


# ---------------------------------------------------------------------------
# polar command
# ---------------------------------------------------------------------------

def test_polar_summary_and_export(tmp_path):
    summ = tmp_path / "p.json"
    g6 = tmp_path / "p.g6"
    code = run(["polar", "--polar", cfg("h34.json"), "--n", "4",
                "--export", f"g6:{g6}", "--intersection-array",
                "--out", str(summ)])
    assert code == 0
    obj = json.loads(summ.read_text())
    assert obj["n_points"] == 45 and obj["n_maximals"] == 27
    n, edges = parse_graph6(read(g6))
    assert n == 27 and len(edges) == 27 * 10 // 2


def test_polar_degenerate_is_config_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "field": {"p": 2, "e": 1},
        "form": {"kind": "alternating", "form_dim": 2, "gram": [[0, 0], [0, 0]]},
    }))
    assert run(["polar", "--polar", str(bad), "--n", "2"]) == 65


# ---------------------------------------------------------------------------
# embed commands
# ---------------------------------------------------------------------------

def test_embed_canonical_verify_analyze(tmp_path):
    table = tmp_path / "emb.json"
    assert run(["embed", "canonical", "--polar", cfg("w32.json"),
                "--n", "5", "--k", "3", "--out", str(table)]) == 0
    obj = json.loads(table.read_text())
    assert obj["u_basis"] == [[0, 0, 0, 0, 1]]
    # feed the table back through verify
    emb_file = tmp_path / "table.json"
    emb_file.write_text(json.dumps(obj["table"]))
    rep = tmp_path / "verify.json"
    assert run(["embed", "verify", "--polar", cfg("w32.json"), "--n", "5",
                "--k", "3", "--embedding", str(emb_file), "--out", str(rep)]) == 0
    assert json.loads(rep.read_text())["report"]["pairs_checked"] == 105
    an = tmp_path / "analyze.json"
    assert run(["embed", "analyze", "--polar", cfg("w32.json"), "--n", "5",
                "--k", "3", "--out", str(an)]) == 0
    structure = json.loads(an.read_text())["structure"]
    assert structure["U"] == [[0, 0, 0, 0, 1]]
    assert structure["lines_ok"] is True


def test_embed_search_and_classify_small(tmp_path):
    out = tmp_path / "cls.json"
    code = run(["embed", "classify", "--polar", cfg("w32.json"),
                "--n", "4", "--k", "2", "--out", str(out)])
    assert code == 0
    obj = json.loads(out.read_text())
    assert obj["count"] == 576
    assert obj["classification"]["equivalence_classes"] == 1


def test_embed_search_output(tmp_path):
    out = tmp_path / "search.json"
    assert run(["embed", "search", "--polar", cfg("q42.json"),
                "--n", "5", "--k", "2", "--out", str(out)]) == 0
    obj = json.loads(out.read_text())
    assert obj["anchored"] is True
    assert obj["count"] == len(obj["embeddings"])


# ---------------------------------------------------------------------------
# determinism
# ---------------------------------------------------------------------------

def test_reruns_byte_identical(tmp_path):
    files1 = [tmp_path / f"a.{ext}" for ext in ("g6", "csv", "json")]
    files2 = [tmp_path / f"b.{ext}" for ext in ("g6", "csv", "json")]
    for files, w in ((files1, "1"), (files2, "4")):
        code = run(["--workers", w,
                    "grassmann", "--field", cfg("gf3.json"), "--n", "4",
                    "--k", "2",
                    "--export", f"g6:{files[0]}",
                    "--export", f"csv:{files[1]}",
                    "--export", f"json:{files[2]}"])
        assert code == 0
    for a, b in zip(files1, files2):
        assert read(a) == read(b)


def test_entry_point_subprocess(tmp_path):
    """End-to-end through a fresh interpreter."""
    out = tmp_path / "sum.json"
    proc = subprocess.run(
        [sys.executable, "-m", "qgeom.cli", "grassmann",
         "--field", cfg("gf2.json"), "--n", "4", "--k", "2",
         "--out", str(out)],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "35 vertices" in proc.stdout
    assert json.loads(out.read_text())["n_vertices"] == 35
