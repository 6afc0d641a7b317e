import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from monoextract import io as gio
from monoextract.cli import main
from monoextract.generators import GenSpec, complete, complete_bipartite, cube, cycle, gen
from monoextract.classes import antidirected_cycle
from monoextract.graph import EdgeColouring


@pytest.fixture
def run():
    runner = CliRunner()

    def go(*args):
        return runner.invoke(main, [str(a) for a in args], catch_exceptions=False)
    return go


@pytest.fixture
def col_file(tmp_path):
    g = gen(GenSpec("gnp", {"n": 8}, 4))
    p = tmp_path / "col.txt"
    gio.write(EdgeColouring(g, 2, [1 + i % 2 for i in range(g.m)]), p)
    return p


def test_measure(run, tmp_path):
    p = tmp_path / "k5.txt"
    gio.write(complete(5), p)
    res = run("measure", "--input", p)
    out = json.loads(res.output)
    assert res.exit_code == 0
    assert out["clique_number"] == 5 and out["degeneracy"] == 4 and out["max_avg_degree"] == "4"


def test_extract_mono_json_and_csv(run, col_file, tmp_path):
    res = run("extract", "mono", "--input", col_file, "--d", 1)
    assert res.exit_code == 0
    out = json.loads(res.output)
    assert out["kind"] in ("MonoClique", "MonoDense", "Exhausted")
    res = run("--format", "csv", "extract", "mono", "--input", col_file, "--d", 1)
    assert res.output.splitlines()[0].startswith("kind")
    dest = tmp_path / "o.json"
    run("extract", "mono", "--input", col_file, "--d", 1, "--out", dest)
    assert json.loads(dest.read_text())["kind"] == out["kind"]


def test_extract_oriented(run, tmp_path):
    p = tmp_path / "t.txt"
    gio.write(gen(GenSpec("tournament", {"n": 8}, 1)), p)
    res = run("extract", "oriented", "--input", p, "--d", 1, "--r", 3)
    assert res.exit_code == 0 and "kind" in json.loads(res.output)


def test_extract_wrong_input_type(run, tmp_path):
    p = tmp_path / "g.txt"
    gio.write(cycle(5), p)
    res = run("extract", "oriented", "--input", p, "--d", 1, "--r", 3)
    assert res.exit_code != 0


def test_oracle_ramsey(run):
    assert json.loads(run("oracle", "ramsey", "--a", 3, "--b", 3, "--n", 6).output)["answer"] is True
    res = run("--format", "csv", "oracle", "ramsey", "--a", 3, "--b", 3, "--n", 5)
    header, row = res.output.splitlines()[:2]
    assert header.startswith("query,answer") and ",False," in row


def test_oracle_bipartite_ramsey(run):
    out = json.loads(run("oracle", "bipartite-ramsey", "--s", 2, "--k", 2, "--t", 5).output)
    assert out["answer"] is True


def test_oracle_even_hole_free(run, tmp_path):
    p = tmp_path / "c6.txt"
    gio.write(cycle(6), p)
    assert json.loads(run("oracle", "even-hole-free", "--input", p).output)["answer"] is False


def test_oracle_orientation_without(run, tmp_path):
    g, f, o = tmp_path / "g.txt", tmp_path / "f.txt", tmp_path / "o.txt"
    gio.write(cycle(6), g)
    gio.write(antidirected_cycle(6), f)
    out = json.loads(run("oracle", "orientation-without", "--input", g, "--forbidden", f, "--out", o).output)
    assert out["answer"] is True and o.exists()
    gio.write(complete_bipartite(5, 5), g)
    gio.write(antidirected_cycle(4), f)
    # K_{5,5} has 25 edges, past the default orientation budget
    res = run("oracle", "orientation-without", "--input", g, "--forbidden", f)
    assert res.exit_code == 3 and "BudgetExceeded" in res.output


def test_oracle_mono_dense(run, col_file):
    out = json.loads(run("oracle", "mono-dense", "--input", col_file, "--d", 1).output)
    assert out["answer"] is True and out["exhaustive"]


def test_verify_odd_signing(run, tmp_path):
    from monoextract.suite import FIXTURES
    g = tmp_path / "cube.txt"
    gio.write(cube(), g)
    good = run("verify", "odd-signing", "--graph", g, "--signing", FIXTURES / "cube_signing.txt")
    assert good.exit_code == 0
    bad = tmp_path / "bad.txt"
    text = (FIXTURES / "cube_signing.txt").read_text().replace("0 1 1", "0 1 0")
    bad.write_text(text)
    assert run("verify", "odd-signing", "--graph", g, "--signing", bad).exit_code == 1
    searched = json.loads(run("verify", "odd-signing", "--graph", g).output)
    assert searched["answer"] is True


def test_verify_paper_suite_filter(run):
    res = run("verify", "paper-suite", "--filter", "constants")
    assert res.exit_code == 0


def test_generate_to_stdout(run):
    res = run("generate", "gnp", "n=6", "p=1/2", "--seed", 3)
    assert res.output.splitlines()[0].startswith("g 6")


def test_generate_bad_family(run):
    assert run("generate", "nope", "n=3").exit_code == 3


def test_experiment_run_and_list(run, tmp_path):
    names = run("experiment", "list").output
    assert "ramsey_sweep" in names
    res = run("experiment", "run", "ramsey_sweep", "--out", tmp_path / "rs")
    assert res.exit_code == 0
    rows = [json.loads(x) for x in (tmp_path / "rs.jsonl").read_text().splitlines()]
    assert [r["answer"] for r in rows] == [False, False, True]


def test_experiment_scan(run):
    res = run("experiment", "scan", "gnp", "n=7", "--d", 2, "--count", 3, "--samples", 4)
    out = json.loads(res.output)
    assert out["d"] == 2 and "label" in out


def test_help():
    res = CliRunner().invoke(main, ["--help"])
    assert res.exit_code == 0 and "extract" in res.output
