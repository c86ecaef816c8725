# CLI test suite: exit codes, stdout formats, and JSON/CSV documents written with --out.
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

from click.testing import CliRunner

from qgkernel.main import cli


# Helper: invoke the CLI and return the result
def run(runner: CliRunner, *args: str):
    return runner.invoke(cli, list(args))


# Helper: load the JSON document a command wrote
def read_json(path: Path) -> dict:
    return json.loads(path.read_text())


# Helper: paths of bare JSON floats anywhere in a document
def bare_floats(node, path: str = "") -> list[str]:
    if isinstance(node, float):
        return [path]
    if isinstance(node, dict):
        return [p for k, v in node.items() for p in bare_floats(v, f"{path}.{k}")]
    if isinstance(node, list):
        return [p for i, v in enumerate(node) for p in bare_floats(v, f"{path}[{i}]")]
    return []


# haar prints the exact value first, then the decimal
def test_haar_prints_exact_value(runner):
    r = run(runner, "haar", "--group", "o+:2", "--word", "1,1;1,1")
    assert r.exit_code == 0, r.output
    exact, decimal = r.output.split()
    assert exact == "1/2"
    assert float(decimal) == 0.5


def test_haar_torus_and_vanishing(runner):
    r = run(runner, "haar", "--group", "t", "--word", "1,1;1,1*")
    assert r.exit_code == 0 and r.output.split()[0] == "1"
    r = run(runner, "haar", "--group", "o+:3", "--word", "1,1;1,2;2,2")
    assert r.exit_code == 0 and r.output.split()[0] == "0"


def test_haar_free_product_and_sums(runner):
    r = run(runner, "haar", "--group", "free(o+:2,o+:2)", "--word", "1:1,1;1:1,1;2:1,1;2:1,1")
    assert r.exit_code == 0 and r.output.split()[0] == "1/4"
    r = run(runner, "haar", "--group", "o+:2", "--word", "2*1,1;1,1 + -1*1,2;1,2")
    assert r.exit_code == 0 and r.output.split()[0] == "1/2"


# Usage errors exit with status 2
def test_haar_bad_input(runner):
    assert run(runner, "haar", "--group", "o+:2", "--word", "1,1;").exit_code == 2
    assert run(runner, "haar", "--group", "q:3", "--word", "1,1").exit_code == 2
    assert run(runner, "haar", "--group", "o+:2", "--word", "1,1", "--method", "direct_average").exit_code == 2


def test_haar_out_writes_result(runner, tmp_path):
    out = tmp_path / "nested" / "haar.json"
    r = run(runner, "haar", "--group", "o+:3", "--word", "1,1;1,1;1,1;1,1", "--out", str(out))
    assert r.exit_code == 0, r.output
    doc = read_json(out)
    assert doc["schema"] == 1
    assert doc["value"]["num"] == 1 and doc["value"]["den"] == 6
    assert doc["group"] == "o+:3"
    assert not [p for p in out.parent.iterdir() if p.name.startswith(".")]


# Moments of O_2+ are the Catalan numbers
def test_moments_csv(runner, tmp_path):
    out = tmp_path / "moments.csv"
    r = run(runner, "moments", "--group", "o+:2", "--k-max", "8", "--out", str(out))
    assert r.exit_code == 0, r.output
    rows = list(csv.DictReader(io.StringIO(out.read_text())))
    assert [row["value"] for row in rows] == ["1", "0", "1", "0", "2", "0", "5", "0", "14"]
    assert [int(row["k"]) for row in rows] == list(range(9))
    assert float(rows[8]["decimal"]) == 14.0


def test_moments_to_stdout(runner):
    r = run(runner, "moments", "--group", "s+:4", "--k-max", "3")
    assert r.exit_code == 0, r.output
    lines = r.output.strip().splitlines()
    assert lines[0] == "k,value,decimal"
    assert lines[-1].startswith("3,5,")


def test_usplit_passes(runner, tmp_path):
    out = tmp_path / "usplit.json"
    r = run(runner, "usplit", "--n", "2", "--max-degree", "2", "--out", str(out))
    assert r.exit_code == 0, r.output
    doc = read_json(out)
    assert doc["passed"] is True
    assert doc["words_checked"] == 73
    assert doc["config"]["n"] == 2


# The Haar pair converges at once; the document records its configuration
def test_converge_haar_pair(runner, tmp_path):
    out = tmp_path / "converge.json"
    r = run(runner, "converge", "--group", "o+:4", "--pair", "haar", "--degree", "2", "--out", str(out))
    assert r.exit_code == 0, r.output
    assert "converged=True" in r.output
    doc = read_json(out)
    assert doc["converged"] is True
    assert doc["iterations"] == 1
    assert doc["config"]["pair"] == "haar" and doc["config"]["degree"] == 2


# An unmet tolerance exits with status 1
def test_converge_unmet(runner, tmp_path):
    out = tmp_path / "converge.json"
    r = run(runner, "converge", "--group", "o+:4", "--pair", "fixlast2", "--degree", "2",
            "--tol", "1e-30", "--max-iter", "3", "--out", str(out))
    assert r.exit_code == 1, r.output
    assert read_json(out)["converged"] is False


def test_converge_errors(runner):
    r = run(runner, "converge", "--group", "o+:4", "--pair", "haar", "--degree", "2", "--cap-entries", "10")
    assert r.exit_code == 3
    assert run(runner, "converge", "--group", "o+:3", "--pair", "perm+blocksplit", "--degree", "1").exit_code == 2
    assert run(runner, "converge", "--group", "u+:2", "--pair", "fixlast2", "--degree", "1").exit_code == 2
    assert run(runner, "converge", "--degree", "0").exit_code == 2


def test_defect_from_yaml(runner, tmp_path):
    spec = tmp_path / "net.yaml"
    spec.write_text("preset: s-full\nn: 3\n")
    out = tmp_path / "defect.json"
    r = run(runner, "defect", "--net", str(spec), "--out", str(out))
    assert r.exit_code == 0, r.output
    doc = read_json(out)
    assert doc["witnesses"] is True
    assert doc["config"]["preset"] == "s-full" and doc["config"]["trace"] == "preset"


def test_defect_words_file_and_haar_trace(runner, tmp_path):
    words = tmp_path / "words.txt"
    words.write_text("# S_4 words\n1,1\n1,2;2,1  # a product\n\n1,1 + 2,2\n")
    out = tmp_path / "defect.json"
    r = run(runner, "defect", "--net", "s-full", "--trace", "haar", "--words", str(words), "--out", str(out))
    assert r.exit_code == 0, r.output
    doc = read_json(out)
    assert len(doc["details"][0]["defects"]) == 3
    assert doc["config"]["words"] == str(words)


def test_defect_bad_net(runner, tmp_path):
    assert run(runner, "defect", "--net", "no-such-preset").exit_code == 2
    bad = tmp_path / "bad.yaml"
    bad.write_text("- just\n- a list\n")
    assert run(runner, "defect", "--net", str(bad)).exit_code == 2


# Real numbers in documents are decimal strings, never bare JSON floats
def test_documents_use_decimal_strings(runner, tmp_path):
    converge = tmp_path / "converge.json"
    r = run(runner, "converge", "--group", "o+:4", "--pair", "fixlast2", "--degree", "2",
            "--tol", "1e-30", "--max-iter", "3", "--out", str(converge))
    assert r.exit_code == 1, r.output
    doc = read_json(converge)
    assert bare_floats(doc) == []
    assert all(isinstance(x, str) for x in doc["residuals"])
    assert float(doc["residuals"][-1]) < float(doc["residuals"][0])
    assert isinstance(doc["tolerance"], str) and float(doc["tolerance"]) == 1e-30
    assert isinstance(doc["subleading_modulus"], str)

    defect = tmp_path / "defect.json"
    spec = tmp_path / "net.yaml"
    spec.write_text("preset: s-full\nn: 3\ntrace_error_threshold: 0.05\n")
    r = run(runner, "defect", "--net", str(spec), "--out", str(defect))
    assert r.exit_code == 0, r.output
    doc = read_json(defect)
    assert bare_floats(doc) == []
    assert all(isinstance(x, str) for x in doc["trace_errors"] + doc["max_defects"])
    assert all(isinstance(x, str) for x in doc["details"][-1]["defects"])
    assert isinstance(doc["elements"][0]["trace_error"], str)
