import json

import jsonschema
import pytest

from shapovalov.cli import SCHEMA_FOR, load_schema, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, (json.loads(out) if out else None), err


def validate(command, doc, schema=None):
    jsonschema.validate(doc, load_schema(schema or SCHEMA_FOR[command]))


def test_casimir_check_right_and_left(capsys):
    code, doc, _ = run_json(capsys, "casimir-check", "--family", "po", "--k", "2")
    assert code == 0 and doc["failures"] == [] and doc["two_rho"]["passed"]
    validate("casimir-check", doc)
    code, doc, _ = run_json(capsys, "casimir-check", "--family", "po", "--k", "2", "--duals", "left")
    assert code == 1 and doc["failures"]
    validate("casimir-check", doc)


def test_casimir_check_k16(capsys):
    code, doc, _ = run_json(capsys, "casimir-check", "--family", "k16", "--band", "5", "--height", "3")
    assert code == 0 and doc["passed"]
    validate("casimir-check", doc, "k16_casimir")


def test_shapdet_po2(capsys):
    code, doc, _ = run_json(capsys, "shapdet", "--family", "po", "--k", "1", "--deficit", "1")
    assert code == 0
    validate("shapdet", doc)
    (block,) = doc["blocks"]
    assert block["det"] == "a{}"
    assert len(block["factors"]) == 1 and block["residual"] == "1"


def test_shapdet_height_sweep(capsys):
    code, doc, _ = run_json(capsys, "shapdet", "--family", "po", "--k", "2", "--height", "4")
    assert code == 0 and [b["deficit"] for b in doc["blocks"]] == [[0, 1], [0, 2]]
    validate("shapdet", doc)


def test_gram_symbolic_and_numeric(capsys, tmp_path):
    code, doc, _ = run_json(capsys, "gram", "--family", "po", "--k", "2", "--deficit", "1,0")
    assert code == 0 and len(doc["blocks"][0]["basis"]) == 4
    validate("gram", doc)
    w = tmp_path / "w.json"
    w.write_text(json.dumps({"a{}": 1, "a{1}": 0, "a{2}": 2, "a{1,2}": "1/2"}))
    code, doc, _ = run_json(capsys, "gram", "--family", "po", "--k", "2", "--deficit", "0,1", "--weights", str(w))
    assert code == 0 and doc["blocks"][0]["det"] == "0"


def test_irreducible(capsys, tmp_path):
    w = tmp_path / "w.json"
    w.write_text("[0, 5]")
    code, doc, _ = run_json(capsys, "irreducible", "--family", "po", "--k", "1", "--weights", str(w))
    assert code == 0 and doc["irreducible"] is False and doc["witnesses"] == [{"x1": 1}]
    validate("irreducible", doc)


def test_reconcile(capsys):
    code, doc, _ = run_json(capsys, "reconcile", "--family", "po", "--k", "1", "--grid", "25")
    assert code == 0 and len(doc["points"]) == 25
    assert doc["agreement"]["abstract_gram"] == "1"
    validate("reconcile", doc)
    code, doc, _ = run_json(capsys, "reconcile", "--family", "po", "--k", "1", "--grid", "0")
    assert code == 0 and doc["points"] == [] and doc["agreement"]["abstract_gram"] is None


def test_bracket_roots_dump(capsys):
    code, doc, _ = run_json(capsys, "bracket", "--family", "po", "--k", "1", "x1", "y1")
    assert code == 0 and doc["bracket"] == "1"
    validate("bracket", doc)
    code, doc, _ = run_json(capsys, "roots", "--family", "po", "--k", "2")
    assert code == 0 and doc["triangularity_failures"] == []
    validate("roots", doc)
    code, doc, _ = run_json(capsys, "dump-algebra", "--family", "k16", "--band", "1")
    assert code == 0 and doc["incomplete"]
    validate("dump-algebra", doc)


def test_deterministic_output(capsys):
    args = ("shapdet", "--family", "po", "--k", "2", "--deficit", "1,1")
    first = run(capsys, *args)[1]
    second = run(capsys, *args)[1]
    assert first == second


def test_job_file_and_out(capsys, tmp_path):
    job = tmp_path / "job.json"
    out = tmp_path / "out.json"
    job.write_text(json.dumps({"command": "casimir-check", "family": "sh", "k": 2, "out": str(out)}))
    code, stdout, _ = run(capsys, "--job", str(job))
    assert code == 0 and stdout == ""
    assert json.loads(out.read_text())["failures"] == []


def test_text_format(capsys):
    code, out, _ = run(capsys, "roots", "--family", "po", "--k", "1", "--format", "text")
    assert code == 0 and "triangularity_failures: []" in out


@pytest.mark.parametrize("argv", [
    ["casimir-check", "--family", "po"],
    ["casimir-check", "--k", "2"],
    ["shapdet", "--family", "po", "--k", "0", "--deficit", "1"],
    ["shapdet", "--family", "po", "--k", "2", "--deficit", "1"],
    ["shapdet", "--family", "po", "--k", "2"],
    ["gram", "--family", "k16"],
    ["bracket", "--family", "po", "--k", "1", "x1"],
    ["irreducible", "--family", "po", "--k", "1"],
    ["reconcile", "--family", "sh", "--k", "2"],
    ["casimir-check", "--family", "k16", "--band", "3", "--height", "3"],
    ["frobnicate", "--family", "po", "--k", "1"],
    ["casimir-check", "--family", "gl", "--k", "1"],
    [],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err
