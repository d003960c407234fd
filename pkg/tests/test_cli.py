import json
import os
import subprocess
import sys

import pytest

from cmtilt.cli import EXIT_ERROR, EXIT_INCONCLUSIVE, EXIT_OK, corpus_dir, main

DUAL = {
    "quiver": {"vertices": [1], "arrows": [{"name": "x", "from": 1, "to": 1, "degree": 1}]},
    "relations": [[{"coef": "1", "path": ["x", "x"]}]],
}


def _write(tmp_path, doc, name="in.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return str(p)


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_dual_numbers_json(tmp_path, capsys):
    code, out, _ = _run(["algebra", "analyze", _write(tmp_path, DUAL), "--field", "F2", "--emit", "json"],
                        capsys)
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["field"] == "F2"


def test_reports_are_byte_identical(tmp_path, capsys):
    path = str(corpus_dir() / "counter_silting.json")
    first = _run(["algebra", "analyze", path, "--field", "F2", "--seed", "3"], capsys)
    second = _run(["algebra", "analyze", path, "--field", "F2", "--seed", "3"], capsys)
    assert first == second and first[0] == EXIT_OK


def test_text_and_json_agree(tmp_path, capsys):
    path = _write(tmp_path, DUAL)
    _, js, _ = _run(["algebra", "analyze", path, "--field", "F2", "--emit", "json"], capsys)
    _, txt, _ = _run(["algebra", "analyze", path, "--field", "F2", "--emit", "text"], capsys)
    assert json.loads(js)["field"] == "F2" and "F2" in txt


@pytest.mark.parametrize("doc,message", [
    ("{not json", "json"),
    ({"quiver": {"vertices": [1], "arrows": []}, "relations": [[{"coef": "1", "path": ["y"]}]]},
     "unknown arrow 'y'"),
    ({"quiver": {"vertices": [1], "arrows": [{"name": "x", "from": 1, "to": 2}]}}, "x"),
    ({"quiver": {"vertices": [1], "arrows": [{"name": "x", "from": 1, "to": 1, "degree": 1}]},
      "relations": [[{"coef": "1/0", "path": ["x", "x"]}]]}, "coef"),
    ({"quiver": {"vertices": [1], "arrows": [{"name": "x", "from": 1, "to": 1, "degree": 1}]}},
     "finite"),
])
def test_malformed_input_exits_one(tmp_path, capsys, doc, message):
    code, _, err = _run(["algebra", "analyze", _write(tmp_path, doc), "--field", "F2"], capsys)
    assert code == EXIT_ERROR
    assert message.lower() in err.lower()


def test_missing_file(capsys):
    code, _, err = _run(["algebra", "analyze", "/nonexistent.json"], capsys)
    assert code == EXIT_ERROR and err.startswith("error:")


def test_non_reduced_word(tmp_path, capsys):
    doc = {"quiver": {"vertices": [1, 2], "arrows": [{"name": "a", "from": 1, "to": 2}]},
           "coxeter_word": [1, 1]}
    code, _, err = _run(["ppalg", _write(tmp_path, doc), "--field", "F2"], capsys)
    assert code == EXIT_ERROR and "not reduced" in err


def test_ppalg_a2(capsys):
    path = str(corpus_dir() / "pp_a2_21.json")
    code, out, _ = _run(["ppalg", path, "--field", "F2", "--emit", "json"], capsys)
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["status"] == "tilting"
    assert report["certificate"]["dim"] == 3


def test_low_cap_is_inconclusive(capsys):
    path = str(corpus_dir() / "counter_silting.json")
    code, _, _ = _run(["algebra", "analyze", path, "--field", "F2", "--cap", "1"], capsys)
    assert code == EXIT_INCONCLUSIVE


def test_field_from_environment(tmp_path):
    env = dict(os.environ, CMTILT_FIELD="F3")
    proc = subprocess.run([sys.executable, "-m", "cmtilt.cli", "algebra", "analyze", _write(tmp_path, DUAL),
                           "--emit", "json"], env=env, capture_output=True, text=True)
    assert proc.returncode == EXIT_OK
    assert json.loads(proc.stdout)["field"] == "F3"


def test_field_flag_beats_document(tmp_path, capsys):
    doc = dict(DUAL, field="Q")
    _, out, _ = _run(["algebra", "analyze", _write(tmp_path, doc), "--field", "F5", "--emit", "json"], capsys)
    assert json.loads(out)["field"] == "F5"


def test_corpus_f2(capsys):
    code, out, _ = _run(["corpus", "--field", "F2"], capsys)
    assert code == EXIT_OK
    assert out.strip().splitlines()[-1] == "12/12 passed"


def test_corpus_low_cap_is_inconclusive(capsys):
    code, out, _ = _run(["corpus", "--field", "F2", "--cap", "1"], capsys)
    assert code == EXIT_INCONCLUSIVE
    assert "inconclusive" in out and "fail " not in out


@pytest.mark.slow
def test_corpus_rationals(capsys):
    code, out, _ = _run(["corpus", "--field", "Q"], capsys)
    assert code == EXIT_OK
    assert out.strip().splitlines()[-1] == "12/12 passed"


def test_coefficient_not_invertible_in_field(tmp_path, capsys):
    doc = dict(DUAL, relations=[[{"coef": "1/2", "path": ["x", "x"]}]])
    code, _, err = _run(["algebra", "analyze", _write(tmp_path, doc), "--field", "F2"], capsys)
    assert code == EXIT_ERROR and "vanishes in F2" in err
