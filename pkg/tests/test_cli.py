import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from retractlab.cli import run_command

SCHEMA_FOR = {
    "verify-retraction": "retraction",
    "classify": "verdict",
    "enum-monomial": "enumeration",
    "expmap": "expmap",
    "grading": "grading",
    "kernel-check": "kernel",
}


def schema(name):
    text = resources.files("retractlab").joinpath("schemas").joinpath(f"{name}.schema.json").read_text()
    return json.loads(text)


def run(capsys, *argv):
    code = run_command(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    data = json.loads(out)
    jsonschema.validate(data, schema(SCHEMA_FOR[argv[0]]))
    return code, data


CASES = [
    # argv, exit code, text fragment
    (["verify-retraction", "--field", "Q", "--vars", "x,y", "--images", "x*y^2; 1"], 0, "retraction: yes"),
    (["verify-retraction", "--images", "x + y; y; z"], 1, "retraction: no"),
    (["verify-retraction", "--images", "x +; y; z"], 2, None),
    (["verify-retraction", "--vars", "x,y,z", "--images", "x; y"], 2, None),
    (["classify", "--images", "x; x^2; x^2 - y + z"], 0, "status: PolynomialRing"),
    (["classify", "--images", "x + y; y; z"], 1, "status: NotARetraction"),
    (["classify", "--images", "x/3 + y/3 + z/3; x/3 + y/3 + z/3; x/3 + y/3 + z/3"], 0, "status: Inconclusive"),
    (["classify", "--images", "x; y; z", "--bound", "0"], 2, None),
    (["enum-monomial", "--n", "2", "--max-exp", "3", "--match-corpus", "builtin"], 0, "7/7 families matched, 0 unmatched tuples"),
    (["enum-monomial", "--n", "4", "--max-exp", "1"], 2, None),
    (["expmap", "verify", "--field", "F5", "--vars", "x", "--images", "x + U + U^5"], 0, "pass"),
    (["expmap", "verify", "--vars", "x", "--images", "x + U^2"], 1, "2*U*V"),
    (["expmap", "constants", "--images", "x; y + x*U; z + 2*y*U + x*U^2", "--bound", "2"], 0, "dimension 4"),
    (["expmap", "slice", "--images", "x; y + x*U; z + 2*y*U + x*U^2", "--bound", "2"], 0, "localization certified: yes"),
    (["expmap", "ml", "--vars", "x,y", "--images", "x + U; y", "--images", "x; y + U", "--bound", "4"], 0, "dimension 1"),
    (["expmap", "degree", "--vars", "x,y", "--images", "x; y + x*U", "--element", "y^2"], 0, "deg_sigma = 2, lc_sigma = x^2"),
    (["expmap", "degree", "--vars", "x,y", "--images", "x; y + x*U"], 2, None),
    (["expmap", "verify", "--vars", "x", "--images", "x + W"], 2, None),
    (["grading", "--weights", "1,1", "--vars", "x,y", "--gens", "x; y^2"], 0, "effective (A_0 != A): yes"),
    (["grading", "--weights", "1,-1", "--vars", "x,y", "--gens", "x*y"], 1, "no"),
    (["grading", "--weights", "1,2", "--vars", "x,y", "--gens", "x + y"], 1, "not homogeneous"),
    (["grading", "--weights", "1,a", "--gens", "x"], 2, None),
    (["kernel-check", "--images", "x; y; 0", "--h", "z", "--bound", "6"], 0, "yes"),
    (["kernel-check", "--images", "x; y; 0", "--h", "z^2", "--bound", "4"], 1, "no"),
    (["kernel-check", "--images", "x + y; y; z", "--h", "z"], 2, None),
    (["frobnicate"], 2, None),
]


@pytest.mark.parametrize("argv,code,fragment", CASES, ids=[" ".join(c[0][:2]) + f"->{c[1]}" for c in CASES])
def test_exit_codes(capsys, argv, code, fragment):
    got, out, err = run(capsys, *argv)
    assert got == code, (out, err)
    if fragment:
        assert fragment in out
    if code == 2:
        assert err.startswith("error") or "usage" in err


@pytest.mark.parametrize("argv,code,fragment", [c for c in CASES if c[1] != 2 and c[0][0] in SCHEMA_FOR])
def test_json_validates(capsys, argv, code, fragment):
    got, data = run_json(capsys, *argv)
    assert got == code


def test_bounded_reports_print_bound(capsys):
    for argv in (
        ["classify", "--images", "x; x^2; 0", "--bound", "5"],
        ["kernel-check", "--images", "x; y; 0", "--h", "z", "--bound", "5"],
        ["expmap", "constants", "--vars", "x,y", "--images", "x; y + x*U", "--bound", "5"],
    ):
        _, out, _ = run(capsys, *argv)
        assert "bound: 5" in out


def test_plain_and_json_agree(capsys):
    argv = ["classify", "--images", "x; x^2; x^2 - y + z"]
    _, out, _ = run(capsys, *argv)
    _, data = run_json(capsys, *argv)
    assert f"status: {data['status']}" in out and f"dimension: {data['dim']}" in out

    argv = ["enum-monomial", "--n", "2", "--max-exp", "2", "--match-corpus", "builtin"]
    _, out, _ = run(capsys, *argv)
    _, data = run_json(capsys, *argv)
    assert out.startswith(f"{data['count']} monomial retractions")
    assert f"{data['match']['families_hit']}/{data['match']['families']} families matched" in out

    argv = ["expmap", "slice", "--vars", "x,y", "--images", "x; y + x*U", "--bound", "3"]
    _, out, _ = run(capsys, *argv)
    _, data = run_json(capsys, *argv)
    assert f"s = {data['slice']}, deg_sigma = {data['degree']}" in out


def test_json_fields(capsys):
    _, data = run_json(capsys, "expmap", "verify", "--vars", "x", "--images", "x + U^2")
    assert data["defects_ii"] == [{"index": 1, "residual": "2*U*V"}]
    _, data = run_json(capsys, "classify", "--images", "x + y; y; z")
    assert data["defects"] == [{"index": 1, "residual": "y"}]


def test_degree_cap_exit(capsys, monkeypatch):
    monkeypatch.setenv("RETRACTLAB_MAX_DEGREE", "10")
    code, _, err = run(capsys, "verify-retraction", "--vars", "x", "--images", "x^11")
    assert code == 3 and "cap" in err


def test_custom_corpus_file(capsys, tmp_path):
    path = tmp_path / "mini.txt"
    path.write_text("A | 2 | x; 0 | x\n")
    code, out, _ = run(capsys, "enum-monomial", "--n", "2", "--max-exp", "1", "--match-corpus", str(path))
    assert code == 1 and "unmatched" in out
    path.write_text("broken line\n")
    code, _, err = run(capsys, "enum-monomial", "--n", "2", "--max-exp", "1", "--match-corpus", str(path))
    assert code == 2 and "mini.txt:1" in err


def test_export_corpus(capsys):
    code, out, _ = run(capsys, "export-corpus", "monomial-n3")
    assert code == 0 and len(json.loads(out)) == 37


def test_thread_count_does_not_change_output(capsys):
    base = ["enum-monomial", "--n", "3", "--max-exp", "1", "--list"]
    _, a, _ = run(capsys, *base)
    _, b, _ = run(capsys, *base, "--threads", "3")
    assert a == b


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "retractlab", "verify-retraction", "--vars", "x,y", "--images", "x; x^3"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0 and "retraction: yes" in proc.stdout
