import io
import json
import subprocess
import sys

import pytest

from abelian_duality.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), stdout=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--json", "--no-meta")
    return code, json.loads(text)


def test_surface_list():
    code, d = run_json("surface", "list")
    assert code == 0
    assert {"circle", "torus2", "torus3", "rp3", "lens(3)"} <= set(d["result"]["surfaces"])


def test_surface_show_and_unknown():
    code, d = run_json("surface", "show", "rp3")
    assert code == 0
    code, _ = run("surface", "show", "klein-bottle")
    assert code == 2


def test_unknown_flag_is_usage_error():
    code, _ = run("surface", "list", "--frobnicate")
    assert code == 2
    code, _ = run("cylinder", "verify", "--modes", "0")
    assert code == 2


def test_split_check_torus2():
    code, d = run_json("split", "check", "--surface", "torus2", "--m", "3", "--k", "1", "--lift-seed", "7")
    assert code == 0
    assert d["status"] == "pass"
    res = {c["name"]: c for c in d["checks"]}
    assert res["chi residual"]["value"] == 0
    assert res["delta residual"]["value"] == 0
    assert all(c["status"] == "pass" for c in d["checks"])


def test_cylinder_ccr():
    code, d = run_json("cylinder", "verify", "--suite", "ccr", "--seed", "1")
    assert code == 0
    for c in d["checks"]:
        assert c["status"] == "pass"
        assert c["value"] <= 1e-8


def test_failing_check_exits_1():
    # a vanishing tolerance cannot be met by float round-off
    code, d = run_json("cylinder", "verify", "--suite", "ccr", "--seed", "1", "--tol-scale", "0")
    assert code == 1
    assert d["status"] == "fail"


def test_reproducible_json():
    argv = ("weyl", "gram", "--state", "free", "--surface", "circle", "--families", "3", "--seed", "5")
    a = run(*argv, "--json", "--no-meta")
    b = run(*argv, "--json", "--no-meta")
    assert a == b
    assert a[0] == 0


def test_meta_present_without_flag():
    code, text = run("surface", "list", "--json")
    assert "meta" in json.loads(text)


def test_csv_and_out(tmp_path):
    target = tmp_path / "report.csv"
    code, text = run("cylinder", "verify", "--suite", "gauge", "--format", "csv", "--out", str(target),
                     "--samples", "5")
    assert code == 0
    lines = target.read_text().splitlines()
    assert lines[0].startswith("name")
    assert len(lines) >= 2


def test_two_point_from_files(tmp_path):
    form = {"component": "dtheta", "modes": [
        {"n": 1, "coeff_re": 0.5, "coeff_im": 0.0, "profile": {"kind": "gaussian", "center": 0.0, "width": 0.3}},
        {"n": -1, "coeff_re": 0.5, "coeff_im": 0.0, "profile": {"kind": "gaussian", "center": 0.0, "width": 0.3}}]}
    f = tmp_path / "f.json"
    f.write_text(json.dumps(form))
    code, d = run_json("cylinder", "two-point", "--form-a", str(f), "--form-b", str(f), "--oracle")
    assert code == 0
    assert all(c["status"] == "pass" for c in d["checks"])
    code, _ = run("cylinder", "two-point", "--form-a", str(tmp_path / "missing.json"), "--form-b", str(f))
    assert code == 2


@pytest.mark.parametrize("argv", [
    ("sectors", "build", "--surface", "lens(3)", "--m", "4", "--k", "1"),
    ("weyl", "factorize", "--surface", "torus2", "--m", "3", "--k", "1"),
    ("weyl", "gram", "--state", "tor", "--surface", "rp3", "--m", "4", "--k", "2", "--families", "3"),
    ("cylinder", "verify", "--suite", "all", "--samples", "5"),
    ("gns", "demo", "--surface", "circle", "--m", "2", "--k", "1"),
])
def test_subcommands_pass(argv):
    code, d = run_json(*argv)
    assert code == 0, d


def test_gns_script(tmp_path):
    script = tmp_path / "ops.json"
    script.write_text(json.dumps([{"op": "shift", "z": [1]}, {"op": "duality"}]))
    code, d = run_json("gns", "demo", "--surface", "circle", "--m", "2", "--k", "1", "--script", str(script))
    assert code == 0
    assert d["result"]["amplitudes"] == [{"z": [0], "zt": [1], "re": 1.0, "im": 0.0}]


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "abelian_duality", "surface", "list"], capture_output=True, text=True)
    assert p.returncode == 0
    assert "torus2" in p.stdout
