import json
import subprocess
import sys

from spinacc.cli import EXIT_INPUT, EXIT_OK, EXIT_UNACCEPTABLE, main

ROOT = __import__("pathlib").Path(__file__).resolve().parents[1]


def test_classify_example1(capsys):
    assert main(["classify", str(ROOT / "instances" / "example1.json"), "--verify-certificates"]) == EXIT_UNACCEPTABLE
    out = capsys.readouterr().out
    assert "certificates verified" in out


def test_classify_trivial_json(capsys):
    assert main(["classify", str(ROOT / "instances" / "trivial.json"), "--json"]) == EXIT_OK
    rep = json.loads(capsys.readouterr().out)
    assert rep["verdict"] == "acceptable"


def test_classify_construct_and_bound(capsys):
    assert main(["classify", "--construct", "h123:3"]) == EXIT_UNACCEPTABLE
    assert main(["classify", "--construct", "ical:S4", "--max-order", "100"]) == EXIT_INPUT
    assert main(["classify", "--construct", "nosuch"]) == EXIT_INPUT


def test_construct_json(capsys):
    assert main(["construct", "both_types", "--json"]) == EXIT_OK
    obj = json.loads(capsys.readouterr().out)
    assert obj["n"] == 7


def test_gspin_file(tmp_path, capsys):
    obj = json.loads((ROOT / "instances" / "example1.json").read_text())
    obj["generators"][0]["zeta_pow"] = 2
    f = tmp_path / "tw.json"
    f.write_text(json.dumps(obj))
    assert main(["classify", str(f), "--json", "--verify-certificates"]) == EXIT_UNACCEPTABLE
    rep = json.loads(capsys.readouterr().out)
    assert rep["gspin"]["verdict_direct"] == rep["gspin"]["verdict_rS"]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "spinacc", "verify-paper", "--only", "example1"],
                       capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert "PASS" in r.stdout
