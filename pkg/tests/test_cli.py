"""End-to-end CLI behaviour: subcommands, output formats and exit codes."""

import json
import subprocess
import sys

import pytest


def run_cli(*args, **kwargs):
    cmd = [sys.executable, "-m", "nilspacekit.cli", *args]
    return subprocess.run(cmd, capture_output=True, text=True, **kwargs)


def write_json(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_usage_error_exits_2():
    assert run_cli().returncode == 2
    assert run_cli("no-such-command").returncode == 2


def test_unreadable_input_exits_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run_cli("gowers", str(bad)).returncode == 2
    assert run_cli("gowers", str(tmp_path / "missing.json")).returncode == 2


def test_gowers_subcommand(tmp_path):
    signal = {"group": [8],
              "values": [[1, 0]] * 8}
    path = write_json(tmp_path, "signal.json", signal)
    proc = run_cli("gowers", path, "-d", "2", "--json")
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert abs(report["norm"] - 1.0) < 1e-9
    assert report["status"] == "pass"


def test_gowers_budget_exit_3(tmp_path):
    signal = {"group": [8], "values": [[1, 0]] * 8}
    path = write_json(tmp_path, "signal.json", signal)
    proc = run_cli("gowers", path, "-d", "3", "--budget", "10")
    assert proc.returncode == 3
    assert json.loads(proc.stdout)["status"] == "budget-exceeded"


def test_nilpair_pass_and_fail(tmp_path):
    good = {"group": {"unitriangular": {"size": 3, "modulus": 2}},
            "left": [[1, 0, 0]], "right": [[0, 0, 1]]}
    bad = {"group": {"unitriangular": {"size": 3, "modulus": 2}},
           "left": [[0, 0, 1]], "right": [[0, 0, 1]]}
    assert run_cli("nilpair", write_json(tmp_path, "good.json", good),
                   "--json").returncode == 0
    proc = run_cli("nilpair", write_json(tmp_path, "bad.json", bad), "--json")
    assert proc.returncode == 1
    report = json.loads(proc.stdout)
    assert report["status"] == "fail"
    assert report["condition_i"]["witness"] is not None


def test_verify_nilspace_signature(tmp_path):
    path = write_json(tmp_path, "sig.json", {"signature": {"moduli": [[2], [2]]}})
    proc = run_cli("verify-nilspace", path, "--json")
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert all(part["pass"] for part in report["axioms"].values())


def test_stabilizer_subcommand(tmp_path):
    path = write_json(tmp_path, "sig.json", {"signature": {"moduli": [[2], [2]]}})
    proc = run_cli("stabilizer", path, "--json")
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["sizes"]["cosets"] == 4


def test_quotient_subcommand(tmp_path):
    candidate = {
        "base": {"moduli": [[2], [2]]},
        "generators": [{
            "height": 2,
            "components": [{
                "source": {"moduli": []},
                "target": {"slots": [{"kind": "residues", "modulus": 2}],
                           "degree": 0},
                "table": [[1]],
            }],
        }],
    }
    path = write_json(tmp_path, "cand.json", {"candidate": candidate})
    proc = run_cli("quotient", path, "--json")
    assert proc.returncode == 0
    report = json.loads(proc.stdout)
    assert report["structure_groups"] == [[2], []]


@pytest.mark.slow
def test_examples_regeneration_is_deterministic():
    first = run_cli("examples", "--json")
    assert first.returncode == 0, first.stdout + first.stderr
    second = run_cli("examples", "--json")
    assert second.returncode == 0
    a, b = json.loads(first.stdout), json.loads(second.stdout)
    a.pop("timing"), b.pop("timing")
    assert a == b
    assert a["diffs"] == []
