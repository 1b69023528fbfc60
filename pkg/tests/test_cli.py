import json
import subprocess
import sys

import pytest

from ktoric.cli import main
from ktoric.fixtures import fixture_path
from ktoric.gkm import GKMGraph
from ktoric.polytope import DelzantPolytope

COMMANDS = ["validate", "vertices", "nonfaces", "presentation", "gkm", "kernel", "rank", "verify", "flow"]


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("command", COMMANDS)
@pytest.mark.parametrize("fmt", ["json", "text"])
def test_every_command_runs(capsys, command, fmt):
    code, out, _ = run(capsys, command, fixture_path("square"), "--format", fmt, "--samples", 10)
    assert code == 0
    if fmt == "json":
        json.loads(out)


def test_validate_cp1(capsys):
    code, out, _ = run(capsys, "validate", fixture_path("cp1"))
    assert code == 0
    rep = json.loads(out)
    assert rep["valid"] and all(c["passed"] for c in rep["checks"])


def test_presentation_text_cp1(capsys):
    code, out, _ = run(capsys, "presentation", fixture_path("cp1"), "--format", "text")
    assert code == 0
    assert "I = {1 - x2^-1 - x1^-1 + x1^-1*x2^-1}" in out
    assert "J = {-1 + x1^-1*x2}" in out
    assert "(1 - 2*x^-1 + x^-2)" in out


def test_nonsmooth_exit_1(capsys):
    code, out, _ = run(capsys, "validate", fixture_path("nonsmooth"))
    assert code == 1
    rep = json.loads(out)
    assert not rep["valid"]
    code, _, _ = run(capsys, "rank", fixture_path("nonsmooth"))
    assert code == 1


def test_parse_error_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 2, "facets": [')
    code, _, err = run(capsys, "validate", bad)
    assert code == 2 and "error" in err
    code, _, _ = run(capsys, "validate", tmp_path / "missing.json")
    assert code == 2
    floats = tmp_path / "floats.json"
    floats.write_text(json.dumps({"dim": 1, "facets": [{"normal": [-1], "offset": 0}, {"normal": [1], "offset": 0.5}]}))
    code, _, _ = run(capsys, "validate", floats)
    assert code == 2


def test_bad_flow_xi_exit_2(capsys):
    code, _, err = run(capsys, "flow", fixture_path("cp1"), "--xi", "1")
    assert code == 2 and "xi" in err


def test_flow_with_explicit_xi(capsys):
    code, out, _ = run(capsys, "flow", fixture_path("square"), "--xi=-1,0", "--samples", 5)
    assert code == 0
    rep = json.loads(out)
    assert rep["passed"] and len(rep["reports"]) == 1


def test_rank_json(capsys):
    code, out, _ = run(capsys, "rank", fixture_path("cp3"))
    d = json.loads(out)
    assert code == 0 and d["ordinary_k0_rank"] == 4 and d["k1_rank"] == 0


def test_kernel_json(capsys):
    code, out, _ = run(capsys, "kernel", fixture_path("square"))
    d = json.loads(out)
    assert sorted(tuple(c["xi"]) for c in d["Z"]) == [(-1, -1), (-1, 0), (0, -1), (0, 0)]


def test_gkm_json_round_trip(capsys):
    code, out, _ = run(capsys, "gkm", fixture_path("hirzebruch_2"))
    d = json.loads(out)
    g = GKMGraph.from_dict(d["graph"])
    assert g.to_dict() == d["graph"]
    assert len(d["morse_basis"]) == 4


def test_polytope_json_round_trip():
    for name in ("cp2", "hirzebruch_1"):
        with open(fixture_path(name)) as fh:
            data = json.load(fh)
        assert DelzantPolytope.from_dict(data).to_dict() == data


def test_byte_identical_output():
    cmd = [sys.executable, "-m", "ktoric.cli", "verify", str(fixture_path("hirzebruch_1")), "--seed", "3"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a


def test_log_env(capsys, monkeypatch):
    monkeypatch.setenv("KTORIC_LOG", "debug")
    code, _, _ = run(capsys, "nonfaces", fixture_path("cp1"))
    assert code == 0


def test_failed_check_exit_3(capsys, monkeypatch):
    import ktoric.cli as cli
    from ktoric.gkm import VerificationReport

    def broken(P, samples, seed):
        return VerificationReport([("1", False)], [], 0, [])

    monkeypatch.setattr(cli, "verify_presentation", broken)
    code, out, _ = run(capsys, "verify", fixture_path("cp1"))
    assert code == 3 and json.loads(out)["passed"] is False
