import io
import json
import math

import numpy as np
import pytest

from gramlocus import cli
from gramlocus.experiments import FuzzReport
from gramlocus.jsonio import dumps, tensor_to_json
from gramlocus.sos import CertificateError
from gramlocus.tensor import example_counter, ortho_act, OrthoTuple, sample_unit


def run_cli(capsys, *argv):
    code = cli.run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_tensor(tmp_path, name, tensor):
    path = tmp_path / name
    path.write_text(dumps(tensor_to_json(tensor)) + "\n")
    return str(path)


def test_vertex_gram_pipeline(tmp_path, capsys, monkeypatch):
    code, out, _ = run_cli(capsys, "vertex", "--n", "3", "--k", "2")
    assert code == 0
    monkeypatch.setattr("sys.stdin", io.StringIO(out))
    code, out, _ = run_cli(capsys, "gram")
    assert code == 0
    doc = json.loads(out)
    assert doc["d"][0] == pytest.approx(0.25, abs=1e-14)
    assert doc["d"][1] == pytest.approx(0.25, abs=1e-14)
    assert abs(doc["d"][2]) <= 1e-14
    assert doc["t"] == pytest.approx(1.0, abs=1e-14)


def test_gram_file_input(tmp_path, capsys):
    path = write_tensor(tmp_path, "t.json", example_counter())
    code, out, _ = run_cli(capsys, "gram", "--input", path)
    assert code == 0
    doc = json.loads(out)
    assert doc["d"][2] == pytest.approx((math.sqrt(2.0) - 1.0) / 2.0, abs=1e-12)


def test_svals(tmp_path, capsys):
    path = write_tensor(tmp_path, "t.json", example_counter())
    code, out, _ = run_cli(capsys, "svals", "--input", path)
    assert code == 0
    doc = json.loads(out)
    assert len(doc) == 3
    big = (1.0 + math.sqrt(2.0)) / (2.0 * math.sqrt(2.0))
    assert doc[0]["sigma_max"] ** 2 == pytest.approx(big, abs=1e-12)
    assert doc[0]["sigma_max"] > doc[0]["sigma_min"]


def test_member_outside(capsys):
    code, out, _ = run_cli(capsys, "member", "--d", "0.25,0,0")
    assert code == 0
    doc = json.loads(out)
    assert doc["status"] == "Outside"
    assert doc["region"] == "Hull-violation"
    assert doc["q1"] < 0.0
    assert doc["q2"] >= 0.0


def test_member_modes(capsys):
    code, out, _ = run_cli(capsys, "member", "--d", "0.25,0.25,0.25,0.25")
    assert code == 0
    assert json.loads(out)["status"] == "Inside"
    code, out, _ = run_cli(capsys, "member", "--d", "0.1,0.1,0.1", "--mode", "hull")
    assert code == 0
    assert json.loads(out)["status"] == "Inside"
    code, out, _ = run_cli(capsys, "member", "--d", "0.2,-0.1,0.2")
    assert code == 0
    doc = json.loads(out)
    assert doc["status"] == "Outside"
    assert doc["q2"] is None


def test_member_bad_point(capsys):
    code, _, err = run_cli(capsys, "member", "--d", "0.1,zebra,0.1")
    assert code == 1
    assert "error" in err


def test_unknown_subcommand(capsys):
    code, _, err = run_cli(capsys, "frobnicate")
    assert code == 1
    assert "usage error" in err


def test_missing_required_flag(capsys):
    code, _, err = run_cli(capsys, "member")
    assert code == 1


def test_help_exits_zero(capsys):
    code, out, _ = run_cli(capsys, "--help")
    assert code == 0
    assert "subcommand" in out or "usage" in out


def test_sos_verify(capsys):
    code, out, _ = run_cli(capsys, "sos", "--n", "3", "--pivot", "1", "--verify")
    assert code == 0
    doc = json.loads(out)
    assert doc["n"] == 3
    assert len(doc["terms"]) == 3


def test_sos_bad_order(capsys):
    code, _, err = run_cli(capsys, "sos", "--n", "99", "--pivot", "1")
    assert code == 1


def test_sos_verify_failure_exit_code(capsys, monkeypatch):
    def boom(n, pivot, verify=False):
        raise CertificateError("forced mismatch")

    monkeypatch.setattr("gramlocus.cli.sos.build_certificate", boom)
    code, _, err = run_cli(capsys, "sos", "--n", "3", "--pivot", "1", "--verify")
    assert code == 2
    assert "verification failed" in err


def test_hyperdet(tmp_path, capsys):
    t = sample_unit(3, seed=12)
    path = write_tensor(tmp_path, "t.json", t)
    code, out, _ = run_cli(capsys, "hyperdet", "--input", path)
    assert code == 0
    doc = json.loads(out)
    assert doc["hyperdet"] == doc["invariant_vector"]["hyperdet"]
    assert doc["invariant_vector"]["t"] == pytest.approx(1.0, abs=1e-12)


def test_equiv_found(tmp_path, capsys):
    src = sample_unit(3, seed=31)
    rng = np.random.default_rng(5)
    tgt = ortho_act(src, OrthoTuple.random(3, rng))
    pa = write_tensor(tmp_path, "a.json", tgt)
    pb = write_tensor(tmp_path, "b.json", src)
    code, out, _ = run_cli(capsys, "equiv", "--a", pa, "--b", pb)
    assert code == 0
    doc = json.loads(out)
    assert doc["found"] is True
    assert doc["residual"] < 1e-6
    assert len(doc["transform"]) == 3


def test_equiv_not_found(tmp_path, capsys):
    pa = write_tensor(tmp_path, "a.json", sample_unit(3, seed=41))
    pb = write_tensor(tmp_path, "b.json", sample_unit(3, seed=42))
    code, out, _ = run_cli(capsys, "equiv", "--a", pa, "--b", pb)
    assert code == 0
    assert json.loads(out)["found"] is False


def test_fuzz_ok(capsys):
    code, out, _ = run_cli(capsys, "fuzz", "--n", "4", "--mode", "conjecture",
                           "--samples", "1000", "--seed", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["violations"] == 0
    assert doc["samples"] == 1000


def test_fuzz_violation_exit_code(capsys, monkeypatch):
    fake = FuzzReport(n=4, mode="conjecture", samples=10, seed=1,
                      violations=3, near_boundary=0, worst_margin=-0.5,
                      elapsed=0.0)
    monkeypatch.setattr("gramlocus.cli.experiments.fuzz",
                        lambda *a, **k: fake)
    code, out, _ = run_cli(capsys, "fuzz", "--n", "4", "--mode", "conjecture",
                           "--samples", "10", "--seed", "1")
    assert code == 2
    assert json.loads(out)["violations"] == 3


def test_surface_csv_and_plot(tmp_path, capsys):
    out_csv = tmp_path / "pts.csv"
    out_png = tmp_path / "pts.png"
    code, _, _ = run_cli(capsys, "surface", "--res", "6",
                         "--out", str(out_csv), "--plot", str(out_png))
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0] == "d1,d2,d3"
    assert len(lines) > 10
    assert out_png.stat().st_size > 1000


def test_surface_sigma_to_stdout(capsys):
    code, out, _ = run_cli(capsys, "surface", "--res", "4", "--coords", "sigma")
    assert code == 0
    assert out.splitlines()[0] == "s1,s2,s3"


def test_examples_subcommand(capsys):
    code, out, _ = run_cli(capsys, "examples")
    assert code == 0
    doc = json.loads(out)
    assert doc["all_passed"] is True


def test_examples_failure_exit_code(capsys, monkeypatch):
    monkeypatch.setattr("gramlocus.cli.experiments.boundary_examples_report",
                        lambda: {"all_passed": False, "checks": []})
    code, _, _ = run_cli(capsys, "examples")
    assert code == 2


def test_missing_input_file(capsys):
    code, _, err = run_cli(capsys, "gram", "--input", "/nonexistent/t.json")
    assert code == 1
    assert "error" in err
