import json

import pytest

from auglimb.cli import main
from auglimb.model import default_model, serialize_model


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_report_reproduces_device_figures(capsys):
    code, out, _ = run(capsys, "report")
    assert code == 0
    assert "maxReach.toolBase = 630.000 mm" in out
    assert "maxReach.tool = 710.000 mm" in out
    assert "extensionRatio = 3.571" in out
    assert "forearmMultiple = 2.520" in out
    assert "mass = 640 g" in out
    assert "dof = 7" in out


def test_report_json(capsys):
    code, out, _ = run(capsys, "report", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["maxReachMm"]["toolBase"] == pytest.approx(630.0, abs=1e-9)
    assert doc["maxReachMm"]["tool"] == pytest.approx(710.0, abs=1e-9)
    assert doc["extensionRatio"] == pytest.approx(250.0 / 70.0, rel=1e-12)
    assert doc["forearmMultiple"] == pytest.approx(2.52, rel=1e-12)
    assert doc["massGrams"] == pytest.approx(640.0, abs=0.5)
    assert doc["dofCount"] == 7


def test_missing_model_file_exit_2(capsys):
    code, _, err = run(capsys, "report", "--model", "missing.cfg")
    assert code == 2
    assert "missing.cfg" in err


def test_invalid_model_file_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("schemaVersion: 1\n")
    code, _, err = run(capsys, "report", "--model", str(bad))
    assert code == 2
    assert "missing required field" in err


def test_model_env_fallback(capsys, tmp_path, monkeypatch):
    cfg = tmp_path / "m.yaml"
    cfg.write_text(serialize_model(default_model()))
    monkeypatch.setenv("AUGLIMB_MODEL", str(cfg))
    code, out, _ = run(capsys, "report")
    assert code == 0
    assert "maxReach.tool = 710.000 mm" in out


def test_workspace_deterministic_outputs(capsys, tmp_path):
    args = [
        "workspace",
        "--samples",
        "5000",
        "--seed",
        "7",
        "--extremes",
        "--no-gripper",
    ]
    out1 = tmp_path / "a.csv"
    rep1 = tmp_path / "a.json"
    out2 = tmp_path / "b.csv"
    rep2 = tmp_path / "b.json"
    code1, _, _ = run(capsys, *args, "--output", str(out1), "--report", str(rep1))
    code2, _, _ = run(capsys, *args, "--output", str(out2), "--report", str(rep2))
    assert code1 == code2 == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert rep1.read_bytes() == rep2.read_bytes()
    report = json.loads(rep1.read_text())
    assert report["maxReach"] == 630.0
    assert report["forearmMultiple"] >= 2.5


def test_workspace_zero_samples_exit_2(capsys, tmp_path):
    code, _, err = run(
        capsys, "workspace", "--samples", "0", "--output", str(tmp_path / "x.csv")
    )
    assert code == 2
    assert "samples" in err


def test_workspace_write_failure_exit_3(capsys):
    code, _, err = run(
        capsys,
        "workspace",
        "--samples",
        "10",
        "--output",
        "/nonexistent-dir/cloud.csv",
    )
    assert code == 3
    assert "cloud.csv" in err


def test_workspace_ply_output(capsys, tmp_path):
    out = tmp_path / "c.ply"
    code, _, _ = run(
        capsys, "workspace", "--samples", "50", "--format", "ply", "--output", str(out)
    )
    assert code == 0
    assert out.read_bytes().startswith(b"ply\nformat ascii 1.0\nelement vertex 51\n")


def test_fk_straight_extended(capsys):
    code, out, _ = run(capsys, "fk", "--state", "straight", "--extension", "250")
    assert code == 0
    assert "710.000" in out
    assert "630.000" in out


def test_fk_raw_joints(capsys):
    code, out, _ = run(capsys, "fk", "--joints", "0,0,0,0,0,70,0,0")
    assert code == 0
    assert "450.000" in out


def test_ik_unreachable_exit_4(capsys):
    code, out, err = run(capsys, "ik", "--target-pos", "0,0,9999")
    assert code == 4
    assert "posResidual" in out
    assert "did not converge" in err


def test_ik_reachable_converges(capsys):
    code, out, _ = run(capsys, "ik", "--target-pos", "400,50,-100", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["converged"] is True
    assert doc["posResidualMm"] <= 1e-3


def test_payload_binding_joint_is_proximal_hinge(capsys):
    code, out, _ = run(capsys, "payload", "--pose", "horizontal-straight")
    assert code == 0
    assert "bindingJoint = shoulder-t" in out
    assert "limits: configured" in out
    assert "maxPayload" in out


def test_payload_json(capsys):
    code, out, _ = run(capsys, "payload", "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["bindingJoint"] == "shoulder-t"
    assert doc["maxPayloadGrams"] > 0
    assert any(r["unit"] == "N" for r in doc["rows"])


def test_unknown_pose_exit_2(capsys):
    code, _, err = run(capsys, "fk", "--state", "banana")
    assert code == 2
    assert "banana" in err
