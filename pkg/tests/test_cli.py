import json

import pytest

from leraylab.cli import main
from leraylab.ledger import Ledger


def run_json(capsys, argv):
    code = main(argv)
    return code, json.loads(capsys.readouterr().out)


def test_weights_check_emits_records(capsys):
    code, out = run_json(capsys, ["weights", "check", "--family", "radial", "--gamma", "1", "--dim", "2"])
    assert code == 0 and out["adapted"] is True
    assert {r["axiom"] for r in out["records"]} >= {"H1", "H2", "H3", "H4"}
    assert all({"axiom", "pass", "constant", "evidence_scale"} <= set(r) for r in out["records"])


def test_weights_check_flags_cylindrical_endpoint(capsys):
    _, out = run_json(capsys, ["weights", "check", "--family", "cylindrical", "--gamma", "2"])
    assert out["adapted"] is False
    assert [r["axiom"] for r in out["records"] if not r["pass"]] == ["H3"]


def test_weights_aq(capsys):
    _, out = run_json(capsys, ["weights", "aq", "--gamma", "3", "--dim", "2", "--q", "2", "--scales", "10"])
    assert out["pass"] is False and out["constant"] == "diverges"
    _, out = run_json(capsys, ["weights", "aq", "--gamma", "1", "--dim", "2", "--q", "2", "--scales", "10"])
    assert out["pass"] is True and isinstance(out["constant"], float)


@pytest.mark.parametrize("gamma,delta,psi_form,ok", [
    (1.5, 1.0, "one_plus_sq_half", True),
    (1.0, 1.5, "one_plus_sq_half", False),
])
def test_weights_pair(capsys, gamma, delta, psi_form, ok):
    _, out = run_json(capsys, ["weights", "pair", "--gamma", str(gamma), "--delta", str(delta),
                               "--psi-form", psi_form])
    assert out["pass"] is ok


def test_gronwall_verify_exit_codes(capsys):
    code, out = run_json(capsys, ["gronwall", "verify", "--A", "1", "--B", "1", "--b", "2"])
    assert code == 0 and out["pass"] is True
    code, out = run_json(capsys, ["gronwall", "verify", "--A", "1", "--B", "10", "--b", "1"])
    assert code == 1 and out["pass"] is False


def test_simulate_reports_config_errors(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("n=32\ndt=frog\n")
    assert main(["--output", str(tmp_path), "simulate", "2d", "--config", str(cfg)]) == 2
    assert "line 2: key 'dt' expects float, got 'frog'" in capsys.readouterr().err


def test_simulate_and_fit(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("n=32\ndt=1e-3\nt_end=0.02\n")
    assert main(["--output", str(tmp_path / "out"), "simulate", "2d", "--config", str(cfg)]) == 0
    run_dir = tmp_path / "out" / capsys.readouterr().out.strip().split("/")[-1]
    manifest = json.loads((run_dir / "manifest.json").read_text())
    assert "ledger.csv" in manifest["files"] and manifest["pass"] is True
    assert len(Ledger.read_csv(run_dir / "ledger.csv")) > 0
    code, out = run_json(capsys, ["gronwall", "fit", "--ledger", str(run_dir / "ledger.csv"), "--b", "2"])
    assert code == 0 and out["B_fit"] == 0.0  # Taylor-Green only decays


def test_unknown_preset_exits_2(tmp_path, capsys):
    assert main(["--output", str(tmp_path), "preset", "nope"]) == 2
    assert "unknown preset" in capsys.readouterr().err
