import json

from starbath import checks
from starbath.cli import main


def test_simulate_roundtrip(tmp_path, capsys):
    rc = main(["simulate", "--n", "8", "--grid", "0:1:3", "--out", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "simulate.csv").exists()
    assert "simulate.csv" in capsys.readouterr().out


def test_config_file_with_cli_override(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"n_modes": 8, "grid_points": 3, "grid_end_us": 1.0}))
    rc = main(
        ["fig2", "--config", str(cfg_path), "--out", str(tmp_path / "out"), "--grid", "0:2:4"]
    )
    assert rc == 0
    data = (tmp_path / "out" / "fig2_fluxes.csv").read_bytes()
    assert data.count(b"\r\n") == 5  # header + 4 rows from the CLI grid


def test_bad_config_exits_2(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"mystery": 1}))
    rc = main(["simulate", "--config", str(cfg_path)])
    assert rc == 2
    assert "mystery" in capsys.readouterr().err


def test_bad_n_list_exits_2(tmp_path):
    assert main(["sweep-n", "--n-list", "8,notanumber", "--out", str(tmp_path)]) == 2


def test_short_sweep_exits_2(tmp_path):
    assert main(["sweep-n", "--n-list", "8,16", "--out", str(tmp_path)]) == 2


def test_validate_green_exits_0(tmp_path, capsys):
    rc = main(["validate", "--out", str(tmp_path)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "validation passed" in out
    assert "[pass]" in out


def test_validate_failure_exits_3(tmp_path, monkeypatch, capsys):
    broken = checks.CheckResult(
        module="evolve", name="forced", residual=1.0, tolerance=1e-9, passed=False
    )
    monkeypatch.setattr(checks, "default_suite", lambda **kwargs: [broken])
    rc = main(["validate", "--out", str(tmp_path)])
    assert rc == 3
    captured = capsys.readouterr()
    assert "[FAIL] evolve.forced" in captured.out
    assert "validation failed" in captured.err
    report = json.loads((tmp_path / "validate_report.json").read_text())
    assert report["passed"] is False
