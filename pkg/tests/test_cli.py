import json

import pytest

from nvsim.artifacts import read_csv
from nvsim.cli import EXIT_CONFIG, EXIT_NOT_CONVERGED, EXIT_OK, main

SHORT_PLE = ["--set", "sequence.collect=5", "--set", "grid.detuning_points=41", "--workers", "1"]


def test_validate_prints_splitting(capsys):
    assert main(["validate", "--config", "nv1.toml"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "Config OK" in out
    assert "10.6" in out


def test_validate_warns_about_large_step(capsys):
    assert main(["validate", "--config", "nv1.toml", "--set", "sequence.dt=1.0"]) == EXIT_OK
    assert "dt_max" in capsys.readouterr().out


def test_missing_omega_m_is_a_config_error(tmp_path, capsys):
    cfg = tmp_path / "no_drive_freq.toml"
    cfg.write_text(
        'scenario = "ple"\n'
        "[strain]\nv_e1 = 5.3\nv_e2 = 0.0\n"
        "[drive]\namp_a1 = 1.0\n"
        "[optics]\nomega = 0.1\n"
        "[grid]\ndetunings = [0.0]\n",
        encoding="utf-8",
    )
    assert main(["validate", "--config", str(cfg)]) == EXIT_CONFIG
    assert "drive.omega_m" in capsys.readouterr().out


def test_missing_config_file():
    assert main(["ple", "--config", "nowhere.toml"]) == EXIT_CONFIG


def test_unknown_override():
    assert main(["validate", "--config", "nv1.toml", "--set", "drive.frequency=1.0"]) == EXIT_CONFIG


def test_bad_worker_count(tmp_path):
    assert main(["ple", "--config", "nv1.toml", "--workers", "0", "--out", str(tmp_path)]) == EXIT_CONFIG


def test_ple_run_and_sidecar_rerun(tmp_path):
    first = tmp_path / "first"
    assert main(["ple", "--config", "nv1.toml", *SHORT_PLE, "--out", str(first)]) == EXIT_OK
    csv_path = first / "nv1_ple.csv"
    sidecar_path = first / "nv1_ple.json"
    assert csv_path.exists() and sidecar_path.exists()

    header, data = read_csv(csv_path)
    assert header == ["detuning_ghz", "pl"]
    assert data.shape == (41, 2)
    assert csv_path.read_text(encoding="utf-8").startswith("# nvsim ")

    sidecar = json.loads(sidecar_path.read_text(encoding="utf-8"))
    assert sidecar["status"] == "ok"
    assert sidecar["config"]["grid"]["detuning_points"] == 41
    assert sidecar["derived"]["splitting_ghz"] == pytest.approx(10.6)

    second = tmp_path / "second"
    assert main(["ple", "--config", str(sidecar_path), "--workers", "1", "--out", str(second)]) == EXIT_OK
    assert (second / "nv1_ple.csv").read_bytes() == csv_path.read_bytes()


def test_small_map_with_plot_script(tmp_path):
    args = [
        "map",
        "--config",
        "nv2.toml",
        "--set",
        "grid.detuning_points=11",
        "--set",
        "grid.amplitude_points=3",
        "--set",
        "sequence.collect=5",
        "--workers",
        "2",
        "--out",
        str(tmp_path),
        "--plot",
    ]
    assert main(args) == EXIT_OK
    header, data = read_csv(tmp_path / "nv2_map.csv")
    assert header[0] == "amp_a1_ghz"
    assert data.shape == (3, 12)
    assert data[0, 0] == 0.0
    script = (tmp_path / "nv2_map_plot.py").read_text(encoding="utf-8")
    assert "nv2_map.csv" in script
    assert "pcolormesh" in script


def test_polarization_run(tmp_path):
    assert main(["polarization", "--config", "polarization.toml", "--out", str(tmp_path)]) == EXIT_OK
    sidecar = json.loads((tmp_path / "polarization_polarization.json").read_text(encoding="utf-8"))
    assert sidecar["summary"]["recovered_theta_rad"] == pytest.approx(sidecar["summary"]["theta_rad"], abs=1e-3)


def test_strict_fit_not_converged(tmp_path, capsys):
    args = ["fit", "--config", "nv1_fit.toml", "--set", "fit.max_iter=2", "--strict", "--out", str(tmp_path)]
    assert main(args) == EXIT_NOT_CONVERGED
    assert "best so far" in capsys.readouterr().out
    sidecars = list(tmp_path.glob("*.json"))
    assert len(sidecars) == 1
    assert json.loads(sidecars[0].read_text(encoding="utf-8"))["status"] == "not_converged"


def test_lenient_fit_still_succeeds(tmp_path):
    args = ["fit", "--config", "nv1_fit.toml", "--set", "fit.max_iter=2", "--out", str(tmp_path)]
    assert main(args) == EXIT_OK
