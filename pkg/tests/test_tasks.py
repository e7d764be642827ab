from pathlib import Path

import pytest

from nvsim.tasks import run_scenario_task

POLARIZATION = {
    "scenario": "polarization",
    "strain": {"v_e1": 1.529, "v_e2": 0.473},
    "polarization": {"points": 91},
}


def run(**kwargs):
    return run_scenario_task.apply(kwargs=kwargs).get()


def test_task_runs_scenario(tmp_path):
    result = run(config=POLARIZATION, out_dir=str(tmp_path))
    assert result["status"] == "completed"
    assert result["scenario"] == "polarization"
    assert result["error"] is None
    assert len(result["artifacts"]) == 2
    assert all(Path(p).exists() for p in result["artifacts"])
    assert result["summary"]["theta_rad"] == pytest.approx(0.5 * 0.2997, abs=0.01)


def test_task_applies_overrides(tmp_path):
    result = run(config=POLARIZATION, overrides=["output.name=tilted", "strain.v_e2=0.0"], out_dir=str(tmp_path))
    assert result["status"] == "completed"
    assert (tmp_path / "tilted_polarization.csv").exists()
    assert result["summary"]["theta_rad"] == pytest.approx(0.0, abs=1e-12)


def test_task_reports_config_error(tmp_path):
    result = run(config={"scenario": "polarization"}, out_dir=str(tmp_path))
    assert result["status"] == "config_error"
    assert result["error"].startswith("strain:")
    assert result["artifacts"] == []
    assert any("❌" in line for line in result["logs"])


def test_task_reports_unknown_scenario(tmp_path):
    result = run(config=POLARIZATION, scenario="spectrogram", out_dir=str(tmp_path))
    assert result["status"] == "config_error"
