import os

from nvsim.config import NvsimConfig


def test_explicit_workers_win(monkeypatch):
    monkeypatch.setenv("NVSIM_WORKERS", "7")
    assert NvsimConfig.resolve_workers(3) == 3


def test_workers_from_environment(monkeypatch):
    monkeypatch.setenv("NVSIM_WORKERS", "5")
    assert NvsimConfig.resolve_workers() == 5


def test_bad_environment_falls_back_to_cpu_count(monkeypatch):
    monkeypatch.setattr(NvsimConfig, "DEFAULT_WORKERS", None)
    monkeypatch.setenv("NVSIM_WORKERS", "many")
    assert NvsimConfig.resolve_workers() == max(1, os.cpu_count() or 1)
    monkeypatch.delenv("NVSIM_WORKERS")
    assert NvsimConfig.resolve_workers(0) == max(1, os.cpu_count() or 1)


def test_ensure_output_dir(tmp_path):
    target = tmp_path / "runs" / "today"
    assert NvsimConfig.ensure_output_dir(str(target)) == str(target)
    assert target.is_dir()


def test_celery_settings_are_json_only():
    settings = NvsimConfig.celery_settings()
    assert settings["accept_content"] == ["json"]
    assert settings["broker_url"] == NvsimConfig.BROKER_URL
