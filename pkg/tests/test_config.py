import pytest

from config_interpreter import DEFAULTS, GUARD_ENV, guard_override, read_config


def test_read_config_fills_defaults(tmp_path):
    path = tmp_path / "config.toml"
    path.write_text("[Solver]\nlog_confirmations = 3\n", encoding="utf-8")
    config = read_config(path)
    assert config["Solver"]["log_confirmations"] == 3
    assert config["Solver"]["contraction_cap_factor"] == DEFAULTS["Solver"]["contraction_cap_factor"]
    assert config["Precision"] == DEFAULTS["Precision"]


def test_guard_override_from_environment(monkeypatch):
    monkeypatch.delenv(GUARD_ENV, raising=False)
    assert guard_override() is None
    monkeypatch.setenv(GUARD_ENV, "4")
    assert guard_override() == 4
    monkeypatch.setenv(GUARD_ENV, "-1")
    with pytest.raises(ValueError):
        guard_override()
    monkeypatch.setenv(GUARD_ENV, "four")
    with pytest.raises(ValueError):
        guard_override()
