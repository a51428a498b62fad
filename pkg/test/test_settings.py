import pytest

from config import DEFAULT_CONFIG, get_config, reset_config
from config.settings import _deep_merge


def test_missing_file_gives_defaults():
    config = get_config()
    assert config == DEFAULT_CONFIG
    assert config is not DEFAULT_CONFIG


def test_config_is_cached():
    assert get_config() is get_config()


def test_user_file_is_merged(monkeypatch, tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("linalg:\n  toeplitz_base_case: 8\nexperiment:\n  backend: stepping\n", encoding="utf-8")
    monkeypatch.setenv("FRACDW_CONFIG", str(path))
    reset_config()

    config = get_config()
    assert config["linalg"] == {"dst_direct_threshold": 64, "toeplitz_base_case": 8}
    assert config["experiment"]["backend"] == "stepping"
    assert config["experiment"]["resolutions"] == [16, 32, 64, 128]


def test_empty_file_gives_defaults(monkeypatch, tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("", encoding="utf-8")
    monkeypatch.setenv("FRACDW_CONFIG", str(path))
    reset_config()
    assert get_config() == DEFAULT_CONFIG


@pytest.mark.parametrize("content", ["linalg: [1, 2\n", "- 1\n- 2\n"])
def test_malformed_file_rejected(monkeypatch, tmp_path, content):
    path = tmp_path / "config.yaml"
    path.write_text(content, encoding="utf-8")
    monkeypatch.setenv("FRACDW_CONFIG", str(path))
    reset_config()
    with pytest.raises(ValueError):
        get_config()


def test_deep_merge():
    default = {"a": {"x": 1, "y": 2}, "b": 3}
    merged = _deep_merge(default, {"a": {"y": 5}, "c": 4})
    assert merged == {"a": {"x": 1, "y": 5}, "b": 3, "c": 4}
    assert default == {"a": {"x": 1, "y": 2}, "b": 3}
    assert _deep_merge(default, None) is default
