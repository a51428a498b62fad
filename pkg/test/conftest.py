import pytest

from config import reset_config


@pytest.fixture(autouse=True)
def default_config(monkeypatch, tmp_path):
    """每个测试都使用默认配置（指向不存在的配置文件），并清除工作池环境变量"""
    monkeypatch.setenv("FRACDW_CONFIG", str(tmp_path / "missing.yaml"))
    monkeypatch.delenv("FRACDW_MAX_WORKERS", raising=False)
    reset_config()
    yield
    reset_config()
