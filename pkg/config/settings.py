import copy
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from dotenv import load_dotenv


# 读取 .env（FRACDW_CONFIG、FRACDW_MAX_WORKERS 等）
load_dotenv()

# 配置文件默认路径（相对于工作目录），可用环境变量 FRACDW_CONFIG 覆盖
CONFIG_FILE = "config.yaml"
DEFAULT_CONFIG: Dict[str, Any] = {
    "linalg": {
        "dst_direct_threshold": 64,   # 小于该规模时用稠密正弦矩阵直接相乘
        "toeplitz_base_case": 32,     # 分治递归的基准规模（前代求解）
    },
    "workers": {
        "max_workers": None,          # None = os.cpu_count()
        "chunk_size": 64,             # 每个工作单元包含的模态系统数
    },
    "experiment": {
        "example": "ex1",
        "backend": "fast",
        "refine": "time",
        "resolutions": [16, 32, 64, 128],
        "alpha": 0.5,
        "beta": 1.5,
        "nu": 1.5,
        "fixed_n": 128,
        "fixed_m": 16,
        "fixed_j": 16,
        "output": "report.csv",
        "formats": ["csv"],
        "l2": False,
    },
    "bench": {
        "fast_n": [16384, 32768, 65536, 131072],
        "stepping_n": [1024, 2048, 4096, 8192],
        "m": 16,
    },
    "logging": {
        "level": "INFO",
        "dir": "logs",
        "file": "fracdw.log",
        "backup_count": 30,
    },
}


_config_cache: Optional[Dict[str, Any]] = None


def get_config() -> Dict[str, Any]:
    """
    获取全局配置（单例模式，避免重复读取文件）

    配置文件不存在时直接返回默认配置：求解库在没有配置文件时也必须可用。
    """
    global _config_cache
    if _config_cache is not None:
        return _config_cache

    config_path = Path(os.environ.get("FRACDW_CONFIG", CONFIG_FILE))

    if not config_path.exists():
        _config_cache = copy.deepcopy(DEFAULT_CONFIG)
        return _config_cache

    try:
        with open(config_path, "r", encoding="utf-8") as f:
            user_config = yaml.safe_load(f) or {}
    except yaml.YAMLError as e:
        raise ValueError(f"配置文件格式错误 ({config_path}): {e}")
    except OSError as e:
        raise RuntimeError(f"加载配置失败: {e}")

    if not isinstance(user_config, dict):
        raise ValueError(f"配置文件顶层必须是映射 ({config_path})")

    # 合并默认配置与用户配置（用户配置优先）
    _config_cache = _deep_merge(copy.deepcopy(DEFAULT_CONFIG), user_config)
    return _config_cache


def reset_config() -> None:
    """清空配置缓存（测试或切换配置文件时使用）"""
    global _config_cache
    _config_cache = None


def _deep_merge(default, override):
    """
    递归合并两个字典(override 覆盖 default)
    """
    # 若 override 为 None 或非字典，保留 default
    if override is None:
        return default
    if not isinstance(default, dict) or not isinstance(override, dict):
        return override
    result = default.copy()
    for key, value in override.items():
        if key in result and isinstance(result[key], dict):
            result[key] = _deep_merge(result[key], value)
        else:
            result[key] = value
    return result
