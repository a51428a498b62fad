"""
表格复现预设
--table 1|2|3|3-time|3-space|5 展开为一组实验参数
"""
from typing import Any, Dict, List, Optional

from model.errors import ConfigurationError


ORDER_PAIRS = [(0.2, 1.2), (0.5, 1.5), (0.7, 1.7)]
LOW_REGULARITY_TRIPLES = [(0.6, 1.2, 1.2), (0.75, 1.5, 1.5), (0.85, 1.7, 1.7)]

TABLE_PRESETS: Dict[str, List[Dict[str, Any]]] = {
    # 时间一阶
    "1": [
        {"example": "ex1", "refine": "time", "resolutions": [16, 32, 64, 128], "fixed_m": 16,
         "alpha": alpha, "beta": beta}
        for alpha, beta in ORDER_PAIRS
    ],
    # 空间四阶，τ 取得足够小使时间误差可忽略
    "2": [
        {"example": "ex1", "refine": "space", "resolutions": [4, 6, 8, 10], "fixed_n": 2 ** 20,
         "alpha": alpha, "beta": beta}
        for alpha, beta in ORDER_PAIRS
    ],
    # 分布阶: σ 二阶
    "3": [
        {"example": "ex2", "refine": "sigma", "resolutions": [2, 4, 6, 8], "fixed_n": 2 ** 16, "fixed_m": 16},
    ],
    # 分布阶: 时间一阶（σ = 1/16）
    "3-time": [
        {"example": "ex2", "refine": "time", "resolutions": [16, 32, 64, 128], "fixed_m": 16, "fixed_j": 16},
    ],
    # 分布阶: 空间四阶（τ = 2^-20，σ = 1/128）
    "3-space": [
        {"example": "ex2", "refine": "space", "resolutions": [4, 6, 8, 10], "fixed_n": 2 ** 20, "fixed_j": 128},
    ],
    # 低正则解；ν = 1.7 在 N = 128 时仍在逼近 ν-1，多加一层
    "5": [
        {"example": "low_reg", "refine": "time", "resolutions": [16, 32, 64, 128, 256], "fixed_m": 16,
         "alpha": alpha, "beta": beta, "nu": nu}
        for alpha, beta, nu in LOW_REGULARITY_TRIPLES
    ],
}


def table_overrides(table: str) -> List[Dict[str, Any]]:
    """返回预设的参数列表（副本）"""
    try:
        return [dict(entry) for entry in TABLE_PRESETS[str(table)]]
    except KeyError:
        raise ConfigurationError(f"未知表格预设: {table}（可选: {', '.join(TABLE_PRESETS)}）")


def merge_overrides(table: str, overrides: Optional[Dict[str, Any]] = None) -> List[Dict[str, Any]]:
    """
    预设与命令行参数合并，命令行优先

    区分各组实验的键（如表 1 的 alpha / beta）不允许覆盖，否则各组会变成同一实验。
    """
    presets = table_overrides(table)
    overrides = {key: value for key, value in (overrides or {}).items() if value is not None}
    keys = set().union(*presets)
    varying = {key for key in keys if len({repr(entry.get(key)) for entry in presets}) > 1}
    conflicts = sorted(varying & set(overrides))
    if conflicts:
        raise ConfigurationError(f"表 {table} 的各组实验由 {conflicts} 区分，不能在命令行覆盖")
    return [{**preset, **overrides} for preset in presets]
