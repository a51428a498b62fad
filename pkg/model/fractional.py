"""
分数阶相关的基础类型
阶数、系数表、时间序列（全部不可变）
"""
import math
from dataclasses import dataclass, field
from typing import Literal, Union

import numpy as np

from .errors import DomainError


# ======================
# 常量定义
# ======================
SUB = "sub"     # 阶数 ≤ 1：L1 逼近
WAVE = "wave"   # 阶数 > 1：修正 L2 逼近

CoefficientKind = Literal["L1", "L2"]


@dataclass(frozen=True)
class FractionalOrder:
    """分数阶 value ∈ (0, 2]；value ≤ 1 归为 sub，其余为 wave"""
    value: float

    def __post_init__(self) -> None:
        value = float(self.value)
        if not math.isfinite(value) or not 0.0 < value <= 2.0:
            raise DomainError(f"分数阶必须位于 (0, 2]，当前为 {self.value}")
        object.__setattr__(self, "value", value)

    @property
    def kind(self) -> str:
        return SUB if self.value <= 1.0 else WAVE

    @property
    def is_wave(self) -> bool:
        return self.kind == WAVE

    def __float__(self) -> float:
        return self.value


OrderLike = Union[float, FractionalOrder]


def as_order(order: OrderLike) -> FractionalOrder:
    """float 或 FractionalOrder 统一转换为 FractionalOrder"""
    if isinstance(order, FractionalOrder):
        return order
    return FractionalOrder(order)


def _frozen_array(values) -> np.ndarray:
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class CoefficientTable:
    """
    系数表 c_0..c_{n-1}

    kind = L1 时存放 a_k^(α)；kind = L2 时存放 b_k^(β) = a_k^(β-1)。
    """
    order: FractionalOrder
    values: np.ndarray = field(repr=False)
    kind: CoefficientKind

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _frozen_array(self.values))

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, index):
        return self.values[index]


@dataclass(frozen=True)
class TimeSequence:
    """时间序列 v^0..v^n，采样点 t_k = kτ"""
    values: np.ndarray = field(repr=False)
    tau: float

    def __post_init__(self) -> None:
        values = np.atleast_1d(np.asarray(self.values, dtype=float))
        if values.ndim != 1 or values.size < 1:
            raise DomainError("时间序列至少需要一个值 v^0")
        if not self.tau > 0:
            raise DomainError(f"时间步长必须为正，当前为 {self.tau}")
        object.__setattr__(self, "values", _frozen_array(values))

    @property
    def steps(self) -> int:
        """v^0 之后的步数 n"""
        return len(self.values) - 1

    @classmethod
    def sample(cls, func, tau: float, n: int) -> "TimeSequence":
        """在 t_k = kτ (k = 0..n) 上采样函数"""
        t = tau * np.arange(n + 1)
        return cls(values=np.asarray(func(t), dtype=float), tau=tau)
