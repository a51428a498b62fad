"""
均匀网格
时间网格、一维/二维空间网格，以及求解器使用的网格组合
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class TimeMesh:
    """[0, T] 上的均匀时间网格，t_n = nτ"""
    horizon: float
    n: int

    def __post_init__(self) -> None:
        if not self.horizon > 0:
            raise DomainError(f"时间区间长度必须为正，当前为 {self.horizon}")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"时间步数必须为正整数，当前为 {self.n}")

    @property
    def tau(self) -> float:
        return self.horizon / self.n

    @property
    def nodes(self) -> np.ndarray:
        return self.tau * np.arange(self.n + 1)


@dataclass(frozen=True)
class SpatialMesh1D:
    """
    [0, L] 上的均匀网格，x_i = i·h，h = L/M

    节点数组长度为 M+1；内点为下标 1..M-1（interior 视图整体平移一位）。
    """
    length: float
    m: int

    def __post_init__(self) -> None:
        if not self.length > 0:
            raise DomainError(f"空间区间长度必须为正，当前为 {self.length}")
        if int(self.m) != self.m or self.m < 2:
            raise DomainError(f"空间剖分数 M 必须 ≥ 2，当前为 {self.m}")

    @property
    def h(self) -> float:
        return self.length / self.m

    @property
    def nodes(self) -> np.ndarray:
        return self.h * np.arange(self.m + 1)

    @property
    def interior(self) -> np.ndarray:
        return self.nodes[1:-1]

    def check(self, values: np.ndarray, axis: int = -1) -> None:
        """检查数组在 axis 方向上是否为 M+1 个节点值"""
        if values.ndim == 0 or values.shape[axis] != self.m + 1:
            raise DomainError(
                f"网格函数长度与网格不匹配: 期望 {self.m + 1}，实际 {values.shape}"
            )


@dataclass(frozen=True)
class SpatialMesh2D:
    """矩形 [0, L1] × [0, L2] 上的张量积网格"""
    x: SpatialMesh1D
    y: SpatialMesh1D

    @classmethod
    def build(cls, length_x: float, length_y: float, m1: int, m2: int) -> "SpatialMesh2D":
        return cls(x=SpatialMesh1D(length_x, m1), y=SpatialMesh1D(length_y, m2))

    @property
    def h1(self) -> float:
        return self.x.h

    @property
    def h2(self) -> float:
        return self.y.h

    @property
    def shape(self) -> tuple:
        return (self.x.m + 1, self.y.m + 1)

    def grid(self) -> tuple:
        """返回 ij 索引的节点坐标 (X, Y)"""
        return np.meshgrid(self.x.nodes, self.y.nodes, indexing="ij")


# ======================
# 网格组合
# ======================
@dataclass(frozen=True)
class Grid1D:
    """一维问题的时空网格"""
    time: TimeMesh
    space: SpatialMesh1D

    @classmethod
    def build(cls, length: float, horizon: float, n: int, m: int) -> "Grid1D":
        return cls(time=TimeMesh(horizon, n), space=SpatialMesh1D(length, m))

    def check_problem(self, length: float, horizon: float) -> None:
        if not math.isclose(self.space.length, length, rel_tol=1e-12):
            raise DomainError(f"空间网格长度 {self.space.length} 与问题区间 {length} 不一致")
        if not math.isclose(self.time.horizon, horizon, rel_tol=1e-12):
            raise DomainError(f"时间网格长度 {self.time.horizon} 与问题时间 {horizon} 不一致")


@dataclass(frozen=True)
class Grid2D:
    """二维问题的时空网格"""
    time: TimeMesh
    space: SpatialMesh2D

    @classmethod
    def build(
        cls, length_x: float, length_y: float, horizon: float, n: int, m1: int, m2: int
    ) -> "Grid2D":
        return cls(time=TimeMesh(horizon, n), space=SpatialMesh2D.build(length_x, length_y, m1, m2))

    def check_problem(self, length_x: float, length_y: float, horizon: float) -> None:
        Grid1D(self.time, self.space.x).check_problem(length_x, horizon)
        if not math.isclose(self.space.y.length, length_y, rel_tol=1e-12):
            raise DomainError(f"y 方向网格长度 {self.space.y.length} 与问题区间 {length_y} 不一致")
