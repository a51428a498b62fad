"""
问题描述与解的数据结构
多项分数阶方程的各项、一维/二维问题、分布阶权函数、时空解场
"""
import dataclasses
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Tuple

import numpy as np

from .errors import ConfigurationError, DomainError
from .fractional import FractionalOrder, OrderLike, as_order
from .mesh import Grid1D, Grid2D, SpatialMesh1D, SpatialMesh2D, TimeMesh


# ======================
# 类型定义
# ======================
# f(x, t)：x 为节点数组，t 为标量
Source1D = Callable[[np.ndarray, float], np.ndarray]
# φ(x)
Profile1D = Callable[[np.ndarray], np.ndarray]
# g(t)：t 为时间节点数组
BoundaryData = Callable[[np.ndarray], np.ndarray]
# f(X, Y, t) / φ(X, Y)
Source2D = Callable[[np.ndarray, np.ndarray, float], np.ndarray]
Profile2D = Callable[[np.ndarray, np.ndarray], np.ndarray]

# 二维齐次边界判定的绝对容差（sin π 之类的舍入残量）
BOUNDARY_ATOL = 1e-12


@dataclass(frozen=True)
class FractionalTerm:
    """方程中的一项 K·D^γ u"""
    weight: float
    order: FractionalOrder

    def __post_init__(self) -> None:
        if not self.weight > 0:
            raise DomainError(f"项系数 K 必须为正，当前为 {self.weight}")
        object.__setattr__(self, "weight", float(self.weight))
        object.__setattr__(self, "order", as_order(self.order))


@dataclass(frozen=True)
class MultiTermSpec:
    """
    多项分数阶算子 Σ K_i D^{γ_i} u (+ c·u)

    各项按阶数严格递增排列；reaction 为可选的零阶反应项系数 c ≥ 0。
    """
    terms: Tuple[FractionalTerm, ...]
    reaction: float = 0.0

    def __post_init__(self) -> None:
        terms = tuple(self.terms)
        if not terms:
            raise DomainError("至少需要一个分数阶项")
        orders = [term.order.value for term in terms]
        if any(b <= a for a, b in zip(orders, orders[1:])):
            raise DomainError(f"各项阶数必须严格递增: {orders}")
        if self.reaction < 0:
            raise DomainError(f"反应项系数不能为负: {self.reaction}")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "reaction", float(self.reaction))

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[Tuple[float, OrderLike]], reaction: float = 0.0
    ) -> "MultiTermSpec":
        """由 (K, γ) 列表构造，自动按阶数排序"""
        terms = [FractionalTerm(weight, as_order(order)) for weight, order in pairs]
        terms.sort(key=lambda term: term.order.value)
        return cls(terms=tuple(terms), reaction=reaction)

    @property
    def sub_terms(self) -> Tuple[FractionalTerm, ...]:
        return tuple(term for term in self.terms if not term.order.is_wave)

    @property
    def wave_terms(self) -> Tuple[FractionalTerm, ...]:
        return tuple(term for term in self.terms if term.order.is_wave)

    @property
    def scaling_order(self) -> float:
        """矩阵方程的缩放阶 β*（最大阶数）"""
        return self.terms[-1].order.value


@dataclass(frozen=True)
class DistributionSpec:
    """
    分布阶权函数 w(α)，α ∈ [a, b] ⊆ [0, 2]

    区间被 2J 个中点求积节点剖分，σ = (b - a) / (2J)。
    """
    weight: Callable[[float], float]
    j: int
    a: float = 0.0
    b: float = 2.0
    reaction: float = 0.0

    def __post_init__(self) -> None:
        if int(self.j) != self.j or self.j < 1:
            raise DomainError(f"J 必须为正整数，当前为 {self.j}")
        if not 0.0 <= self.a < self.b <= 2.0:
            raise DomainError(f"分布区间必须满足 0 ≤ a < b ≤ 2，当前为 [{self.a}, {self.b}]")

    @property
    def sigma(self) -> float:
        return (self.b - self.a) / (2 * self.j)


# ======================
# 问题描述
# ======================
def _zero_profile(x: np.ndarray) -> np.ndarray:
    return np.zeros_like(x, dtype=float)


def _zero_profile_2d(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.zeros_like(x, dtype=float)


@dataclass(frozen=True)
class Problem1D:
    """
    一维问题: Σ K_i D^{γ_i} u + c·u = u_xx + f，x ∈ (0, L)，t ∈ (0, T]

    phi0 / phi1 为初值与初始速度；g0 / gL 为 Dirichlet 边界数据（None 表示齐次）。
    存在 wave 项时必须给出 phi1。
    """
    length: float
    horizon: float
    spec: MultiTermSpec
    source: Source1D
    phi0: Profile1D = _zero_profile
    phi1: Optional[Profile1D] = None
    g0: Optional[BoundaryData] = None
    gL: Optional[BoundaryData] = None

    def __post_init__(self) -> None:
        if not self.length > 0 or not self.horizon > 0:
            raise DomainError(f"区间长度与时间必须为正: L={self.length}, T={self.horizon}")
        if self.spec.wave_terms and self.phi1 is None:
            raise ConfigurationError("方程含阶数 > 1 的项，必须给出初始速度 phi1")

    def with_spec(self, spec: MultiTermSpec) -> "Problem1D":
        return dataclasses.replace(self, spec=spec)

    def grid(self, n: int, m: int) -> Grid1D:
        return Grid1D.build(self.length, self.horizon, n, m)

    # ---- 网格采样 ----
    def initial_values(self, mesh: SpatialMesh1D) -> np.ndarray:
        return np.asarray(self.phi0(mesh.nodes), dtype=float) * np.ones(mesh.m + 1)

    def initial_velocity(self, mesh: SpatialMesh1D) -> np.ndarray:
        if self.phi1 is None:
            return np.zeros(mesh.m + 1)
        return np.asarray(self.phi1(mesh.nodes), dtype=float) * np.ones(mesh.m + 1)

    def boundary_values(self, mesh: TimeMesh) -> Tuple[np.ndarray, np.ndarray]:
        """边界值 (g0(t_n), gL(t_n))，n = 1..N"""
        t = mesh.nodes[1:]
        left = np.zeros_like(t) if self.g0 is None else np.asarray(self.g0(t), dtype=float) * np.ones_like(t)
        right = np.zeros_like(t) if self.gL is None else np.asarray(self.gL(t), dtype=float) * np.ones_like(t)
        return left, right

    def source_values(self, grid: Grid1D) -> np.ndarray:
        """f(x_i, t_n)，形状 (N, M+1)，n = 1..N（不在 t = 0 处求值）"""
        x = grid.space.nodes
        rows = [np.asarray(self.source(x, t), dtype=float) * np.ones_like(x) for t in grid.time.nodes[1:]]
        return np.vstack(rows)


@dataclass(frozen=True)
class Problem2D:
    """
    二维问题: Σ K_i D^{γ_i} u + c·u = Δu + f，(x, y) ∈ (0, L1) × (0, L2)

    边界恒为零；boundary 仅用于显式传入非零边界时报错。
    """
    length_x: float
    length_y: float
    horizon: float
    spec: MultiTermSpec
    source: Source2D
    phi0: Profile2D = _zero_profile_2d
    phi1: Optional[Profile2D] = None
    boundary: Optional[Callable[[np.ndarray, np.ndarray, float], np.ndarray]] = None

    def __post_init__(self) -> None:
        if not self.length_x > 0 or not self.length_y > 0 or not self.horizon > 0:
            raise DomainError("矩形边长与时间必须为正")
        if self.spec.wave_terms and self.phi1 is None:
            raise ConfigurationError("方程含阶数 > 1 的项，必须给出初始速度 phi1")

    def with_spec(self, spec: MultiTermSpec) -> "Problem2D":
        return dataclasses.replace(self, spec=spec)

    def grid(self, n: int, m1: int, m2: int) -> Grid2D:
        return Grid2D.build(self.length_x, self.length_y, self.horizon, n, m1, m2)

    def initial_values(self, mesh: SpatialMesh2D) -> np.ndarray:
        x, y = mesh.grid()
        return np.asarray(self.phi0(x, y), dtype=float) * np.ones(mesh.shape)

    def initial_velocity(self, mesh: SpatialMesh2D) -> np.ndarray:
        if self.phi1 is None:
            return np.zeros(mesh.shape)
        x, y = mesh.grid()
        return np.asarray(self.phi1(x, y), dtype=float) * np.ones(mesh.shape)

    def source_values(self, grid: Grid2D) -> np.ndarray:
        """f(x_i, y_j, t_n)，形状 (N, M1+1, M2+1)，n = 1..N"""
        x, y = grid.space.grid()
        return np.stack([
            np.asarray(self.source(x, y, t), dtype=float) * np.ones(grid.space.shape)
            for t in grid.time.nodes[1:]
        ])

    def boundary_is_zero(self, grid: Grid2D) -> bool:
        """φ0 与边界数据（t_1..t_N）在 ∂Ω 上是否恒为零（容差 BOUNDARY_ATOL）"""
        x, y = grid.space.grid()
        edge = np.zeros(grid.space.shape, dtype=bool)
        edge[0, :] = edge[-1, :] = edge[:, 0] = edge[:, -1] = True
        if np.any(np.abs(self.initial_values(grid.space)[edge]) > BOUNDARY_ATOL):
            return False
        if self.boundary is None:
            return True
        for t in grid.time.nodes[1:]:
            values = np.asarray(self.boundary(x, y, t), dtype=float) * np.ones(grid.space.shape)
            if np.any(np.abs(values[edge]) > BOUNDARY_ATOL):
                return False
        return True


# ======================
# 时空解场
# ======================
@dataclass(frozen=True)
class GridField:
    """
    一维时空解场，values 形状 (N+1, M+1)

    第 0 行为初值 u^0，首末两列为边界值；interior 为未知量 u_i^n (1 ≤ i ≤ M-1, 1 ≤ n ≤ N)。
    """
    grid: Grid1D
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        expected = (self.grid.time.n + 1, self.grid.space.m + 1)
        if self.values.shape != expected:
            raise DomainError(f"解场形状 {self.values.shape} 与网格 {expected} 不一致")
        self.values.setflags(write=False)

    @property
    def interior(self) -> np.ndarray:
        return self.values[1:, 1:-1]

    @property
    def initial(self) -> np.ndarray:
        return self.values[0]

    @property
    def final(self) -> np.ndarray:
        return self.values[-1]

    @property
    def boundary(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.values[:, 0], self.values[:, -1]


@dataclass(frozen=True)
class GridField2D:
    """二维时空解场，values 形状 (N+1, M1+1, M2+1)，边界恒为零"""
    grid: Grid2D
    values: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        expected = (self.grid.time.n + 1,) + self.grid.space.shape
        if self.values.shape != expected:
            raise DomainError(f"解场形状 {self.values.shape} 与网格 {expected} 不一致")
        self.values.setflags(write=False)

    @property
    def interior(self) -> np.ndarray:
        return self.values[1:, 1:-1, 1:-1]

    @property
    def initial(self) -> np.ndarray:
        return self.values[0]

    @property
    def final(self) -> np.ndarray:
        return self.values[-1]
