"""
构造解问题
给定精确解 u = S(x)·g(t)，由 Caputo 导数的解析式反推源项
"""
import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple, Union

import numpy as np
from scipy import special

from kernels.fractional_kernels import caputo_monomial
from model.errors import ConfigurationError, DomainError
from model.problem import DistributionSpec, MultiTermSpec, Problem1D, Problem2D
from solver.distributed_order import discretize_distribution


ScalarFunc = Callable[[float], float]


@dataclass(frozen=True)
class ManufacturedProblem:
    """
    带精确解的问题

    精确解可分离: u = spatial(x[, y])·time_factor(t)，且 -Δ spatial = eigenvalue·spatial。
    time_derivatives 为 (g', g'')，供求积校验使用。
    """
    name: str
    problem: Union[Problem1D, Problem2D]
    spatial: Callable[..., np.ndarray]
    eigenvalue: float
    time_factor: ScalarFunc
    time_derivatives: Tuple[ScalarFunc, ScalarFunc]
    distribution: Optional[DistributionSpec] = None

    @property
    def dimension(self) -> int:
        return 2 if isinstance(self.problem, Problem2D) else 1

    def exact(self, *coords) -> np.ndarray:
        """exact(x, t) 或 exact(x, y, t)"""
        *space, t = coords
        return self.spatial(*space) * self.time_factor(t)


# ======================
# 时间因子
# ======================
def _cubic_plus_linear(t):
    return t ** 3 + t + 1.0


def _caputo_cubic_plus_linear(order: float, t: float) -> float:
    """D^γ (t³ + t + 1)，常数项导数为 0"""
    return caputo_monomial(3, order, t) + caputo_monomial(1, order, t)


def _cubic_log_ratio(t: float) -> float:
    """(t³ - t)/ln t = t·expm1(2 ln t)/ln t，ln t = 0 处取极限 2t"""
    log_t = math.log(t)
    if log_t == 0.0:
        return 2.0 * t
    return t * math.expm1(2.0 * log_t) / log_t


def _zero_1d(x: np.ndarray) -> np.ndarray:
    return np.zeros_like(x, dtype=float)


def _zero_2d(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.zeros_like(x, dtype=float)


def _sin_xy(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.sin(x) * np.sin(y)


# ======================
# 各算例
# ======================
def example_1(alpha1: float = 0.5, alpha2: float = 1.5) -> ManufacturedProblem:
    """
    D^{α1}u + D^{α2}u + u = u_xx + f，x ∈ (0, π)，t ∈ (0, 1]
    精确解 u = sin x·(t³ + t + 1)
    """
    spec = MultiTermSpec.from_pairs([(1.0, alpha1), (1.0, alpha2)], reaction=1.0)

    def source(x, t):
        bracket = _caputo_cubic_plus_linear(alpha1, t) + _caputo_cubic_plus_linear(alpha2, t)
        return np.sin(x) * (bracket + 2.0 * _cubic_plus_linear(t))

    problem = Problem1D(length=math.pi, horizon=1.0, spec=spec, source=source, phi0=np.sin, phi1=np.sin)
    return ManufacturedProblem(
        name="ex1",
        problem=problem,
        spatial=np.sin,
        eigenvalue=1.0,
        time_factor=_cubic_plus_linear,
        time_derivatives=(lambda t: 3.0 * t ** 2 + 1.0, lambda t: 6.0 * t),
    )


def example_2(j: int = 16) -> ManufacturedProblem:
    """
    ∫₀² Γ(4-α) D^α u dα = u_xx + sin x·(t³ + (6t³ - 6t)/ln t)
    精确解 u = sin x·t³
    """
    distribution = DistributionSpec(weight=lambda alpha: special.gamma(4.0 - alpha), j=j)

    def source(x, t):
        return np.sin(x) * (t ** 3 + 6.0 * _cubic_log_ratio(t))

    problem = Problem1D(
        length=math.pi,
        horizon=1.0,
        spec=discretize_distribution(distribution),
        source=source,
        phi0=_zero_1d,
        phi1=_zero_1d,
    )
    return ManufacturedProblem(
        name="ex2",
        problem=problem,
        spatial=np.sin,
        eigenvalue=1.0,
        time_factor=lambda t: t ** 3,
        time_derivatives=(lambda t: 3.0 * t ** 2, lambda t: 6.0 * t),
        distribution=distribution,
    )


def example_3(alpha1: float = 0.75, alpha2: float = 1.5) -> ManufacturedProblem:
    """
    二维: D^{α1}u + D^{α2}u = Δu + f，(x, y) ∈ (0, π)²，t ∈ (0, 0.5]
    精确解 u = sin x sin y·(t³ + t + 1)
    """
    spec = MultiTermSpec.from_pairs([(1.0, alpha1), (1.0, alpha2)])

    def source(x, y, t):
        bracket = _caputo_cubic_plus_linear(alpha1, t) + _caputo_cubic_plus_linear(alpha2, t)
        return _sin_xy(x, y) * (bracket + 2.0 * _cubic_plus_linear(t))

    problem = Problem2D(
        length_x=math.pi,
        length_y=math.pi,
        horizon=0.5,
        spec=spec,
        source=source,
        phi0=_sin_xy,
        phi1=_sin_xy,
    )
    return ManufacturedProblem(
        name="ex3",
        problem=problem,
        spatial=_sin_xy,
        eigenvalue=2.0,
        time_factor=_cubic_plus_linear,
        time_derivatives=(lambda t: 3.0 * t ** 2 + 1.0, lambda t: 6.0 * t),
    )


def low_regularity(nu: float = 1.5, alpha1: float = 0.75, alpha2: float = 1.5) -> ManufacturedProblem:
    """
    与 example_1 相同的方程，精确解 u = sin x·t^ν（ν ≥ 1，时间方向低正则）
    """
    if nu < 1.0:
        raise DomainError(f"ν 必须 ≥ 1（初始速度有界），当前为 {nu}")
    spec = MultiTermSpec.from_pairs([(1.0, alpha1), (1.0, alpha2)], reaction=1.0)

    def source(x, t):
        bracket = caputo_monomial(nu, alpha1, t) + caputo_monomial(nu, alpha2, t)
        return np.sin(x) * (bracket + 2.0 * t ** nu)

    # ν = 1 时 u_t(x, 0) = sin x，其余情况为 0
    velocity = np.sin if nu == 1.0 else _zero_1d
    problem = Problem1D(length=math.pi, horizon=1.0, spec=spec, source=source, phi0=_zero_1d, phi1=velocity)
    return ManufacturedProblem(
        name="low_reg",
        problem=problem,
        spatial=np.sin,
        eigenvalue=1.0,
        time_factor=lambda t: t ** nu,
        time_derivatives=(
            lambda t: nu * t ** (nu - 1.0),
            lambda t: nu * (nu - 1.0) * t ** (nu - 2.0),
        ),
    )


# ======================
# 注册表
# ======================
EXAMPLES: Dict[str, Callable[..., ManufacturedProblem]] = {
    "ex1": example_1,
    "ex2": example_2,
    "ex3": example_3,
    "low_reg": low_regularity,
}


def manufactured_problem(example: str, **params) -> ManufacturedProblem:
    """按算例名称构造问题，params 传给对应的构造函数"""
    try:
        factory = EXAMPLES[example]
    except KeyError:
        raise ConfigurationError(f"未知算例: {example}（可选: {', '.join(EXAMPLES)}）")
    return factory(**params)
