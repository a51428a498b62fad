"""
分布阶方程
用复合中点公式把 ∫_a^b w(α) D^α u dα 离散为多项分数阶算子，再交给一维求解器
"""
import numpy as np

from model.errors import DomainError
from model.mesh import Grid1D
from model.problem import DistributionSpec, GridField, MultiTermSpec, Problem1D
from utils.logger import logger

from .solver_1d import solve


def quadrature_nodes(d: DistributionSpec) -> np.ndarray:
    """2J 个中点 α_j = a + (j - 1/2)σ"""
    return d.a + (np.arange(1, 2 * d.j + 1) - 0.5) * d.sigma


def discretize_distribution(d: DistributionSpec) -> MultiTermSpec:
    """
    中点公式离散：阶数 α_j，权重 σ·w(α_j)

    σ = 1/J 时中点不会落在 α = 1 上；一般区间上若恰为 1，按 L1 项处理。
    """
    nodes = quadrature_nodes(d)
    weights = np.array([float(d.weight(alpha)) for alpha in nodes])
    bad = np.flatnonzero(~(weights > 0))
    if bad.size:
        raise DomainError(f"权函数在中点 α={nodes[bad[0]]:.6g} 处不为正: {weights[bad[0]]}")
    return MultiTermSpec.from_pairs(zip(d.sigma * weights, nodes), reaction=d.reaction)


def solve_distributed(
    d: DistributionSpec,
    problem: Problem1D,
    grid: Grid1D,
    backend: str = "fast",
) -> GridField:
    """在 discretize_distribution(d) 得到的多项方程上求解 problem"""
    spec = discretize_distribution(d)
    logger.debug(f"分布阶离散: J={d.j}, σ={d.sigma:.6g}, 项数={len(spec.terms)}")
    return solve(problem.with_spec(spec), grid, backend)
