"""
二维矩形区域上的紧致差分求解器（齐次 Dirichlet 边界）

先 y 后 x 两次正弦变换同时对角化 A_x、A_y、δ_x²、δ_y²，
每个模态对 (i, j) 对应一个带对角平移的下三角 Toeplitz 时间方程组。
"""
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from kernels.spatial_compact import apply_average
from linalg.toeplitz_linalg import LinalgSettings, apply_sine_transform
from model.errors import ConfigurationError
from model.mesh import Grid2D, SpatialMesh2D
from model.problem import GridField2D, Problem2D
from utils.logger import logger
from utils.workers import WorkerSettings

from .solver_1d import (
    TimeOperator,
    spatial_eigenvalues,
    coefficient_tables,
    history_terms,
    solve_mode_systems,
)


def _check_ready(problem: Problem2D, grid: Grid2D) -> None:
    grid.check_problem(problem.length_x, problem.length_y, problem.horizon)
    if problem.spec.wave_terms and problem.phi1 is None:
        raise ConfigurationError("方程含阶数 > 1 的项，必须给出初始速度 phi1")
    if not problem.boundary_is_zero(grid):
        raise ConfigurationError("二维求解器只支持齐次 Dirichlet 边界")


def _average_xy(values: np.ndarray, space: SpatialMesh2D) -> np.ndarray:
    """A_y A_x，作用在最后两个轴上"""
    return apply_average(apply_average(values, space.x, axis=-2), space.y, axis=-1)


def _to_modes(values: np.ndarray, settings: LinalgSettings) -> np.ndarray:
    """先 y 后 x 的二维正弦变换（最后两个轴）"""
    return apply_sine_transform(apply_sine_transform(values, axis=-1, settings=settings), axis=-2, settings=settings)


def _from_modes(values: np.ndarray, settings: LinalgSettings) -> np.ndarray:
    return apply_sine_transform(apply_sine_transform(values, axis=-2, settings=settings), axis=-1, settings=settings)


def _mode_factors(space: SpatialMesh2D) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """返回 λ1x⊗λ1y、λ2x/h1²⊗λ1y、λ1x⊗λ2y/h2²"""
    lam1x, lam2x = spatial_eigenvalues(space.x)
    lam1y, lam2y = spatial_eigenvalues(space.y)
    return (
        np.outer(lam1x, lam1y),
        np.outer(lam2x / space.h1 ** 2, lam1y),
        np.outer(lam1x, lam2y / space.h2 ** 2),
    )


def assemble_rhs_2d(problem: Problem2D, grid: Grid2D) -> np.ndarray:
    """二维矩阵方程的右端，形状 (N, M1-1, M2-1)"""
    _check_ready(problem, grid)
    operator = TimeOperator.build(problem.spec, grid.time)
    space = grid.space
    rhs = operator.scaling * _average_xy(problem.source_values(grid), space)
    rhs += np.multiply.outer(operator.velocity_weights, _average_xy(problem.initial_velocity(space), space))
    rhs -= np.multiply.outer(operator.initial_weights, _average_xy(problem.initial_values(space), space))
    return rhs[:, 1:-1, 1:-1]


def solve_2d_fast(
    problem: Problem2D,
    grid: Grid2D,
    linalg_settings: Optional[LinalgSettings] = None,
    worker_settings: Optional[WorkerSettings] = None,
) -> GridField2D:
    """
    全时段快速求解

    模态对 (i, j) 的对角平移为 (λ_i^(2)/λ_i^(1)/h1² + λ_j^(2)/λ_j^(1)/h2²)·τ^{β*}。
    """
    _check_ready(problem, grid)
    if linalg_settings is None:
        linalg_settings = LinalgSettings.from_config()
    space = grid.space
    n_steps = grid.time.n
    operator = TimeOperator.build(problem.spec, grid.time)
    rhs = assemble_rhs_2d(problem, grid)

    mass, stiff_x, stiff_y = _mode_factors(space)
    shifts = operator.scaling * (stiff_x + stiff_y) / mass
    modes = _to_modes(rhs, linalg_settings) / mass
    interior_shape = mass.shape
    logger.debug(f"二维快速求解: N={n_steps}, 模态对={mass.size}")

    solved = solve_mode_systems(
        operator,
        modes.reshape(n_steps, -1),
        shifts.ravel(),
        linalg_settings,
        worker_settings,
    ).reshape((n_steps,) + interior_shape)

    values = np.zeros((n_steps + 1,) + space.shape)
    values[0] = problem.initial_values(space)
    values[1:, 1:-1, 1:-1] = _from_modes(solved, linalg_settings)
    return GridField2D(grid=grid, values=values)


def solve_2d_stepping(
    problem: Problem2D,
    grid: Grid2D,
    linalg_settings: Optional[LinalgSettings] = None,
) -> GridField2D:
    """逐步推进求解（参照解），每步的椭圆型方程在模态空间中直接求解"""
    _check_ready(problem, grid)
    if linalg_settings is None:
        linalg_settings = LinalgSettings.from_config()
    space, time = grid.space, grid.time
    mass, stiff_x, stiff_y = _mode_factors(space)

    values = np.zeros((time.n + 1,) + space.shape)
    values[0] = problem.initial_values(space)
    source = problem.source_values(grid)
    velocity = problem.initial_velocity(space)
    tables = coefficient_tables(problem.spec, time.n)

    for n in range(1, time.n + 1):
        coef, history = history_terms(tables, problem.spec.reaction, values, n, time.tau, velocity)
        rhs = _average_xy(source[n - 1] + history, space)[1:-1, 1:-1]
        modes = _to_modes(rhs, linalg_settings) / (coef * mass + stiff_x + stiff_y)
        values[n, 1:-1, 1:-1] = _from_modes(modes, linalg_settings)

    return GridField2D(grid=grid, values=values)


# ======================
# 后端注册表
# ======================
Solver2D = Callable[[Problem2D, Grid2D], GridField2D]

BACKENDS_2D: Dict[str, Solver2D] = {
    "fast": solve_2d_fast,
    "stepping": solve_2d_stepping,
}


def solve_2d(problem: Problem2D, grid: Grid2D, backend: str = "fast") -> GridField2D:
    """按名称选择二维后端求解"""
    try:
        solver = BACKENDS_2D[backend]
    except KeyError:
        raise ConfigurationError(f"未知求解后端: {backend}（可选: {', '.join(BACKENDS_2D)}）")
    return solver(problem, grid)
