"""
一维多项时间分数阶混合扩散-波动方程的紧致差分求解器

两个后端:
- solve_stepping: 逐步推进，每步直接累加历史项，三对角求解（参照解）
- solve_fast: 全时段矩阵方程，空间正弦变换部分对角化后
  分解为 M-1 个带对角平移的下三角 Toeplitz 方程组，分治求解
"""
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from kernels.fractional_kernels import coefficients, l1_coefficients, l2_coefficients
from kernels.spatial_compact import apply_average, apply_delta2, average_matrix, stiffness_matrix
from linalg.toeplitz_linalg import (
    LinalgSettings,
    apply_sine_transform,
    sine_spectrum,
    solve_lower_tri_toeplitz,
    toeplitz_matvec,
)
from model.errors import ConfigurationError, SingularMatrixError
from model.mesh import Grid1D, TimeMesh
from model.problem import FractionalTerm, GridField, MultiTermSpec, Problem1D
from utils.logger import logger
from utils.workers import WorkerSettings, map_chunks


# ======================
# 全时段时间算子
# ======================
def _shifted(values: np.ndarray, k: int) -> np.ndarray:
    """out[m] = values[m-k]，越界部分为 0"""
    out = np.zeros_like(values)
    if k < len(values):
        out[k:] = values[: len(values) - k]
    return out


@dataclass(frozen=True)
class TimeOperator:
    """
    缩放后的全时段时间矩阵 τ^{β*}·(Σ_j K_j D^{γ_j} + c)

    未知量为 u^1..u^N。矩阵第一列为 first_column，其余列是以 generator 为
    首列的下三角 Toeplitz 矩阵；initial_weights[n-1] 为第 n 行中 u^0 的系数，
    velocity_weights[n-1] 为第 n 行右端中 φ1 的系数。
    """
    first_column: np.ndarray = field(repr=False)
    generator: np.ndarray = field(repr=False)
    initial_weights: np.ndarray = field(repr=False)
    velocity_weights: np.ndarray = field(repr=False)
    scaling: float

    @classmethod
    def build(cls, spec: MultiTermSpec, mesh: TimeMesh) -> "TimeOperator":
        n, tau = mesh.n, mesh.tau
        beta_star = spec.scaling_order
        first_column = np.zeros(n)
        generator = np.zeros(n)
        initial = np.zeros(n)
        velocity = np.zeros(n)

        for term in spec.terms:
            gamma = term.order.value
            scale = term.weight * tau ** (beta_star - gamma)
            if term.order.is_wave:
                b = l2_coefficients(term.order, n).values
                b1, b2 = _shifted(b, 1), _shifted(b, 2)
                generator += scale * (b - 2.0 * b1 + b2)
                first_column += scale * (2.0 * b - 2.0 * b1 + b2)
                initial += scale * (b1 - 2.0 * b)
                velocity += 2.0 * term.weight * tau ** (beta_star - gamma + 1.0) * b
            else:
                a = l1_coefficients(term.order, n).values
                steps = a - _shifted(a, 1)
                generator += scale * steps
                first_column += scale * steps
                initial -= scale * a

        reaction = spec.reaction * tau ** beta_star
        generator[0] += reaction
        first_column[0] += reaction

        for array in (first_column, generator, initial, velocity):
            array.setflags(write=False)
        return cls(
            first_column=first_column,
            generator=generator,
            initial_weights=initial,
            velocity_weights=velocity,
            scaling=tau ** beta_star,
        )

    @property
    def size(self) -> int:
        return len(self.generator)

    def matvec(self, x: np.ndarray) -> np.ndarray:
        """作用于 u^1..u^N（沿第 0 轴），x 可带尾随维"""
        x = np.asarray(x, dtype=float)
        row = np.zeros(self.size)
        row[0] = self.generator[0]
        toeplitz_part = toeplitz_matvec(self.generator, row, x.reshape(self.size, -1))
        result = toeplitz_part.reshape(x.shape)
        return result + np.multiply.outer(self.first_column - self.generator, x[0])

    def apply_with_initial(self, initial: np.ndarray, x: np.ndarray) -> np.ndarray:
        """含 u^0 贡献的作用结果"""
        return self.matvec(x) + np.multiply.outer(self.initial_weights, np.asarray(initial, dtype=float))


# ======================
# 公共检查
# ======================
def _check_ready(problem: Problem1D, grid: Grid1D) -> None:
    grid.check_problem(problem.length, problem.horizon)
    if problem.spec.wave_terms and problem.phi1 is None:
        raise ConfigurationError("方程含阶数 > 1 的项，必须给出初始速度 phi1")


def spatial_eigenvalues(mesh) -> Tuple[np.ndarray, np.ndarray]:
    """M_x 与 S_x 的特征值 λ^(1)、λ^(2)"""
    return (
        sine_spectrum(average_matrix(mesh)).eigenvalues,
        sine_spectrum(stiffness_matrix(mesh)).eigenvalues,
    )


# ======================
# 右端项组装
# ======================
def assemble_rhs(problem: Problem1D, grid: Grid1D) -> np.ndarray:
    """
    矩阵方程 T_t·U·M_x + (τ^{β*}/h²)·U·S_x = R 的右端 R，形状 (N, M-1)

    第 n 行包含 τ^{β*}A_x F^n、速度修正、u^0 历史项，以及边界值经
    A_x、δ_x² 模板带入的提升项。
    """
    _check_ready(problem, grid)
    operator = TimeOperator.build(problem.spec, grid.time)
    space = grid.space

    source = problem.source_values(grid)
    phi0 = problem.initial_values(space)
    phi1 = problem.initial_velocity(space)
    left, right = problem.boundary_values(grid.time)

    # 已知部分: u^n (n ≥ 1) 只有边界值
    known = np.zeros((grid.time.n, space.m + 1))
    known[:, 0] = left
    known[:, -1] = right

    rhs = operator.scaling * apply_average(source, space)
    rhs += np.multiply.outer(operator.velocity_weights, apply_average(phi1, space))
    rhs -= apply_average(operator.apply_with_initial(phi0, known), space)
    rhs += operator.scaling * apply_delta2(known, space)
    return rhs[:, 1:-1]


# ======================
# 逐步推进（参照解）
# ======================
def history_terms(
    tables: Sequence[Tuple[FractionalTerm, np.ndarray]],
    reaction: float,
    values: np.ndarray,
    n: int,
    tau: float,
    velocity: np.ndarray,
) -> Tuple[float, np.ndarray]:
    """
    第 n 步的 u^n 系数与已知历史项

    方程整理为 coef·u^n = history + (未知空间项)；values[0..n-1] 为已算出的各层。
    """
    coef = reaction
    history = np.zeros_like(values[0])
    for term, table in tables:
        gamma, weight = term.order.value, term.weight
        if term.order.is_wave:
            b = table
            if n == 1:
                coef += weight * 2.0 * b[0] * tau ** (-gamma)
                known = -2.0 * b[0] * values[0]
            else:
                coef += weight * b[0] * tau ** (-gamma)
                k = np.arange(2, n)
                second = values[2:n] - 2.0 * values[1:n - 1] + values[0:n - 2]
                known = (
                    2.0 * b[n - 1] * (values[1] - values[0])
                    + b[0] * (values[n - 2] - 2.0 * values[n - 1])
                    + np.tensordot(b[n - k], second, axes=1)
                )
            history += -weight * tau ** (-gamma) * known
            history += 2.0 * weight * b[n - 1] * tau ** (1.0 - gamma) * velocity
        else:
            a = table
            coef += weight * a[0] * tau ** (-gamma)
            k = np.arange(1, n)
            past = np.tensordot(a[n - k - 1] - a[n - k], values[1:n], axes=1) + a[n - 1] * values[0]
            history += weight * tau ** (-gamma) * past
    return coef, history


def coefficient_tables(spec: MultiTermSpec, n: int) -> List[Tuple[FractionalTerm, np.ndarray]]:
    return [(term, coefficients(term.order, n).values) for term in spec.terms]


def _solve_tridiagonal(diag: float, off: float, rhs: np.ndarray) -> np.ndarray:
    size = rhs.shape[0]
    banded = np.zeros((3, size))
    banded[0, 1:] = off
    banded[1, :] = diag
    banded[2, :-1] = off
    try:
        return linalg.solve_banded((1, 1), banded, rhs)
    except np.linalg.LinAlgError as e:
        raise SingularMatrixError(f"三对角方程组奇异: {e}") from e


def solve_stepping(problem: Problem1D, grid: Grid1D) -> GridField:
    """
    逐步推进求解 n = 1..N

    每步求解 coef·A_x u^n - δ_x² u^n = A_x(F^n + history)，
    非齐次 Dirichlet 边界值移到右端。
    """
    _check_ready(problem, grid)
    space, time = grid.space, grid.time
    n_steps, h = time.n, space.h
    logger.debug(f"逐步推进求解: N={n_steps}, M={space.m}, 项数={len(problem.spec.terms)}")

    values = np.zeros((n_steps + 1, space.m + 1))
    values[0] = problem.initial_values(space)
    left, right = problem.boundary_values(time)
    values[1:, 0] = left
    values[1:, -1] = right

    source = problem.source_values(grid)
    velocity = problem.initial_velocity(space)
    tables = coefficient_tables(problem.spec, n_steps)

    for n in range(1, n_steps + 1):
        coef, history = history_terms(tables, problem.spec.reaction, values, n, time.tau, velocity)
        rhs = apply_average(source[n - 1] + history, space)[1:-1]
        diag = coef * 10.0 / 12.0 + 2.0 / h ** 2
        off = coef / 12.0 - 1.0 / h ** 2
        rhs[0] -= off * values[n, 0]
        rhs[-1] -= off * values[n, -1]
        values[n, 1:-1] = _solve_tridiagonal(diag, off, rhs)

    return GridField(grid=grid, values=values)


# ======================
# 快速求解
# ======================
def solve_mode_systems(
    operator: TimeOperator,
    modes: np.ndarray,
    shifts: np.ndarray,
    linalg_settings: Optional[LinalgSettings] = None,
    worker_settings: Optional[WorkerSettings] = None,
) -> np.ndarray:
    """
    并行求解各模态的时间方程组 (T_t + s_i I) v_i = g_i

    modes 形状 (N, P)，每列一个模态；第一列的非 Toeplitz 部分先消去，
    剩余 N-1 阶方程组交给分治求解。
    """
    if linalg_settings is None:
        linalg_settings = LinalgSettings.from_config()
    n_steps, n_modes = modes.shape

    def solve_chunk(chunk: slice) -> np.ndarray:
        g = modes[:, chunk]
        shift = shifts[chunk]
        head_diagonal = operator.first_column[0] + shift
        if np.any(head_diagonal == 0):
            raise SingularMatrixError("时间矩阵首个对角元为零")
        head = g[0] / head_diagonal
        if n_steps == 1:
            return head[np.newaxis]
        tail_rhs = g[1:] - np.outer(operator.first_column[1:], head)
        tail = solve_lower_tri_toeplitz(
            operator.generator[: n_steps - 1], tail_rhs, shift=shift, settings=linalg_settings
        )
        return np.vstack([head[np.newaxis], tail])

    logger.debug(f"模态方程组: N={n_steps}, 模态数={n_modes}")
    parts = map_chunks(solve_chunk, n_modes, worker_settings)
    return np.concatenate(parts, axis=1)


def solve_fast(
    problem: Problem1D,
    grid: Grid1D,
    linalg_settings: Optional[LinalgSettings] = None,
    worker_settings: Optional[WorkerSettings] = None,
) -> GridField:
    """
    全时段快速求解（要求齐次 Dirichlet 边界）

    空间方向正弦变换后 M_x、S_x 同时对角化，第 i 个模态的对角平移为
    (λ_i^(2)/λ_i^(1))·τ^{β*}/h²。
    """
    _check_ready(problem, grid)
    left, right = problem.boundary_values(grid.time)
    if np.any(left != 0.0) or np.any(right != 0.0):
        raise ConfigurationError("快速求解器只支持齐次 Dirichlet 边界，非齐次边界请使用 stepping 后端")
    if linalg_settings is None:
        linalg_settings = LinalgSettings.from_config()

    space = grid.space
    operator = TimeOperator.build(problem.spec, grid.time)
    rhs = assemble_rhs(problem, grid)

    lam1, lam2 = spatial_eigenvalues(space)
    shifts = lam2 / lam1 * operator.scaling / space.h ** 2
    modes = apply_sine_transform(rhs, axis=1, settings=linalg_settings) / lam1
    solved = solve_mode_systems(operator, modes, shifts, linalg_settings, worker_settings)

    values = np.zeros((grid.time.n + 1, space.m + 1))
    values[0] = problem.initial_values(space)
    values[1:, 1:-1] = apply_sine_transform(solved, axis=1, settings=linalg_settings)
    return GridField(grid=grid, values=values)


# ======================
# 后端注册表
# ======================
Solver1D = Callable[[Problem1D, Grid1D], GridField]

BACKENDS: Dict[str, Solver1D] = {
    "fast": solve_fast,
    "stepping": solve_stepping,
}


def solve(problem: Problem1D, grid: Grid1D, backend: str = "fast") -> GridField:
    """按名称选择后端求解"""
    try:
        solver = BACKENDS[backend]
    except KeyError:
        raise ConfigurationError(f"未知求解后端: {backend}（可选: {', '.join(BACKENDS)}）")
    return solver(problem, grid)
