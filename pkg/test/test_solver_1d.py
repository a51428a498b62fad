import math

import numpy as np
import pytest
from scipy import special

from experiments.manufactured import example_1
from experiments.refinement import observed_order
from kernels.spatial_compact import average_matrix, stiffness_matrix
from model.errors import ConfigurationError, DomainError
from model.problem import MultiTermSpec, Problem1D
from solver.solver_1d import TimeOperator, assemble_rhs, solve, solve_fast, solve_stepping
from utils.workers import WorkerSettings


def _zero(x):
    return np.zeros_like(x)


def _zero_source(x, t):
    return np.zeros_like(x)


def _relative_gap(a, b):
    return np.max(np.abs(a - b)) / (1.0 + np.max(np.abs(b)))


def _linear_in_time_problem(spec: MultiTermSpec, horizon: float = 1.0) -> Problem1D:
    """
    精确解 u = sin x·(1 + t)

    L1 与修正 L2 对时间线性函数精确，误差只来自空间离散。
    """
    def source(x, t):
        caputo = sum(
            term.weight * (t ** (1.0 - term.order.value) / special.gamma(2.0 - term.order.value)
                           if not term.order.is_wave else 0.0)
            for term in spec.terms
        )
        return np.sin(x) * (caputo + (spec.reaction + 1.0) * (1.0 + t))

    return Problem1D(length=math.pi, horizon=horizon, spec=spec, source=source, phi0=np.sin, phi1=np.sin)


# ======================
# 时间算子
# ======================
@pytest.mark.parametrize("pairs", [[(1.0, 0.5), (1.0, 1.5)], [(2.0, 0.3)], [(1.0, 1.2), (0.5, 1.9)], [(1.0, 1.0), (1.0, 2.0)]])
def test_time_operator_annihilates_constants(pairs):
    """不含反应项时，常数序列（含 u^0）的作用结果为 0"""
    operator = TimeOperator.build(MultiTermSpec.from_pairs(pairs), example_1().problem.grid(16, 4).time)
    result = operator.apply_with_initial(1.0, np.ones(16))
    assert np.max(np.abs(result)) <= 1e-12 * np.max(np.abs(operator.first_column))


def test_time_operator_matvec_matches_dense():
    """matvec 与显式组装的下三角矩阵一致"""
    operator = TimeOperator.build(
        MultiTermSpec.from_pairs([(1.0, 0.4), (1.0, 1.6)], reaction=0.5), example_1().problem.grid(12, 4).time
    )
    n = operator.size
    dense = np.zeros((n, n))
    for row in range(n):
        dense[row, 0] = operator.first_column[row]
        for col in range(1, row + 1):
            dense[row, col] = operator.generator[row - col]
    x = np.random.default_rng(3).standard_normal((n, 2))
    np.testing.assert_allclose(operator.matvec(x), dense @ x, atol=1e-12)


def test_time_operator_scaling_and_velocity():
    """β* 为最大阶；速度权重 2K b_{n-1} τ^{β*-β+1}"""
    time = example_1().problem.grid(8, 4).time
    operator = TimeOperator.build(MultiTermSpec.from_pairs([(1.0, 0.5), (3.0, 1.5)]), time)
    assert operator.scaling == pytest.approx(time.tau ** 1.5)
    assert operator.velocity_weights[0] == pytest.approx(2.0 * 3.0 * time.tau / special.gamma(1.5))


# ======================
# 基本行为
# ======================
@pytest.mark.parametrize("backend", ["fast", "stepping"])
def test_zero_data_gives_zero_field(backend):
    """零源项、零初值、零边界 → 零解"""
    spec = MultiTermSpec.from_pairs([(1.0, 0.5), (1.0, 1.5)])
    problem = Problem1D(length=1.0, horizon=1.0, spec=spec, source=_zero_source, phi0=_zero, phi1=_zero)
    field = solve(problem, problem.grid(8, 8), backend)
    assert np.all(field.values == 0.0)


def test_zero_data_gives_zero_rhs():
    spec = MultiTermSpec.from_pairs([(1.0, 1.5)])
    problem = Problem1D(length=1.0, horizon=1.0, spec=spec, source=_zero_source, phi1=_zero)
    assert np.all(assemble_rhs(problem, problem.grid(4, 6)) == 0.0)


def test_missing_velocity_rejected():
    """含 wave 项却没有 φ1"""
    with pytest.raises(ConfigurationError):
        Problem1D(length=1.0, horizon=1.0, spec=MultiTermSpec.from_pairs([(1.0, 1.5)]), source=_zero_source)


def test_grid_must_match_problem():
    problem = example_1().problem
    from model.mesh import Grid1D
    with pytest.raises(DomainError):
        solve_stepping(problem, Grid1D.build(1.0, 1.0, 4, 4))


def test_unknown_backend():
    problem = example_1().problem
    with pytest.raises(ConfigurationError):
        solve(problem, problem.grid(4, 4), "spectral")


def test_fast_rejects_inhomogeneous_boundary():
    """快速求解器要求齐次边界"""
    problem = Problem1D(
        length=1.0, horizon=1.0, spec=MultiTermSpec.from_pairs([(1.0, 0.5)]),
        source=_zero_source, g0=lambda t: np.ones_like(t),
    )
    with pytest.raises(ConfigurationError):
        solve_fast(problem, problem.grid(4, 4))


# ======================
# 后端一致性
# ======================
@pytest.mark.parametrize("alpha, beta", [(0.5, 1.5), (0.2, 1.2), (0.7, 1.7)])
@pytest.mark.parametrize("n, m", [(8, 8), (16, 16), (32, 8)])
def test_backends_agree_on_example_1(alpha, beta, n, m):
    """非零 φ0、φ1 与反应项"""
    problem = example_1(alpha, beta).problem
    grid = problem.grid(n, m)
    assert _relative_gap(solve_fast(problem, grid).values, solve_stepping(problem, grid).values) <= 1e-11


@pytest.mark.parametrize("pairs, reaction", [
    ([(1.0, 0.3), (2.0, 0.8)], 0.0),
    ([(1.0, 1.3), (0.5, 1.9)], 2.0),
    ([(0.5, 0.2), (1.0, 0.9), (1.5, 1.1), (0.7, 1.6)], 1.0),
])
def test_backends_agree_for_general_specs(pairs, reaction):
    """全 sub、全 wave、多项混合走同一流程"""
    problem = example_1().problem.with_spec(MultiTermSpec.from_pairs(pairs, reaction=reaction))
    grid = problem.grid(16, 8)
    assert _relative_gap(solve_fast(problem, grid).values, solve_stepping(problem, grid).values) <= 1e-11


def test_backends_agree_with_thread_pool():
    """多线程切块与串行结果相同"""
    problem = example_1().problem
    grid = problem.grid(16, 32)
    serial = solve_fast(problem, grid, worker_settings=WorkerSettings(max_workers=1, chunk_size=64))
    pooled = solve_fast(problem, grid, worker_settings=WorkerSettings(max_workers=4, chunk_size=5))
    np.testing.assert_allclose(pooled.values, serial.values, rtol=1e-12, atol=1e-12)


# ======================
# 右端项与参照解的一致性
# ======================
def test_rhs_matches_stepping_solution_with_boundary_data():
    """逐步推进的解代入全时段矩阵方程 T_t U M_x + (τ^{β*}/h²) U S_x = R"""
    spec = MultiTermSpec.from_pairs([(1.0, 0.6), (2.0, 1.4)], reaction=0.5)

    def source(x, t):
        return np.cos(x) * (1.0 + t ** 2)

    problem = Problem1D(
        length=1.0, horizon=0.8, spec=spec, source=source,
        phi0=lambda x: 1.0 + x ** 2, phi1=np.sin,
        g0=lambda t: 1.0 + t, gL=lambda t: 2.0 * np.cos(t),
    )
    grid = problem.grid(12, 10)
    field = solve_stepping(problem, grid)
    operator = TimeOperator.build(spec, grid.time)
    interior = field.interior

    lhs = average_matrix(grid.space).matvec(operator.matvec(interior), axis=1)
    lhs += operator.scaling / grid.space.h ** 2 * stiffness_matrix(grid.space).matvec(interior, axis=1)
    rhs = assemble_rhs(problem, grid)
    assert np.max(np.abs(lhs - rhs)) <= 1e-10 * np.max(np.abs(rhs))


def test_stepping_keeps_boundary_values():
    problem = Problem1D(
        length=1.0, horizon=1.0, spec=MultiTermSpec.from_pairs([(1.0, 0.5)]),
        source=_zero_source, g0=lambda t: t, gL=lambda t: -t,
    )
    field = solve_stepping(problem, problem.grid(4, 4))
    left, right = field.boundary
    np.testing.assert_allclose(left, [0.0, 0.25, 0.5, 0.75, 1.0])
    np.testing.assert_allclose(right, -left)


# ======================
# 退化为三层向后差分
# ======================
def _three_level_reference(problem: Problem1D, n: int, m: int) -> np.ndarray:
    """α = 1、β = 2 时的三层向后差分格式，稠密矩阵逐步求解"""
    grid = problem.grid(n, m)
    tau, h = grid.time.tau, grid.space.h
    c = problem.spec.reaction
    A = average_matrix(grid.space).to_dense()
    S = stiffness_matrix(grid.space).to_dense() / h ** 2
    source = problem.source_values(grid)[:, 1:-1]
    x = grid.space.interior
    u = np.zeros((n + 1, m - 1))
    u[0] = problem.phi0(x)
    phi1 = problem.phi1(x)

    for step in range(1, n + 1):
        if step == 1:
            lhs = (2.0 / tau ** 2 + 1.0 / tau + c) * A + S
            rhs = source[0] + (2.0 / tau ** 2 + 1.0 / tau) * u[0] + 2.0 / tau * phi1
        else:
            lhs = (1.0 / tau ** 2 + 1.0 / tau + c) * A + S
            rhs = source[step - 1] + (2.0 * u[step - 1] - u[step - 2]) / tau ** 2 + u[step - 1] / tau
        u[step] = np.linalg.solve(lhs, A @ rhs)
    return u


@pytest.mark.parametrize("backend", ["stepping", "fast"])
def test_integer_orders_reduce_to_three_level_scheme(backend):
    """α = 1、β = 2 与独立实现的三层格式一致"""
    problem = example_1(1.0, 2.0).problem
    reference = _three_level_reference(problem, 16, 8)
    field = solve(problem, problem.grid(16, 8), backend)
    assert _relative_gap(field.values[:, 1:-1], reference) <= 1e-11


# ======================
# 收敛阶
# ======================
def _final_error(problem, field, exact):
    x = field.grid.space.nodes
    return np.max(np.abs(field.final - exact(x, problem.horizon))[1:-1])


def test_spatial_fourth_order():
    """时间线性的解没有时间误差，空间误差阶 ≈ 4"""
    spec = MultiTermSpec.from_pairs([(1.0, 0.5), (1.0, 1.5)], reaction=1.0)
    problem = _linear_in_time_problem(spec)

    def exact(x, t):
        return np.sin(x) * (1.0 + t)

    errors, steps = [], []
    for m in (8, 16, 32):
        field = solve(problem, problem.grid(4, m), "fast")
        errors.append(_final_error(problem, field, exact))
        steps.append(math.pi / m)
    for k in (1, 2):
        assert observed_order(errors[k - 1], errors[k], steps[k - 1], steps[k]) == pytest.approx(4.0, abs=0.2)


@pytest.mark.parametrize("alpha, beta", [(0.2, 1.2), (0.5, 1.5), (0.7, 1.7)])
def test_temporal_first_order_on_example_1(alpha, beta):
    """M = 16 时空间误差可忽略，时间误差阶 ≈ 1"""
    mp = example_1(alpha, beta)
    errors = []
    for n in (32, 64):
        field = solve(mp.problem, mp.problem.grid(n, 16), "fast")
        errors.append(np.max(np.abs(field.final - mp.exact(field.grid.space.nodes, 1.0))[1:-1]))
    assert math.log2(errors[0] / errors[1]) == pytest.approx(1.0, abs=0.15)
