"""
不变量校验
系数律、二次型非负、能量不等式、正弦变换对合、Toeplitz 分治求解、双后端一致性、构造解残差
"""
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, special

from kernels.fractional_kernels import apply_l1, caputo_by_quadrature, l1_coefficients, l2_coefficients
from linalg.toeplitz_linalg import LinalgSettings, apply_sine_transform, forward_substitution, solve_lower_tri_toeplitz
from model.fractional import TimeSequence
from model.problem import MultiTermSpec
from solver.solver_1d import solve_fast, solve_stepping
from solver.solver_2d import solve_2d_fast, solve_2d_stepping
from utils.logger import logger

from .manufactured import ManufacturedProblem, example_1, example_2, example_3, low_regularity


@dataclass(frozen=True)
class CheckResult:
    """一项校验的结果；worst 为最差实例上的指标（误差或违反量）"""
    name: str
    passed: bool
    cases: int
    worst: float
    detail: str = ""


def _result(name: str, violations: Sequence[float], tolerance: float, detail: str = "") -> CheckResult:
    worst = float(max(violations)) if len(violations) else 0.0
    passed = worst <= tolerance
    log = logger.info if passed else logger.warning
    log(f"[{'PASS' if passed else 'FAIL'}] {name}: {len(violations)} 例, 最差 {worst:.3e} (容差 {tolerance:.0e})")
    return CheckResult(name=name, passed=passed, cases=len(violations), worst=worst, detail=detail)


# ======================
# 系数与离散不等式
# ======================
def coefficient_violation(values: np.ndarray, order: float) -> float:
    """
    L1 型系数表对下列性质的最大违反量（相对 a_0）:
    a_0 = 1/Γ(2-γ)，a_k > 0，严格递减，凸，(1-γ)(k+1)^{-γ} ≤ Γ(2-γ)a_k ≤ (1-γ)k^{-γ}
    """
    a = np.asarray(values)
    scale = 1.0 / special.gamma(2.0 - order)
    k = np.arange(1, a.size, dtype=float)
    lower = (1.0 - order) * (k + 1.0) ** (-order) * scale
    upper = (1.0 - order) * k ** (-order) * scale
    parts = [
        abs(a[0] - scale) / scale,
        np.max(-a, initial=0.0),
        np.max(a[1:] - a[:-1], initial=0.0) / scale,
        np.max(-(a[:-2] - 2.0 * a[1:-1] + a[2:]), initial=0.0) / scale,
        np.max(lower - a[1:], initial=0.0) / scale,
        np.max(a[1:] - upper, initial=0.0) / scale,
    ]
    # 严格递减
    if a.size > 1 and np.any(np.diff(a) >= 0):
        parts.append(1.0)
    return float(max(parts))


def check_coefficient_laws(rng: np.random.Generator, count: int = 50, n: int = 1000) -> CheckResult:
    violations = []
    for _ in range(count):
        alpha = rng.uniform(0.02, 0.98)
        violations.append(coefficient_violation(l1_coefficients(alpha, n).values, alpha))
        beta = rng.uniform(1.02, 1.98)
        violations.append(coefficient_violation(l2_coefficients(beta, n).values, beta - 1.0))
    return _result("coefficient_laws", violations, 1e-12)


def quadratic_form(a: np.ndarray, v: np.ndarray) -> float:
    """Σ_{n=1}^m (Σ_{p=0}^{n-1} a_p v^{n-p}) v^n，v = (v^1..v^m)"""
    conv = np.convolve(a[: v.size], v)[: v.size]
    return float(np.dot(conv, v))


def check_quadratic_form(rng: np.random.Generator, count: int = 100, max_m: int = 64) -> CheckResult:
    violations = []
    for _ in range(count):
        alpha = rng.uniform(0.02, 0.98)
        m = int(rng.integers(1, max_m + 1))
        v = rng.standard_normal(m)
        a = l1_coefficients(alpha, m).values
        value = quadratic_form(a, v)
        scale = float(np.dot(np.abs(np.convolve(a, np.abs(v))[:m]), np.abs(v)))
        violations.append(max(0.0, -value) / scale)
    return _result("quadratic_form", violations, 1e-12)


def energy_gap(values: np.ndarray, alpha: float, tau: float) -> Tuple[float, float]:
    """返回 (v^n δ_t^α v^n - ½ δ_t^α (v^n)², 量级)"""
    lhs = values[-1] * apply_l1(TimeSequence(values, tau), alpha)
    rhs = 0.5 * apply_l1(TimeSequence(values ** 2, tau), alpha)
    return lhs - rhs, abs(lhs) + abs(rhs) + 1.0


def check_energy_inequality(rng: np.random.Generator, count: int = 100, max_n: int = 64) -> CheckResult:
    violations = []
    for _ in range(count):
        alpha = rng.uniform(0.02, 0.98)
        n = int(rng.integers(1, max_n + 1))
        gap, scale = energy_gap(rng.standard_normal(n + 1), alpha, rng.uniform(0.005, 0.2))
        violations.append(max(0.0, -gap) / scale)
    return _result("energy_inequality", violations, 1e-12)


def cumulative_energy_gap(values: np.ndarray, alpha: float, tau: float) -> Tuple[float, float]:
    """
    τ Σ_{n=1}^m v^n δ_t^α v^n 与下界
    ½ τ^{1-α} Σ_{n=1}^m a_{m-n}(v^n)² - t_m^{1-α}/(2Γ(2-α))·(v^0)² 之差
    """
    m = values.size - 1
    a = l1_coefficients(alpha, m).values
    lhs = tau * math.fsum(
        values[n] * apply_l1(TimeSequence(values[: n + 1], tau), alpha) for n in range(1, m + 1)
    )
    squares = values[1:] ** 2
    bound = (
        0.5 * tau ** (1.0 - alpha) * math.fsum(a[::-1] * squares)
        - (m * tau) ** (1.0 - alpha) / (2.0 * special.gamma(2.0 - alpha)) * values[0] ** 2
    )
    return lhs - bound, abs(lhs) + abs(bound) + 1.0


def check_cumulative_energy(rng: np.random.Generator, count: int = 100, max_m: int = 64) -> CheckResult:
    violations = []
    for _ in range(count):
        alpha = rng.uniform(0.02, 0.98)
        m = int(rng.integers(1, max_m + 1))
        gap, scale = cumulative_energy_gap(rng.standard_normal(m + 1), alpha, rng.uniform(0.005, 0.2))
        violations.append(max(0.0, -gap) / scale)
    return _result("cumulative_energy", violations, 1e-11)


# ======================
# 结构化线性代数
# ======================
def check_dst_involution(
    rng: np.random.Generator,
    sizes: Sequence[int] = (1, 7, 63, 64, 255, 1024, 4095),
    settings: Optional[LinalgSettings] = None,
) -> CheckResult:
    errors = []
    for size in sizes:
        v = rng.standard_normal(size)
        back = apply_sine_transform(apply_sine_transform(v, settings=settings), settings=settings)
        errors.append(float(np.max(np.abs(back - v)) / np.max(np.abs(v))))
    return _result("dst_involution", errors, 1e-12)


def check_toeplitz_solver(
    rng: np.random.Generator,
    sizes: Sequence[int] = (17, 64, 100, 1024, 4096),
    settings: Optional[LinalgSettings] = None,
) -> CheckResult:
    """分治求解与 O(N²) 前代的相对偏差；生成元取 L1 差分型序列加对角平移"""
    errors = []
    for size in sizes:
        a = l1_coefficients(rng.uniform(0.1, 0.9), size + 1).values
        d = np.concatenate([[a[0]], a[1:size] - a[: size - 1]])
        shift = rng.uniform(0.5, 2.0)
        g = rng.standard_normal(size)
        fast = solve_lower_tri_toeplitz(d, g, shift=shift, settings=settings)
        dense = d.copy()
        dense[0] += shift
        reference = forward_substitution(dense, g)
        errors.append(float(np.max(np.abs(fast - reference)) / np.max(np.abs(reference))))
    return _result("toeplitz_solver", errors, 1e-11)


# ======================
# 求解器
# ======================
def _equivalence_cases_1d() -> List[Tuple[str, object, int, int]]:
    ex1 = example_1().problem
    return [
        ("ex1(0.5,1.5)", ex1, 16, 8),
        ("ex1(0.5,1.5)", ex1, 32, 16),
        ("ex1(0.2,1.2)", example_1(0.2, 1.2).problem, 16, 16),
        ("ex1(1,2)", example_1(1.0, 2.0).problem, 8, 8),
        ("sub(0.3,0.8)", ex1.with_spec(MultiTermSpec.from_pairs([(1.0, 0.3), (2.0, 0.8)])), 16, 8),
        ("wave(1.3,1.9)+c", ex1.with_spec(MultiTermSpec.from_pairs([(1.0, 1.3), (0.5, 1.9)], reaction=2.0)), 16, 8),
        ("ex2(J=2)", example_2(j=2).problem, 16, 8),
        ("low_reg(1.5)", low_regularity(1.5).problem, 32, 8),
    ]


def _equivalence_cases_2d() -> List[Tuple[str, object, int, int, int]]:
    ex3 = example_3().problem
    return [
        ("ex3(0.75,1.5)", ex3, 8, 8, 8),
        ("ex3(0.75,1.5)", ex3, 16, 8, 4),
        ("ex3(0.3,1.8)", example_3(0.3, 1.8).problem, 8, 4, 8),
        ("ex3 sub(0.5)+c", ex3.with_spec(MultiTermSpec.from_pairs([(1.0, 0.5)], reaction=1.0)), 8, 8, 8),
    ]


def backend_gap(fast: np.ndarray, stepping: np.ndarray) -> float:
    """‖fast - stepping‖∞ / (1 + ‖stepping‖∞)"""
    return float(np.max(np.abs(fast - stepping)) / (1.0 + np.max(np.abs(stepping))))


def check_backend_equivalence() -> List[CheckResult]:
    gaps_1d = []
    for name, problem, n, m in _equivalence_cases_1d():
        grid = problem.grid(n, m)
        gap = backend_gap(solve_fast(problem, grid).values, solve_stepping(problem, grid).values)
        logger.debug(f"后端一致性 {name} (N={n}, M={m}): {gap:.3e}")
        gaps_1d.append(gap)
    gaps_2d = []
    for name, problem, n, m1, m2 in _equivalence_cases_2d():
        grid = problem.grid(n, m1, m2)
        gap = backend_gap(solve_2d_fast(problem, grid).values, solve_2d_stepping(problem, grid).values)
        logger.debug(f"后端一致性 {name} (N={n}, M1={m1}, M2={m2}): {gap:.3e}")
        gaps_2d.append(gap)
    return [
        _result("backend_equivalence_1d", gaps_1d, 1e-11),
        _result("backend_equivalence_2d", gaps_2d, 1e-10),
    ]


# ======================
# 构造解残差
# ======================
def _caputo_of_time_factor(mp: ManufacturedProblem, order: float, t: float) -> float:
    first, second = mp.time_derivatives
    derivative = first if order <= 1.0 else second
    return caputo_by_quadrature(derivative, order, t)


def continuous_residual(mp: ManufacturedProblem, coords: Tuple[float, ...], t: float) -> float:
    """
    精确解代入连续方程的残差，Caputo 导数全部用求积计算

    分布阶项 ∫ w(α) D^α u dα 以 α = 1 为界分两段外层求积。
    """
    problem = mp.problem
    if mp.distribution is not None:
        d = mp.distribution

        def integrand(alpha: float) -> float:
            return d.weight(alpha) * _caputo_of_time_factor(mp, alpha, t)

        pieces = [(lo, hi) for lo, hi in ((d.a, min(d.b, 1.0)), (max(d.a, 1.0), d.b)) if hi > lo]
        time_part = sum(integrate.quad(integrand, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=200)[0] for lo, hi in pieces)
        reaction = d.reaction
    else:
        time_part = sum(
            term.weight * _caputo_of_time_factor(mp, term.order.value, t) for term in problem.spec.terms
        )
        reaction = problem.spec.reaction

    spatial = float(mp.spatial(*coords))
    lhs = spatial * (time_part + (reaction + mp.eigenvalue) * mp.time_factor(t))
    return float(lhs - problem.source(*coords, t))


def _residual_problems() -> List[ManufacturedProblem]:
    return [example_1(), example_1(0.2, 1.2), example_2(), example_3(), low_regularity(3.0)]


def check_manufactured_residual(rng: np.random.Generator, points: int = 20) -> CheckResult:
    residuals = []
    for mp in _residual_problems():
        horizon = mp.problem.horizon
        for _ in range(points):
            t = rng.uniform(0.05 * horizon, horizon)
            coords = tuple(rng.uniform(0.0, math.pi, size=mp.dimension))
            source = float(mp.problem.source(*coords, t))
            residuals.append(abs(continuous_residual(mp, coords, t)) / (1.0 + abs(source)))
    return _result("manufactured_residual", residuals, 1e-8)


# ======================
# 汇总
# ======================
SUITES: List[Tuple[str, Callable[[np.random.Generator], object]]] = [
    ("coefficient_laws", check_coefficient_laws),
    ("quadratic_form", check_quadratic_form),
    ("energy_inequality", check_energy_inequality),
    ("cumulative_energy", check_cumulative_energy),
    ("dst_involution", check_dst_involution),
    ("toeplitz_solver", check_toeplitz_solver),
    ("backend_equivalence", lambda rng: check_backend_equivalence()),
    ("manufactured_residual", check_manufactured_residual),
]


def run_verification(seed: int = 20240601, only: Optional[Sequence[str]] = None) -> List[CheckResult]:
    """依次运行全部（或 only 指定的）校验，返回结果列表"""
    rng = np.random.default_rng(seed)
    results: List[CheckResult] = []
    for name, suite in SUITES:
        if only and name not in only:
            continue
        outcome = suite(rng)
        results.extend(outcome if isinstance(outcome, list) else [outcome])
    return results
