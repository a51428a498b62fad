"""
分数阶核函数
L1 系数（阶数 ∈ (0,1]）、修正 L2 系数（阶数 ∈ (1,2]）、对时间序列的直接作用，
以及构造解析解所需的 Caputo 导数工具
"""
import math
from functools import lru_cache
from typing import Callable, Union

import numpy as np
from scipy import integrate, special

from model.errors import DomainError
from model.fractional import CoefficientTable, OrderLike, TimeSequence, as_order


ArrayLike = Union[float, np.ndarray]


# ======================
# 系数表
# ======================
@lru_cache(maxsize=256)
def _l1_values(alpha: float, n: int) -> np.ndarray:
    """
    a_0 = 1/Γ(2-α)，a_k = [(k+1)^{1-α} - k^{1-α}]/Γ(2-α)

    k ≥ 1 时用 k^{1-α}·expm1((1-α)·log1p(1/k)) 计算差分，避免大 k 时的相消。
    """
    scale = 1.0 / special.gamma(2.0 - alpha)
    values = np.empty(n)
    values[0] = scale
    if n > 1:
        k = np.arange(1, n, dtype=float)
        values[1:] = scale * k ** (1.0 - alpha) * np.expm1((1.0 - alpha) * np.log1p(1.0 / k))
    values.setflags(write=False)
    return values


def _check_count(n: int) -> None:
    if int(n) != n or n < 1:
        raise DomainError(f"系数个数必须为正整数，当前为 {n}")


def l1_coefficients(alpha: OrderLike, n: int) -> CoefficientTable:
    """L1 系数表 a_0..a_{n-1}，要求 0 < α ≤ 1"""
    order = as_order(alpha)
    if order.is_wave:
        raise DomainError(f"L1 逼近要求 0 < α ≤ 1，当前为 {order.value}")
    _check_count(n)
    return CoefficientTable(order=order, values=_l1_values(order.value, int(n)), kind="L1")


def l2_coefficients(beta: OrderLike, n: int) -> CoefficientTable:
    """修正 L2 系数表 b_0..b_{n-1}，b_k^(β) = a_k^(β-1)，要求 1 < β ≤ 2"""
    order = as_order(beta)
    if not order.is_wave:
        raise DomainError(f"L2 逼近要求 1 < β ≤ 2，当前为 {order.value}")
    _check_count(n)
    return CoefficientTable(order=order, values=_l1_values(order.value - 1.0, int(n)), kind="L2")


def coefficients(order: OrderLike, n: int) -> CoefficientTable:
    """按阶数自动选择 L1 / L2 系数表"""
    order = as_order(order)
    return l2_coefficients(order, n) if order.is_wave else l1_coefficients(order, n)


# ======================
# 直接作用
# ======================
def apply_l1(seq: TimeSequence, alpha: OrderLike) -> float:
    """
    δ_t^α v^n = τ^{-α}[a_0 v^n - Σ_{k=1}^{n-1}(a_{n-k-1} - a_{n-k}) v^k - a_{n-1} v^0]

    按 k 从旧到新累加，使用补偿求和。
    """
    n = seq.steps
    if n < 1:
        raise DomainError("L1 逼近需要 v^0 之后至少一步")
    order = as_order(alpha)
    a = l1_coefficients(order, n).values
    v = seq.values

    k = np.arange(1, n)
    history = -(a[n - k - 1] - a[n - k]) * v[1:n]
    terms = [-a[n - 1] * v[0], *history, a[0] * v[n]]
    return math.fsum(terms) * seq.tau ** (-order.value)


def apply_l2(seq: TimeSequence, beta: OrderLike, v_prime_0: float) -> float:
    """
    Δ_t^β v^n - 2 b_{n-1} τ^{1-β} v'(0)

    Δ_t^β v^n = τ^{-β}[Σ_{k=2}^{n} b_{n-k}(v^k - 2v^{k-1} + v^{k-2}) + 2 b_{n-1}(v^1 - v^0)]
    """
    n = seq.steps
    if n < 1:
        raise DomainError("L2 逼近需要 v^0 之后至少一步")
    order = as_order(beta)
    b = l2_coefficients(order, n).values
    v = seq.values
    tau = seq.tau

    k = np.arange(2, n + 1)
    second = b[n - k] * (v[2:n + 1] - 2.0 * v[1:n] + v[0:n - 1])
    terms = [2.0 * b[n - 1] * (v[1] - v[0]), *second]
    return (
        math.fsum(terms) * tau ** (-order.value)
        - 2.0 * b[n - 1] * tau ** (1.0 - order.value) * v_prime_0
    )


# ======================
# Caputo 导数工具
# ======================
def caputo_monomial(p: float, order: OrderLike, t: ArrayLike) -> ArrayLike:
    """
    t^p 的 Caputo 导数

    p 为整数且 p ≤ ⌈γ⌉-1 时为 0；否则为 Γ(p+1)/Γ(p+1-γ)·t^{p-γ}。
    γ ∈ (1,2] 时要求 p ∈ {0, 1} 或 p > 1。
    """
    gamma_order = as_order(order).value
    if p < 0:
        raise DomainError(f"幂次必须非负，当前为 {p}")
    ceil_order = math.ceil(gamma_order)
    is_integer = float(p).is_integer()
    if not is_integer and p < ceil_order - 1:
        raise DomainError(f"t^{p} 的 {gamma_order} 阶 Caputo 导数在 0 处不可积")
    if np.any(np.asarray(t) <= 0):
        raise DomainError("Caputo 导数只在 t > 0 处求值")

    if is_integer and p <= ceil_order - 1:
        return np.zeros_like(np.asarray(t, dtype=float)) if np.ndim(t) else 0.0
    coefficient = special.gamma(p + 1.0) / special.gamma(p + 1.0 - gamma_order)
    return coefficient * np.power(t, p - gamma_order)


def caputo_by_quadrature(
    derivative: Callable[[float], float], order: OrderLike, t: float
) -> float:
    """
    用自适应求积直接计算 Caputo 导数

    derivative 为 v 的 ⌈γ⌉ 阶导数；积分核 (t-s)^{⌈γ⌉-γ-1} 交给 quad 的代数权处理。
    """
    gamma_order = as_order(order).value
    ceil_order = math.ceil(gamma_order)
    if float(gamma_order).is_integer():
        return float(derivative(t))
    exponent = ceil_order - gamma_order - 1.0
    value, _ = integrate.quad(
        derivative, 0.0, t, weight="alg", wvar=(0.0, exponent), epsabs=1e-13, epsrel=1e-12, limit=200
    )
    return value / special.gamma(ceil_order - gamma_order)
