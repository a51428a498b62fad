"""
紧致差分空间算子
二阶中心差分 δ_x²、四阶紧致平均算子 A_x，以及对应的三对角矩阵 M_x、S_x
"""
from typing import Callable

import numpy as np

from linalg.toeplitz_linalg import TriDiagToeplitz
from model.mesh import SpatialMesh1D


# ∫₀¹ (1-s)³[5 - 3(1-s)²] ds
THETA_INTEGRAL = 0.75


def apply_delta2(v: np.ndarray, mesh: SpatialMesh1D, axis: int = -1) -> np.ndarray:
    """(δ_x² v)_i = (v_{i-1} - 2v_i + v_{i+1})/h²，边界节点置零"""
    v = np.asarray(v, dtype=float)
    mesh.check(v, axis)
    moved = np.moveaxis(v, axis, -1)
    out = np.zeros_like(moved)
    out[..., 1:-1] = (moved[..., :-2] - 2.0 * moved[..., 1:-1] + moved[..., 2:]) / mesh.h ** 2
    return np.moveaxis(out, -1, axis)


def apply_average(v: np.ndarray, mesh: SpatialMesh1D, axis: int = -1) -> np.ndarray:
    """(A_x v)_i = (v_{i-1} + 10v_i + v_{i+1})/12，边界节点保持不变"""
    v = np.asarray(v, dtype=float)
    mesh.check(v, axis)
    moved = np.moveaxis(v, axis, -1)
    out = moved.copy()
    out[..., 1:-1] = (moved[..., :-2] + 10.0 * moved[..., 1:-1] + moved[..., 2:]) / 12.0
    return np.moveaxis(out, -1, axis)


def compact_laplacian_residual(
    w: Callable[[np.ndarray], np.ndarray],
    w_xx: Callable[[np.ndarray], np.ndarray],
    mesh: SpatialMesh1D,
) -> float:
    """max_i |A_x(w'')_i - δ_x²(w)_i|，对 C⁶ 函数为 O(h⁴)"""
    x = mesh.nodes
    residual = apply_average(np.asarray(w_xx(x), dtype=float), mesh) - apply_delta2(
        np.asarray(w(x), dtype=float), mesh
    )
    return float(np.max(np.abs(residual[1:-1])))


def residual_bound(mesh: SpatialMesh1D, max_sixth_derivative: float) -> float:
    """残差上界 (h⁴/360)·max|w⁽⁶⁾|·∫₀¹2θ(s)ds"""
    return mesh.h ** 4 / 360.0 * max_sixth_derivative * 2.0 * THETA_INTEGRAL


# ======================
# 内点矩阵
# ======================
def average_matrix(mesh: SpatialMesh1D) -> TriDiagToeplitz:
    """M_x = tridiag(1/12, 10/12, 1/12)，阶数 M-1"""
    return TriDiagToeplitz(diag=10.0 / 12.0, sub=1.0 / 12.0, sup=1.0 / 12.0, size=mesh.m - 1)


def stiffness_matrix(mesh: SpatialMesh1D) -> TriDiagToeplitz:
    """S_x = tridiag(-1, 2, -1) = -h²δ_x²，阶数 M-1"""
    return TriDiagToeplitz(diag=2.0, sub=-1.0, sup=-1.0, size=mesh.m - 1)
