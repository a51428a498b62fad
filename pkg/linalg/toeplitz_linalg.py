"""
结构化线性代数
三对角 Toeplitz 矩阵的正弦变换谱分解、FFT 加速的 Toeplitz 矩阵向量乘、
下三角 Toeplitz 方程组的分治求解
"""
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Union

import numpy as np
from scipy import fft, linalg

from config import get_config
from model.errors import DomainError, SingularMatrixError
from utils.logger import logger


ShiftLike = Union[None, float, np.ndarray]


@dataclass(frozen=True)
class LinalgSettings:
    """线性代数参数"""
    dst_direct_threshold: int
    toeplitz_base_case: int

    @classmethod
    def from_config(cls) -> "LinalgSettings":
        """从配置文件加载"""
        section = get_config()["linalg"]
        return cls(
            dst_direct_threshold=int(section["dst_direct_threshold"]),
            toeplitz_base_case=max(1, int(section["toeplitz_base_case"])),
        )


# ======================
# 三对角 Toeplitz 矩阵与谱分解
# ======================
@dataclass(frozen=True)
class TriDiagToeplitz:
    """
    (n-1) 阶三对角 Toeplitz 矩阵

    diag 为主对角元 b，sub 为下次对角元 a，sup 为上次对角元 c。
    """
    diag: float
    sub: float
    sup: float
    size: int

    def __post_init__(self) -> None:
        if int(self.size) != self.size or self.size < 1:
            raise DomainError(f"矩阵阶数必须 ≥ 1，当前为 {self.size}")

    @property
    def is_symmetric(self) -> bool:
        return self.sub == self.sup

    def to_dense(self) -> np.ndarray:
        column = np.zeros(self.size)
        row = np.zeros(self.size)
        column[0] = row[0] = self.diag
        if self.size > 1:
            column[1] = self.sub
            row[1] = self.sup
        return linalg.toeplitz(column, row)

    def matvec(self, v: np.ndarray, axis: int = -1) -> np.ndarray:
        """沿 axis 方向作用矩阵"""
        v = np.moveaxis(np.asarray(v, dtype=float), axis, -1)
        if v.shape[-1] != self.size:
            raise DomainError(f"向量长度 {v.shape[-1]} 与矩阵阶数 {self.size} 不一致")
        out = self.diag * v
        out[..., 1:] += self.sub * v[..., :-1]
        out[..., :-1] += self.sup * v[..., 1:]
        return np.moveaxis(out, -1, axis)


@dataclass(frozen=True)
class SineSpectrum:
    """
    T = D·Q·diag(λ)·Q·D^{-1} 形式的谱分解

    Q 为正交且自逆的正弦变换；对称矩阵时 scaling 为 None（D = I），
    否则 scaling 为 D 的对角元 (a/c)^{j/2}，j = 0..n-2。
    """
    size: int
    eigenvalues: np.ndarray = field(repr=False)
    scaling: Optional[np.ndarray] = field(default=None, repr=False)

    def apply(self, v: np.ndarray, axis: int = -1) -> np.ndarray:
        """用谱分解计算 T v"""
        return self._through_modes(v, self.eigenvalues, axis)

    def solve(self, v: np.ndarray, axis: int = -1) -> np.ndarray:
        """用谱分解计算 T^{-1} v"""
        if np.any(self.eigenvalues == 0):
            raise SingularMatrixError("三对角矩阵存在零特征值")
        return self._through_modes(v, 1.0 / self.eigenvalues, axis)

    def _through_modes(self, v: np.ndarray, factors: np.ndarray, axis: int) -> np.ndarray:
        v = np.moveaxis(np.asarray(v, dtype=float), axis, -1)
        if self.scaling is not None:
            v = v / self.scaling
        modes = apply_sine_transform(v, axis=-1) * factors
        out = apply_sine_transform(modes, axis=-1)
        if self.scaling is not None:
            out = out * self.scaling
        return np.moveaxis(out, -1, axis)


def sine_spectrum(T: TriDiagToeplitz) -> SineSpectrum:
    """
    三对角 Toeplitz 矩阵的特征值 λ_i = b + 2a·sqrt(c/a)·cos(iπ/n)，i = 1..n-1

    a·c ≤ 0 且 a ≠ c 时谱为复数，不支持。
    """
    n = T.size + 1
    i = np.arange(1, n)
    if T.is_symmetric:
        eigenvalues = T.diag + 2.0 * T.sub * np.cos(i * np.pi / n)
        scaling = None
    elif T.sub * T.sup > 0:
        off = np.sign(T.sub) * np.sqrt(T.sub * T.sup)
        eigenvalues = T.diag + 2.0 * off * np.cos(i * np.pi / n)
        scaling = (T.sub / T.sup) ** (np.arange(T.size) / 2.0)
        scaling.setflags(write=False)
    else:
        raise DomainError(f"a·c ≤ 0 且 a ≠ c（a={T.sub}, c={T.sup}），谱为复数")
    eigenvalues.setflags(write=False)
    return SineSpectrum(size=T.size, eigenvalues=eigenvalues, scaling=scaling)


# ======================
# 正弦变换
# ======================
@lru_cache(maxsize=64)
def _sine_matrix(size: int) -> np.ndarray:
    """Q_{ij} = sqrt(2/M)·sin(ijπ/M)，M = size + 1"""
    m = size + 1
    index = np.arange(1, m)
    matrix = np.sqrt(2.0 / m) * np.sin(np.outer(index, index) * np.pi / m)
    matrix.setflags(write=False)
    return matrix


def apply_sine_transform(
    v: np.ndarray, axis: int = -1, settings: Optional[LinalgSettings] = None
) -> np.ndarray:
    """
    计算 Q v（沿 axis 方向，Q = Qᵀ = Q⁻¹）

    长度小于阈值时直接与稠密正弦矩阵相乘，否则走 FFT 实现的 DST-I。
    """
    if settings is None:
        settings = LinalgSettings.from_config()
    v = np.asarray(v, dtype=float)
    size = v.shape[axis]
    if size < 1:
        raise DomainError("正弦变换的输入不能为空")
    if size < max(settings.dst_direct_threshold, 2):
        moved = np.moveaxis(v, axis, -1)
        return np.moveaxis(moved @ _sine_matrix(size), -1, axis)
    return fft.dst(v, type=1, norm="ortho", axis=axis)


# ======================
# Toeplitz 矩阵向量乘
# ======================
def toeplitz_matvec(first_col: np.ndarray, first_row: np.ndarray, x: np.ndarray) -> np.ndarray:
    """
    y = T x，T 由首列与首行确定

    嵌入到长度 ≥ m+n-1 的循环矩阵中用实 FFT 计算；x 可以是 (n,) 或 (n, k)。
    """
    col = np.asarray(first_col, dtype=float)
    row = np.asarray(first_row, dtype=float)
    x = np.asarray(x, dtype=float)
    if col.size == 0 or row.size == 0:
        raise DomainError("Toeplitz 生成元不能为空")
    if col[0] != row[0]:
        raise DomainError(f"首列与首行的角元不一致: {col[0]} != {row[0]}")
    m, n = col.size, row.size
    if x.shape[0] != n:
        raise DomainError(f"向量长度 {x.shape[0]} 与矩阵列数 {n} 不一致")

    length = fft.next_fast_len(m + n - 1, real=True)
    circulant = np.zeros(length)
    circulant[:m] = col
    if n > 1:
        circulant[length - n + 1:] = row[1:][::-1]

    spectrum = fft.rfft(circulant)
    if x.ndim > 1:
        spectrum = spectrum.reshape((-1,) + (1,) * (x.ndim - 1))
    product = fft.irfft(spectrum * fft.rfft(x, n=length, axis=0), n=length, axis=0)
    return product[:m]


# ======================
# 下三角 Toeplitz 求解
# ======================
def _diagonal(d: np.ndarray, shift: ShiftLike) -> np.ndarray:
    diagonal = d[0] + (0.0 if shift is None else np.asarray(shift, dtype=float))
    if np.any(diagonal == 0):
        raise SingularMatrixError("下三角 Toeplitz 矩阵对角元为零")
    return diagonal


def _forward_toeplitz(d: np.ndarray, g: np.ndarray, diagonal: np.ndarray) -> np.ndarray:
    """生成元形式的逐行前代，g 可带批量维"""
    x = np.zeros(g.shape, dtype=float)
    for i in range(g.shape[0]):
        x[i] = (g[i] - d[i:0:-1] @ x[:i]) / diagonal
    return x


def _divide_and_conquer(d: np.ndarray, g: np.ndarray, diagonal: np.ndarray, base: int) -> np.ndarray:
    size = g.shape[0]
    if size <= base:
        return _forward_toeplitz(d, g, diagonal)

    # 按 ⌈N/2⌉ / ⌊N/2⌋ 拆分，左下块为 Toeplitz：首列 d[n1:N]，首行 d[n1], ..., d[1]
    n1 = (size + 1) // 2
    upper = _divide_and_conquer(d, g[:n1], diagonal, base)
    coupling = toeplitz_matvec(d[n1:size], d[n1:0:-1], upper)
    lower = _divide_and_conquer(d, g[n1:] - coupling, diagonal, base)
    return np.concatenate([upper, lower], axis=0)


def solve_lower_tri_toeplitz(
    d: np.ndarray,
    g: np.ndarray,
    shift: ShiftLike = None,
    settings: Optional[LinalgSettings] = None,
) -> np.ndarray:
    """
    求解首列为 d 的 N 阶下三角 Toeplitz 方程组 (T + shift·I) x = g

    g 可以是 (N,) 或 (N, k)；shift 为标量或长度 k 的数组（每列一个对角平移）。
    平移只改变对角元，非对角块与之无关，所以一批模态可以共用一次分治。
    """
    if settings is None:
        settings = LinalgSettings.from_config()
    d = np.asarray(d, dtype=float)
    g = np.asarray(g, dtype=float)
    size = g.shape[0]
    if d.ndim != 1 or d.size < size:
        raise DomainError(f"生成元长度 {d.size} 小于方程组阶数 {size}")
    diagonal = _diagonal(d, shift)
    logger.debug(f"下三角 Toeplitz 分治求解: N={size}, 批量={g.shape[1:] or 1}")
    return _divide_and_conquer(d, g, diagonal, settings.toeplitz_base_case)


def forward_substitution(L: np.ndarray, g: np.ndarray) -> np.ndarray:
    """
    O(N²) 前代求解（分治求解的参照解）

    L 可以是完整的下三角矩阵，也可以是下三角 Toeplitz 矩阵的首列。
    """
    L = np.asarray(L, dtype=float)
    g = np.asarray(g, dtype=float)
    if L.ndim == 1:
        if L.size < g.shape[0]:
            raise DomainError(f"生成元长度 {L.size} 小于方程组阶数 {g.shape[0]}")
        L = linalg.toeplitz(L[: g.shape[0]], np.zeros(g.shape[0]))
    if L.ndim != 2 or L.shape[0] != L.shape[1] or L.shape[0] != g.shape[0]:
        raise DomainError(f"矩阵形状 {L.shape} 与右端 {g.shape} 不匹配")
    if np.any(np.diag(L) == 0):
        raise SingularMatrixError("下三角矩阵对角元为零")
    return linalg.solve_triangular(L, g, lower=True)
