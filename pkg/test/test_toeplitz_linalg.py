import numpy as np
import pytest
from scipy import linalg

from linalg.toeplitz_linalg import (
    LinalgSettings,
    TriDiagToeplitz,
    apply_sine_transform,
    forward_substitution,
    sine_spectrum,
    solve_lower_tri_toeplitz,
    toeplitz_matvec,
)
from model.errors import DomainError, SingularMatrixError


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def _well_conditioned_generator(rng, size):
    """对角占优的下三角 Toeplitz 首列"""
    d = rng.standard_normal(size) / (np.arange(size) + 1.0) ** 2 * 0.3
    d[0] = 2.0
    return d


# ======================
# 三对角矩阵与正弦变换
# ======================
def test_linalg_settings_from_config(mocker):
    """从配置的 linalg 段读取"""
    mocker.patch(
        "linalg.toeplitz_linalg.get_config",
        return_value={"linalg": {"dst_direct_threshold": 8, "toeplitz_base_case": 0}},
    )
    settings = LinalgSettings.from_config()
    assert settings.dst_direct_threshold == 8
    assert settings.toeplitz_base_case == 1


def test_tridiagonal_matvec_matches_dense(rng):
    """matvec 与稠密矩阵一致（含非对称）"""
    T = TriDiagToeplitz(diag=3.0, sub=-1.0, sup=0.5, size=9)
    v = rng.standard_normal(9)
    np.testing.assert_allclose(T.matvec(v), T.to_dense() @ v, rtol=1e-14)
    block = rng.standard_normal((9, 4))
    np.testing.assert_allclose(T.matvec(block, axis=0), T.to_dense() @ block, rtol=1e-14)


def test_symmetric_spectrum_matches_eigvalsh():
    """对称情形的特征值"""
    T = TriDiagToeplitz(diag=10 / 12, sub=1 / 12, sup=1 / 12, size=15)
    spectrum = sine_spectrum(T)
    assert spectrum.scaling is None
    np.testing.assert_allclose(np.sort(spectrum.eigenvalues), np.linalg.eigvalsh(T.to_dense()), atol=1e-13)


@pytest.mark.parametrize("sub, sup", [(-1.0, -1.0), (1.0, 4.0), (-2.0, -0.5)])
def test_spectrum_diagonalizes(rng, sub, sup):
    """T v = D Q Λ Q D^{-1} v，以及 T^{-1}"""
    T = TriDiagToeplitz(diag=5.0, sub=sub, sup=sup, size=20)
    spectrum = sine_spectrum(T)
    v = rng.standard_normal(20)
    dense = T.to_dense()
    np.testing.assert_allclose(spectrum.apply(v), dense @ v, atol=1e-11 * np.abs(dense).sum() * np.abs(v).max())
    np.testing.assert_allclose(spectrum.solve(dense @ v), v, atol=1e-8)


def test_complex_spectrum_rejected():
    """a·c < 0 时特征值为复数"""
    with pytest.raises(DomainError):
        sine_spectrum(TriDiagToeplitz(diag=2.0, sub=1.0, sup=-1.0, size=4))


@pytest.mark.parametrize("size", [1, 2, 7, 63, 64, 255, 1024, 4095])
def test_sine_transform_involution(rng, size):
    """Q(Qv) = v"""
    v = rng.standard_normal(size)
    back = apply_sine_transform(apply_sine_transform(v))
    assert np.max(np.abs(back - v)) <= 1e-12 * np.max(np.abs(v))


def test_dense_and_fft_paths_agree(rng):
    """稠密正弦矩阵与 DST-I 结果一致"""
    v = rng.standard_normal((3, 100))
    dense = apply_sine_transform(v, settings=LinalgSettings(dst_direct_threshold=1000, toeplitz_base_case=32))
    fast = apply_sine_transform(v, settings=LinalgSettings(dst_direct_threshold=2, toeplitz_base_case=32))
    np.testing.assert_allclose(dense, fast, atol=1e-12)


def test_sine_transform_rejects_empty():
    with pytest.raises(DomainError):
        apply_sine_transform(np.zeros(0))


# ======================
# Toeplitz 矩阵向量乘
# ======================
@pytest.mark.parametrize("m, n", [(1, 1), (5, 5), (7, 3), (3, 8), (256, 256)])
def test_toeplitz_matvec_matches_dense(rng, m, n):
    """FFT 循环嵌入与稠密 Toeplitz 一致"""
    col = rng.standard_normal(m)
    row = rng.standard_normal(n)
    row[0] = col[0]
    x = rng.standard_normal(n)
    dense = linalg.toeplitz(col, row)
    np.testing.assert_allclose(toeplitz_matvec(col, row, x), dense @ x, atol=1e-12 * max(1.0, np.abs(dense @ x).max()))


def test_toeplitz_matvec_batched(rng):
    """x 为 (n, k) 时逐列相乘"""
    col = rng.standard_normal(6)
    row = np.concatenate([[col[0]], rng.standard_normal(5)])
    x = rng.standard_normal((6, 3))
    np.testing.assert_allclose(toeplitz_matvec(col, row, x), linalg.toeplitz(col, row) @ x, atol=1e-12)


def test_toeplitz_matvec_corner_mismatch():
    with pytest.raises(DomainError):
        toeplitz_matvec(np.array([1.0, 2.0]), np.array([3.0, 4.0]), np.ones(2))


# ======================
# 下三角 Toeplitz 求解
# ======================
def test_scalar_and_identity_systems():
    """N = 1 与单位矩阵"""
    np.testing.assert_allclose(solve_lower_tri_toeplitz(np.array([5.0]), np.array([10.0])), [2.0])
    g = np.array([1.0, -2.0, 3.0, 4.0])
    np.testing.assert_allclose(solve_lower_tri_toeplitz(np.array([1.0, 0.0, 0.0, 0.0]), g), g)


@pytest.mark.parametrize("size", [17, 64, 100, 128, 1024])
def test_divide_and_conquer_matches_forward_substitution(rng, size):
    """分治求解与 O(N²) 前代一致（含非 2 的幂）"""
    d = _well_conditioned_generator(rng, size)
    g = rng.standard_normal(size)
    fast = solve_lower_tri_toeplitz(d, g, settings=LinalgSettings(dst_direct_threshold=64, toeplitz_base_case=8))
    reference = forward_substitution(d, g)
    assert np.max(np.abs(fast - reference)) <= 1e-11 * np.max(np.abs(reference))


def test_batched_shifts(rng):
    """每列一个对角平移"""
    size = 50
    d = _well_conditioned_generator(rng, size)
    g = rng.standard_normal((size, 3))
    shifts = np.array([0.0, 0.5, 3.0])
    solved = solve_lower_tri_toeplitz(d, g, shift=shifts)
    for column, shift in enumerate(shifts):
        shifted = d.copy()
        shifted[0] += shift
        np.testing.assert_allclose(solved[:, column], forward_substitution(shifted, g[:, column]), rtol=1e-11, atol=1e-13)


def test_zero_diagonal_is_singular():
    with pytest.raises(SingularMatrixError):
        solve_lower_tri_toeplitz(np.array([0.0, 1.0]), np.ones(2))
    with pytest.raises(SingularMatrixError):
        solve_lower_tri_toeplitz(np.array([1.0, 1.0]), np.ones(2), shift=-1.0)
    with pytest.raises(SingularMatrixError):
        forward_substitution(np.array([[1.0, 0.0], [1.0, 0.0]]), np.ones(2))


def test_short_generator_rejected():
    with pytest.raises(DomainError):
        solve_lower_tri_toeplitz(np.array([1.0, 0.5]), np.ones(3))


def test_forward_substitution_examples(rng):
    """单位矩阵、2×2 算例、随机稠密下三角"""
    g = np.array([3.0, -1.0])
    np.testing.assert_allclose(forward_substitution(np.eye(2), g), g)
    np.testing.assert_allclose(forward_substitution(np.array([[2.0, 0.0], [1.0, 2.0]]), np.array([2.0, 3.0])), [1.0, 1.0])

    L = np.tril(rng.standard_normal((64, 64))) * 0.1 / 8
    np.fill_diagonal(L, 2.0 + rng.random(64))
    b = rng.standard_normal(64)
    np.testing.assert_allclose(forward_substitution(L, b), np.linalg.solve(L, b), atol=1e-12)
