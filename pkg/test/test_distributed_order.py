import math

import numpy as np
import pytest
from scipy import special

from experiments.refinement import observed_order
from kernels.fractional_kernels import caputo_monomial
from model.errors import DomainError
from model.problem import DistributionSpec, Problem1D
from solver.distributed_order import discretize_distribution, quadrature_nodes, solve_distributed
from solver.solver_1d import solve


# ======================
# 求积节点与权重
# ======================
def test_nodes_on_default_interval():
    """[0, 2] 上 J = 2：σ = 1/2，节点 1/4, 3/4, 5/4, 7/4"""
    d = DistributionSpec(weight=lambda alpha: 1.0, j=2)
    assert d.sigma == pytest.approx(0.5)
    np.testing.assert_allclose(quadrature_nodes(d), [0.25, 0.75, 1.25, 1.75])


def test_nodes_on_general_interval():
    d = DistributionSpec(weight=lambda alpha: 1.0, j=2, a=0.5, b=1.5)
    np.testing.assert_allclose(quadrature_nodes(d), [0.625, 0.875, 1.125, 1.375])


def test_constant_weight_sums_to_integral():
    """w ≡ c 时 σ·Σ w(α_j) = 2c"""
    spec = discretize_distribution(DistributionSpec(weight=lambda alpha: 3.0, j=5))
    assert len(spec.terms) == 10
    assert sum(term.weight for term in spec.terms) == pytest.approx(6.0)


def test_affine_weight_integrated_exactly():
    """中点公式对一次函数精确: ∫₀² (1 + α) dα = 4"""
    spec = discretize_distribution(DistributionSpec(weight=lambda alpha: 1.0 + alpha, j=3))
    assert sum(term.weight for term in spec.terms) == pytest.approx(4.0)


def test_terms_split_into_sub_and_wave():
    d = DistributionSpec(weight=lambda alpha: special.gamma(4.0 - alpha), j=2, reaction=0.5)
    spec = discretize_distribution(d)
    assert [term.order.value for term in spec.terms] == pytest.approx([0.25, 0.75, 1.25, 1.75])
    assert len(spec.sub_terms) == 2 and len(spec.wave_terms) == 2
    assert spec.terms[0].weight == pytest.approx(0.5 * special.gamma(3.75))
    assert spec.reaction == 0.5


def test_non_positive_weight_rejected():
    """w(α) = 1 - α 在 α > 1 的中点处为负"""
    with pytest.raises(DomainError):
        discretize_distribution(DistributionSpec(weight=lambda alpha: 1.0 - alpha, j=2))


@pytest.mark.parametrize("kwargs", [{"j": 0}, {"j": 1.5}, {"j": 2, "a": 1.0, "b": 1.0}, {"j": 2, "b": 2.5}])
def test_invalid_distribution(kwargs):
    with pytest.raises(DomainError):
        DistributionSpec(weight=lambda alpha: 1.0, **kwargs)


# ======================
# 求解
# ======================
def _sub_distribution_problem(j: int):
    """
    ∫₀¹ Γ(2-α) D^α u dα = u_xx + f，精确解 u = sin x·t

    ∫₀¹ Γ(2-α) D^α t dα = (t - 1)/ln t；L1 对 t 精确，误差只来自 σ 与空间。
    """
    d = DistributionSpec(weight=lambda alpha: special.gamma(2.0 - alpha), j=j, a=0.0, b=1.0)

    def source(x, t):
        return np.sin(x) * ((t - 1.0) / math.log(t) + t)

    problem = Problem1D(length=math.pi, horizon=0.5, spec=discretize_distribution(d), source=source)
    return d, problem


def test_solve_distributed_is_multi_term_solve():
    d, problem = _sub_distribution_problem(3)
    grid = problem.grid(8, 16)
    expected = solve(problem.with_spec(discretize_distribution(d)), grid)
    assert np.array_equal(solve_distributed(d, problem, grid).values, expected.values)


def test_sigma_second_order():
    """σ 减半误差约降为 1/4"""
    errors, steps = [], []
    for j in (2, 4, 8):
        d, problem = _sub_distribution_problem(j)
        field = solve_distributed(d, problem, problem.grid(8, 64))
        x = field.grid.space.nodes
        errors.append(np.max(np.abs(field.final - np.sin(x) * 0.5)[1:-1]))
        steps.append(d.sigma)
    assert observed_order(errors[1], errors[2], steps[1], steps[2]) == pytest.approx(2.0, abs=0.2)
    assert observed_order(errors[0], errors[1], steps[0], steps[1]) > 1.6


def test_space_fourth_order_for_mixed_distribution():
    """
    [0, 2] 上 w(α) = Γ(4-α)，精确解 u = sin x·t

    源项按离散后的各项构造，σ 误差为零；L1 与修正 L2 对 t 精确，误差只来自空间。
    """
    d = DistributionSpec(weight=lambda alpha: special.gamma(4.0 - alpha), j=16)
    spec = discretize_distribution(d)

    def source(x, t):
        caputo = sum(term.weight * caputo_monomial(1, term.order, t) for term in spec.terms)
        return np.sin(x) * (caputo + t)

    problem = Problem1D(length=math.pi, horizon=1.0, spec=spec, source=source, phi1=np.sin)
    errors, steps = [], []
    for m in (4, 6, 8):
        field = solve_distributed(d, problem, problem.grid(4, m))
        errors.append(np.max(np.abs(field.final - np.sin(field.grid.space.nodes))[1:-1]))
        steps.append(math.pi / m)
    orders = [observed_order(errors[k], errors[k + 1], steps[k], steps[k + 1]) for k in range(2)]
    assert all(3.7 <= order <= 4.3 for order in orders)
