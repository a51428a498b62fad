from .fractional_kernels import (
    l1_coefficients,
    l2_coefficients,
    coefficients,
    apply_l1,
    apply_l2,
    caputo_monomial,
    caputo_by_quadrature,
)
from .spatial_compact import (
    apply_delta2,
    apply_average,
    compact_laplacian_residual,
    residual_bound,
    average_matrix,
    stiffness_matrix,
    THETA_INTEGRAL,
)


__all__ = [
    "l1_coefficients",
    "l2_coefficients",
    "coefficients",
    "apply_l1",
    "apply_l2",
    "caputo_monomial",
    "caputo_by_quadrature",
    "apply_delta2",
    "apply_average",
    "compact_laplacian_residual",
    "residual_bound",
    "average_matrix",
    "stiffness_matrix",
    "THETA_INTEGRAL",
]
