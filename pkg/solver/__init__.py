from .solver_1d import (
    TimeOperator,
    assemble_rhs,
    solve_stepping,
    solve_fast,
    solve,
    BACKENDS,
)
from .distributed_order import discretize_distribution, solve_distributed, quadrature_nodes
from .solver_2d import assemble_rhs_2d, solve_2d_fast, solve_2d_stepping, solve_2d, BACKENDS_2D


__all__ = [
    "TimeOperator",
    "assemble_rhs",
    "solve_stepping",
    "solve_fast",
    "solve",
    "BACKENDS",
    "discretize_distribution",
    "solve_distributed",
    "quadrature_nodes",
    "assemble_rhs_2d",
    "solve_2d_fast",
    "solve_2d_stepping",
    "solve_2d",
    "BACKENDS_2D",
]
