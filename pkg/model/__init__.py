from .errors import (
    FracdwError,
    DomainError,
    ConfigurationError,
    SingularMatrixError,
    RefinementError,
)
from .fractional import FractionalOrder, CoefficientTable, TimeSequence, as_order, SUB, WAVE
from .mesh import TimeMesh, SpatialMesh1D, SpatialMesh2D, Grid1D, Grid2D
from .problem import (
    FractionalTerm,
    MultiTermSpec,
    DistributionSpec,
    Problem1D,
    Problem2D,
    GridField,
    GridField2D,
)


__all__ = [
    "FracdwError",
    "DomainError",
    "ConfigurationError",
    "SingularMatrixError",
    "RefinementError",
    "FractionalOrder",
    "CoefficientTable",
    "TimeSequence",
    "as_order",
    "SUB",
    "WAVE",
    "TimeMesh",
    "SpatialMesh1D",
    "SpatialMesh2D",
    "Grid1D",
    "Grid2D",
    "FractionalTerm",
    "MultiTermSpec",
    "DistributionSpec",
    "Problem1D",
    "Problem2D",
    "GridField",
    "GridField2D",
]
