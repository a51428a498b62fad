from .toeplitz_linalg import (
    LinalgSettings,
    TriDiagToeplitz,
    SineSpectrum,
    sine_spectrum,
    apply_sine_transform,
    toeplitz_matvec,
    solve_lower_tri_toeplitz,
    forward_substitution,
)


__all__ = [
    "LinalgSettings",
    "TriDiagToeplitz",
    "SineSpectrum",
    "sine_spectrum",
    "apply_sine_transform",
    "toeplitz_matvec",
    "solve_lower_tri_toeplitz",
    "forward_substitution",
]
