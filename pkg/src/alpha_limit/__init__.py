"""Eigenvalue location on trees and limit points of A_alpha spectral radii."""

from .alpha_theory import (
    AlphaLambda,
    F0,
    F1,
    F2,
    F3,
    alpha_star,
    corollary_crossover,
    cubic_discriminant_d,
    phi,
    quartic_P_alpha,
    tau0,
    tau1_interval,
    tau2,
)
from .diagonalize import (
    DiagResult,
    SpectralRadiusResult,
    count_eigenvalues_greater,
    dense_spectrum_oracle,
    diagonalize,
    spectral_radius,
)
from .shearer import (
    ConvergenceReport,
    ShearerSequence,
    build_shearer,
    convergence_report,
    divergence_sum,
    epsilon_roots,
    pairing_check,
    sigma_bound,
    verify_window,
)
from .trees import (
    CaterpillarSpec,
    RootedTree,
    WeightedTreeMatrix,
    a_alpha_weights,
    make_caterpillar,
    make_path,
    make_starlike_1nn,
)

__all__ = [
    "AlphaLambda",
    "CaterpillarSpec",
    "ConvergenceReport",
    "DiagResult",
    "F0",
    "F1",
    "F2",
    "F3",
    "RootedTree",
    "ShearerSequence",
    "SpectralRadiusResult",
    "WeightedTreeMatrix",
    "a_alpha_weights",
    "alpha_star",
    "build_shearer",
    "convergence_report",
    "corollary_crossover",
    "count_eigenvalues_greater",
    "cubic_discriminant_d",
    "dense_spectrum_oracle",
    "diagonalize",
    "divergence_sum",
    "epsilon_roots",
    "make_caterpillar",
    "make_path",
    "make_starlike_1nn",
    "pairing_check",
    "phi",
    "quartic_P_alpha",
    "sigma_bound",
    "spectral_radius",
    "tau0",
    "tau1_interval",
    "tau2",
    "verify_window",
]
