"""Maximum-entropy reconstruction of densities on [0, 1] from power or
shifted-Chebyshev moments."""

from .basis import (
    BasisKind,
    BasisMatrix,
    MomentVector,
    build_basis_matrix,
    compute_moments,
    eval_shifted_chebyshev,
)
from .diagnostics import (
    DiagnosticsReport,
    GapEstimate,
    delta1,
    delta2,
    diagnose,
    entropy_of,
    estimate_gap,
    kl_and_variation,
)
from .errors import DomainError, ExponentRangeError, SolverError
from .quadrature import QuadratureRule, build_gauss_legendre, integrate
from .solver import Reconstruction, SolverConfig, StepStrategy, dual_gradient, dual_objective, solve

__version__ = "0.1.0"
