"""saddlekit: saddle-point computation and certification for convex-concave
games on compact domains, plus the spectral reduction for PSD quadratic
games on unbounded ones."""

from .domains import Ball, Box, Domain, FinitePointSet, QuadratureGrid, Simplex, domain_from_dict
from .errors import (
    DegenerateGameError,
    DimensionMismatchError,
    EvaluationError,
    MembershipError,
    ProblemFormatError,
    SaddlekitError,
    UnsupportedDomainError,
)
from .merit import (
    MeritContext,
    MeritSolveResult,
    build_context,
    merit_gradient,
    merit_value,
    minimize_merit,
    pair_gap,
    skew_symmetry_residual,
    squared_positive_part_slope,
    variation_inequality,
)
from .minimax import (
    DualityGapError,
    MinimaxEstimate,
    SaddleCandidate,
    grid_minimax,
    proposition1_converse,
    proposition1_forward,
    verify_saddle,
    weak_duality_check,
)
from .objectives import (
    BilinearObjective,
    BlackBoxObjective,
    GradientPair,
    QuadraticGameObjective,
    check_convex_concave,
    evaluate,
    gradients,
)
from .quadratic import (
    QuadraticGame,
    QuadraticSolveReport,
    SpectralData,
    ball_radius,
    in_image,
    inner_min,
    solve_quadratic_game,
    spectral_decompose,
    verify_saddle_chain,
)
from .solvers import MeritSaddleSolver, QuadraticGameSolver

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "BilinearObjective",
    "BlackBoxObjective",
    "Box",
    "DegenerateGameError",
    "DimensionMismatchError",
    "Domain",
    "DualityGapError",
    "EvaluationError",
    "FinitePointSet",
    "GradientPair",
    "MembershipError",
    "MeritContext",
    "MeritSaddleSolver",
    "MeritSolveResult",
    "MinimaxEstimate",
    "ProblemFormatError",
    "QuadraticGame",
    "QuadraticGameObjective",
    "QuadraticGameSolver",
    "QuadraticSolveReport",
    "QuadratureGrid",
    "SaddleCandidate",
    "SaddlekitError",
    "Simplex",
    "SpectralData",
    "UnsupportedDomainError",
    "ball_radius",
    "build_context",
    "check_convex_concave",
    "domain_from_dict",
    "evaluate",
    "grid_minimax",
    "gradients",
    "in_image",
    "inner_min",
    "merit_gradient",
    "merit_value",
    "minimize_merit",
    "pair_gap",
    "proposition1_converse",
    "proposition1_forward",
    "skew_symmetry_residual",
    "solve_quadratic_game",
    "spectral_decompose",
    "squared_positive_part_slope",
    "variation_inequality",
    "verify_saddle",
    "verify_saddle_chain",
    "weak_duality_check",
]
