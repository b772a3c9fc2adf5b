"""First nonzero Neumann eigenvalues of space-form balls and an upper bound for general domains."""
from .bound import (
    BoundBreakdown,
    BoundInput,
    constant_C,
    crossover_diameter,
    matched_radii,
    neumann_upper_bound,
    validate_assumptions,
    wang_constant,
)
from .errors import DomainError, EigenboundError, InfeasibleVolumeError, SolverError
from .radial_eig import RadialProblem, ShootingConfig, first_neumann_eigenvalue, mu1_ball
from .spaceform import SpaceFormBall, ball_volume, radius_from_volume, sin_m, sin_ratio

__version__ = "0.1.0"

__all__ = [
    "BoundBreakdown",
    "BoundInput",
    "DomainError",
    "EigenboundError",
    "InfeasibleVolumeError",
    "RadialProblem",
    "ShootingConfig",
    "SolverError",
    "SpaceFormBall",
    "ball_volume",
    "constant_C",
    "crossover_diameter",
    "first_neumann_eigenvalue",
    "matched_radii",
    "mu1_ball",
    "neumann_upper_bound",
    "radius_from_volume",
    "sin_m",
    "sin_ratio",
    "validate_assumptions",
    "wang_constant",
]
