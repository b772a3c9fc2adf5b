"""Finite-element checks of the bound on two-dimensional domains and caps."""
from .fem import domain_diameter, domain_volume, fem_mu1, smallest_nonzero_eigenpair
from .mesh import Mesh, mesh_rectangle, mesh_star_domain
from .model import ConformalDomain, conformal_factor, model_distance
from .proof import center_of_mass, proof_chain_check
from .revolution import (
    BallProfile,
    PerturbedProfile,
    RevolutionSurface,
    TableProfile,
    gauss_curvature_range,
    intrinsic_diameter,
    revolution_mu1,
)
from .verify import VerificationReport, load_spec, target_from_json, verify_bound, verify_spec

__all__ = [
    "BallProfile",
    "ConformalDomain",
    "Mesh",
    "PerturbedProfile",
    "RevolutionSurface",
    "TableProfile",
    "VerificationReport",
    "center_of_mass",
    "conformal_factor",
    "domain_diameter",
    "domain_volume",
    "fem_mu1",
    "gauss_curvature_range",
    "intrinsic_diameter",
    "load_spec",
    "mesh_rectangle",
    "mesh_star_domain",
    "model_distance",
    "proof_chain_check",
    "revolution_mu1",
    "smallest_nonzero_eigenpair",
    "target_from_json",
    "verify_bound",
    "verify_spec",
]
