"""End-to-end check of mu_1(Omega) <= C mu_1(B_k(R)) on a meshed domain or a cap."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Union

from ..bound import BoundBreakdown, BoundInput, constant_C
from ..errors import DomainError
from .fem import domain_diameter, domain_volume, fem_mu1
from .mesh import mesh_star_domain
from .model import ConformalDomain
from .revolution import RevolutionSurface, gauss_curvature_range, intrinsic_diameter, revolution_mu1, surface_from_json

# relative excess of mu_1 over the bound tolerated as discretization error
REPORT_TOLERANCE = 1e-3
# 8-neighbour graph distances overestimate geodesic distance by at most this factor
STENCIL_BAND = 1.08


@dataclass
class MeshLevel:
    h: float
    mu1: float
    volume: float
    diameter: float
    bound_value: float
    margin: float
    size: int


@dataclass
class VerificationReport:
    kind: str
    name: str
    K: float
    k: float
    mu1_domain: float
    volume: float
    diameter: float
    breakdown: BoundBreakdown
    satisfied: bool
    margin: float
    mesh_size: float
    tolerance: float = REPORT_TOLERANCE
    levels: list = field(default_factory=list)
    observed_order: Optional[float] = None
    diameter_band: Optional[tuple] = None
    breakdown_upper: Optional[BoundBreakdown] = None

    @property
    def assumptions_ok(self) -> bool:
        return self.breakdown.assumptions.ok

    def as_dict(self) -> dict:
        out = asdict(self)
        out["assumptions_ok"] = self.assumptions_ok
        if self.diameter_band is not None:
            out["diameter_band"] = list(self.diameter_band)
        return out


def _richardson(coarse, fine):
    # second-order discretizations on (h, h/2)
    return (4.0 * fine - coarse) / 3.0


def _margin(bound, mu):
    return (bound - mu) / bound


def _order(levels):
    a, b = abs(levels[0].margin), abs(levels[1].margin)
    if a > 0 and b > 0:
        return math.log2(a / b)
    return None


def _verify_conformal(domain: ConformalDomain, h: float, K, k, tolerance) -> VerificationReport:
    kappa = domain.curvature
    K = kappa if K is None else K
    k = kappa if k is None else k
    if not (K <= kappa <= k):
        raise DomainError(f"need K <= kappa <= k, got {K}, {kappa}, {k}")
    levels = []
    for hh in (h, h / 2):
        mesh = mesh_star_domain(domain, hh)
        mu = fem_mu1(mesh, kappa).mu
        V = domain_volume(mesh, kappa)
        d = domain_diameter(domain, mesh, kappa)
        b = constant_C(BoundInput(2, k, K, V, d)).bound_value
        levels.append(MeshLevel(hh, mu, V, d, b, _margin(b, mu), mesh.n_vertices))
    mu = _richardson(levels[0].mu1, levels[1].mu1)
    V = _richardson(levels[0].volume, levels[1].volume)
    d = levels[1].diameter
    breakdown = constant_C(BoundInput(2, k, K, V, d))
    bound = breakdown.bound_value
    return VerificationReport(
        kind="conformal",
        name=domain.name,
        K=K,
        k=k,
        mu1_domain=mu,
        volume=V,
        diameter=d,
        breakdown=breakdown,
        satisfied=bool(mu <= bound * (1 + tolerance)),
        margin=_margin(bound, mu),
        mesh_size=h,
        tolerance=tolerance,
        levels=levels,
        observed_order=_order(levels),
    )


def _verify_revolution(surface: RevolutionSurface, h: float, K, k, tolerance) -> VerificationReport:
    K_s, k_s = gauss_curvature_range(surface)
    K = K_s if K is None else K
    k = k_s if k is None else k
    if K > K_s + 1e-12 or k < k_s - 1e-12:
        raise DomainError(f"curvature range [{K_s}, {k_s}] is not inside [{K}, {k}]")
    L = surface.cap_radius
    V = surface.area()
    d_hi = intrinsic_diameter(surface)
    d_lo = d_hi / STENCIL_BAND
    levels = []
    N = max(50, math.ceil(L / h))
    for grid in (N, 2 * N):
        mu = revolution_mu1(surface, grid=grid)
        b = constant_C(BoundInput(2, k, K, V, d_lo)).bound_value
        levels.append(MeshLevel(L / grid, mu, V, d_lo, b, _margin(b, mu), grid + 1))
    mu = _richardson(levels[0].mu1, levels[1].mu1)
    # the lower diameter gives the smaller constant, i.e. the stronger check
    lower = constant_C(BoundInput(2, k, K, V, d_lo))
    upper = constant_C(BoundInput(2, k, K, V, d_hi))
    return VerificationReport(
        kind="revolution",
        name=surface.name,
        K=K,
        k=k,
        mu1_domain=mu,
        volume=V,
        diameter=d_lo,
        breakdown=lower,
        satisfied=bool(mu <= lower.bound_value * (1 + tolerance) and mu <= upper.bound_value * (1 + tolerance)),
        margin=_margin(lower.bound_value, mu),
        mesh_size=L / N,
        tolerance=tolerance,
        levels=levels,
        observed_order=_order(levels),
        diameter_band=(d_lo, d_hi),
        breakdown_upper=upper,
    )


def verify_bound(
    target: Union[ConformalDomain, RevolutionSurface],
    h: float,
    K: Optional[float] = None,
    k: Optional[float] = None,
    tolerance: float = REPORT_TOLERANCE,
) -> VerificationReport:
    """Measure (V, d, mu_1) at mesh sizes h and h/2, extrapolate, and compare with the bound.

    Conformal domains default to (K, k) = (kappa, kappa); caps default to the
    sampled range of their Gauss curvature. ``satisfied`` means the
    extrapolated mu_1 does not exceed the bound by more than ``tolerance``
    (relative).
    """
    if isinstance(target, ConformalDomain):
        return _verify_conformal(target, h, K, k, tolerance)
    if isinstance(target, RevolutionSurface):
        return _verify_revolution(target, h, K, k, tolerance)
    raise TypeError(f"cannot verify {type(target).__name__}")


def target_from_json(spec: dict):
    """Build a domain or surface from a spec dict; returns (target, mesh_h, K, k)."""
    kind = spec.get("type")
    h = float(spec.get("mesh_h", 0.02))
    K = spec.get("K")
    k = spec.get("k")
    name = spec.get("name", "")
    if kind == "conformal":
        fourier = spec.get("fourier", {})
        a = fourier.get("a")
        if not a:
            raise DomainError("conformal spec needs fourier.a")
        target = ConformalDomain(
            float(spec["curvature"]), a, fourier.get("b", []), tuple(spec.get("center", (0.0, 0.0))), name=name
        )
    elif kind == "revolution":
        target = surface_from_json(spec)
    else:
        raise DomainError(f"unknown domain type {kind!r}")
    return target, h, K, k


def load_spec(path: Union[str, Path]) -> dict:
    with open(path) as fh:
        spec = json.load(fh)
    spec.setdefault("name", Path(path).stem)
    return spec


def verify_spec(spec: dict, h: Optional[float] = None, tolerance: float = REPORT_TOLERANCE) -> VerificationReport:
    target, h_spec, K, k = target_from_json(spec)
    return verify_bound(target, h if h is not None else h_spec, K=K, k=k, tolerance=tolerance)
