"""Upper bound mu_1(Omega) <= C mu_1(B_k(R)) and Wang's comparison constant.

Inputs are the dimension n, the sectional upper bound k, the Ricci lower bound
(n-1)K, the volume V and the diameter d of the domain.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .radial_eig import (
    DEFAULT_CONFIG,
    RadialEigenpair,
    RadialProblem,
    ShootingConfig,
    eval_f,
    first_neumann_eigenvalue,
    gradient_energy_density,
)
from .spaceform import antipodal_distance, radius_from_volume, sin_m, sin_ratio, total_volume

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(6)


@dataclass(frozen=True)
class BoundInput:
    dim: int
    k: float
    K: float
    volume: float
    diameter: float

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 2:
            raise DomainError(f"dimension must be an integer >= 2, got {self.dim}")
        if not (math.isfinite(self.k) and math.isfinite(self.K)):
            raise DomainError("curvature bounds must be finite")
        if self.K > self.k:
            raise DomainError(f"need K <= k, got K={self.K}, k={self.k}")
        for name in ("volume", "diameter"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise DomainError(f"{name} must be positive and finite, got {value}")


@dataclass(frozen=True)
class AssumptionReport:
    """Size conditions required when k > 0.

    ``cond_A_ok`` / ``cond_B_ok`` are None when k <= 0 (not applicable).
    Condition B is tested against V, a lower bound for the hull volume, so
    a failure is a genuine violation while a pass is only indicative.
    """

    requires_size_conditions: bool
    cond_A_ok: Optional[bool]
    cond_B_ok: Optional[bool]
    K_le_k: bool
    cond_B_is_proxy: bool = True

    @property
    def ok(self) -> bool:
        return self.K_le_k and self.cond_A_ok is not False and self.cond_B_ok is not False


@dataclass(frozen=True)
class BoundBreakdown:
    R: float
    R_prime: float
    mu1_ball: float
    ratio_R: float
    ratio_d: float
    integral_num: float
    integral_den: float
    C: float
    wang: float
    bound_value: float
    assumptions: AssumptionReport

    def as_dict(self) -> dict:
        return asdict(self)


def matched_radii(n: int, k: float, K: float, V: float) -> tuple[float, float]:
    """Radii R, R' of the balls in M_k and M_K whose volume is V (R' <= R)."""
    R = radius_from_volume(k, n, V)
    R_prime = R if K == k else radius_from_volume(K, n, V)
    return R, R_prime


def _check_diameter(k, d):
    if not d > 0:
        raise DomainError(f"diameter must be positive, got {d}")
    if k > 0 and d >= 0.5 * antipodal_distance(k):
        raise DomainError(f"diameter {d} violates d < pi/(2 sqrt(k)) = {0.5 * antipodal_distance(k)}")


def wang_constant(n: int, k: float, K: float, d: float) -> float:
    """(sin_K(d) / sin_k(d))^(2n-2)."""
    _check_diameter(k, d)
    return sin_ratio(K, k, d) ** (2 * n - 2)


def radial_integral(pair: RadialEigenpair, m: float, upper: float, weight=None) -> float:
    """Integral over [0, upper] of weight(r) sin_m(r)^(n-1), weight defaulting to f^2.

    Composite six-point Gauss rule on the eigenpair grid (clipped at ``upper``);
    f is the cubic Hermite interpolant of the solver output.
    """
    n = pair.problem.dim
    grid = pair.grid[pair.grid < upper]
    edges = np.append(grid, upper)
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    r = (0.5 * (a + b))[:, None] + half[:, None] * _GL_NODES[None, :]
    values = eval_f(pair, r) ** 2 if weight is None else weight(r)
    values = values * sin_m(m, r) ** (n - 1)
    return float(np.sum(half[:, None] * _GL_WEIGHTS[None, :] * values))


def validate_assumptions(n, k, K, V, d, injectivity_radius=None) -> AssumptionReport:
    """Report on K <= k and, for k > 0, conditions A (diameter) and B (half volume)."""
    K_le_k = K <= k
    if k <= 0:
        return AssumptionReport(False, None, None, K_le_k)
    limit = 0.5 * antipodal_distance(k)
    if injectivity_radius is not None:
        limit = min(limit, injectivity_radius)
    cond_A = d < limit
    cond_B = V <= 0.5 * total_volume(k, n)
    return AssumptionReport(True, bool(cond_A), bool(cond_B), K_le_k)


@dataclass(frozen=True)
class _DiameterFree:
    """Everything in C except the diameter factor."""

    R: float
    R_prime: float
    pair: RadialEigenpair
    ratio_R: float
    integral_num: float
    integral_den: float

    @property
    def base(self) -> float:
        return self.ratio_R * self.integral_num / self.integral_den


def _diameter_free(inp: BoundInput, config: ShootingConfig, pair=None) -> _DiameterFree:
    n, k, K = inp.dim, inp.k, inp.K
    R, R_prime = matched_radii(n, k, K, inp.volume)
    if pair is None:
        pair = first_neumann_eigenvalue(RadialProblem(k, n, R), config)
    ratio_R = sin_ratio(K, k, R) ** (n - 1)
    num = radial_integral(pair, k, R)
    den = num if (K == k and R_prime == R) else radial_integral(pair, K, R_prime)
    return _DiameterFree(R, R_prime, pair, ratio_R, num, den)


def _assemble(inp: BoundInput, parts: _DiameterFree, injectivity_radius=None) -> BoundBreakdown:
    n, k, K, d = inp.dim, inp.k, inp.K, inp.diameter
    if not d > 0:
        raise DomainError("diameter must be positive")
    if k > 0 and d > antipodal_distance(k):
        raise DomainError(f"diameter {d} exceeds pi/sqrt(k)")
    ratio_d = sin_ratio(K, k, d) ** (n - 1)
    C = parts.base * ratio_d
    wang = ratio_d * ratio_d
    mu = parts.pair.mu1
    report = validate_assumptions(n, k, K, inp.volume, d, injectivity_radius)
    return BoundBreakdown(
        R=parts.R,
        R_prime=parts.R_prime,
        mu1_ball=mu,
        ratio_R=parts.ratio_R,
        ratio_d=ratio_d,
        integral_num=parts.integral_num,
        integral_den=parts.integral_den,
        C=C,
        wang=wang,
        bound_value=C * mu,
        assumptions=report,
    )


def constant_C(
    inp: BoundInput,
    config: ShootingConfig = DEFAULT_CONFIG,
    injectivity_radius: Optional[float] = None,
    pair: Optional[RadialEigenpair] = None,
) -> BoundBreakdown:
    """All ingredients of C and the resulting bound C mu_1(B_k(R)).

    The angular factor of the two ball integrals cancels, so only the radial
    integrals of f^2 sin^(n-1) are formed. ``pair`` may be supplied to reuse an
    eigenpair (for instance a rescaled one); it must belong to B_k(R).
    The size conditions for k > 0 are evaluated and recorded, not enforced.
    """
    return _assemble(inp, _diameter_free(inp, config, pair), injectivity_radius)


def neumann_upper_bound(inp: BoundInput, config: ShootingConfig = DEFAULT_CONFIG) -> float:
    return constant_C(inp, config).bound_value


def crossover_diameter(
    n: int,
    k: float,
    K: float,
    V: float,
    d_max: float,
    config: ShootingConfig = DEFAULT_CONFIG,
    tol: float = 1e-8,
    samples: int = 400,
) -> Optional[float]:
    """Smallest d in (0, d_max] where C(d) meets Wang's constant, or None.

    Only the diameter factor of C changes with d, so the eigenproblem is solved
    once. With K < k < 0, C(d) - Wang(d) = r^(n-1) (base - r^(n-1)) with
    r = sin_K(d)/sin_k(d) increasing, hence C < Wang for every d past the root.
    """
    if not (K < k < 0):
        raise DomainError(f"crossover needs K < k < 0, got K={K}, k={k}")
    parts = _diameter_free(BoundInput(n, k, K, V, 1.0), config)

    def gap(d):
        ratio_d = sin_ratio(K, k, d) ** (n - 1)
        return parts.base * ratio_d - ratio_d * ratio_d

    ds = np.linspace(d_max / samples, d_max, samples)
    prev_d, prev_g = 0.0, parts.base - 1.0
    if prev_g <= 0:
        # C <= Wang already as d -> 0, so there is no crossing
        return None
    for d in ds:
        g = gap(d)
        if g <= 0:
            lo, hi = prev_d, d
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                if gap(mid) > 0:
                    lo = mid
                else:
                    hi = mid
            return 0.5 * (lo + hi)
        prev_d, prev_g = d, g
    return None


def gradient_integral(pair: RadialEigenpair, m: float, upper: float, k: Optional[float] = None) -> float:
    """Integral over [0, upper] of G(r) sin_m(r)^(n-1), G = f'^2 + (n-1) f^2/sin_k^2."""
    return radial_integral(pair, m, upper, weight=lambda r: gradient_energy_density(pair, r, k))
