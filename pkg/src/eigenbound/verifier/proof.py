"""Center of mass and the inequality chain behind the bound, on conformal domains.

Test functions are h(r_p) u_i where u = exp_p^{-1}(x)/r_p(x) and h is the
ball eigenfunction extended by its boundary value. In constant curvature
kappa the angular part of |grad(h u_i)|^2 summed over i equals
(n-1) h^2 / sin_kappa^2, so every integral reduces to a radial weight
evaluated at the mesh quadrature points.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..bound import BoundInput, constant_C, gradient_integral, radial_integral
from ..errors import ConvergenceError, DomainError
from ..radial_eig import RadialEigenpair, RadialProblem, eval_f, eval_f_prime, first_neumann_eigenvalue
from ..spaceform import sin_m, unit_sphere_area
from .fem import assemble_mass, assemble_stiffness, domain_diameter, domain_volume, fem_mu1
from .mesh import Mesh, mesh_star_domain
from .model import ConformalDomain, conformal_factor, polar_about


@dataclass(frozen=True)
class CenterOfMass:
    point: np.ndarray
    moment: np.ndarray
    weight_integral: float
    iterations: int
    inside: bool

    @property
    def relative_residual(self) -> float:
        return float(np.linalg.norm(self.moment) / self.weight_integral)


class _Quadrature:
    def __init__(self, mesh: Mesh, kappa: float):
        pts, w = mesh.midpoint_quadrature()
        self.points = pts
        self.weights = w * conformal_factor(kappa, pts) ** 2
        self.kappa = kappa

    def moment(self, p, h_func):
        r, u = polar_about(self.kappa, p, self.points)
        hw = self.weights * h_func(r)
        return hw @ u, float(np.sum(hw))


def center_of_mass(
    domain: ConformalDomain,
    mesh: Mesh,
    h_func: Callable,
    tol: float = 1e-8,
    max_iter: int = 200,
    quadrature: Optional[_Quadrature] = None,
) -> CenterOfMass:
    """Point p with integral of h(r_p) exp_p^{-1}(x)/r_p(x) over the domain equal to zero.

    Newton iteration in model coordinates with a finite-difference Jacobian
    and backtracking, started at the star center. If it stalls, it restarts
    from the best point of a coarse grid search on |m|. Stops when
    |m(p)| <= tol * (integral of h).
    """
    kappa = domain.curvature
    quad = quadrature or _Quadrature(mesh, kappa)
    scale = float(np.max(domain.sigma(np.linspace(0, 2 * np.pi, 256))))

    def newton(p, budget):
        m, total = quad.moment(p, h_func)
        for it in range(1, budget + 1):
            if np.linalg.norm(m) <= tol * total:
                return p, m, total, it - 1, True
            eps = 1e-6 * scale
            J = np.empty((2, 2))
            for j in range(2):
                dp = np.zeros(2)
                dp[j] = eps
                J[:, j] = (quad.moment(p + dp, h_func)[0] - quad.moment(p - dp, h_func)[0]) / (2 * eps)
            step = -np.linalg.solve(J, m)
            t = 1.0
            for _ in range(30):
                trial = p + t * step
                if domain.contains(trial):
                    m_new, total_new = quad.moment(trial, h_func)
                    if np.linalg.norm(m_new) < np.linalg.norm(m):
                        break
                t *= 0.5
            else:
                return p, m, total, it, False
            p, m, total = trial, m_new, total_new
        return p, m, total, budget, np.linalg.norm(m) <= tol * total

    p0 = np.asarray(domain.center, dtype=float)
    p, m, total, its, ok = newton(p0, max_iter)
    if not ok:
        # coarse search over a grid of candidates inside the domain
        g = np.linspace(-scale, scale, 21)
        cand = np.asarray(domain.center) + np.stack(np.meshgrid(g, g), -1).reshape(-1, 2)
        cand = cand[domain.contains(cand)]
        norms = [np.linalg.norm(quad.moment(c, h_func)[0]) for c in cand]
        p, m, total, its2, ok = newton(cand[int(np.argmin(norms))], max_iter)
        its += its2
    if not ok:
        raise ConvergenceError(
            f"center of mass not found: |m| = {np.linalg.norm(m):.3e}", iterations=its, residual=np.linalg.norm(m)
        )
    return CenterOfMass(p, m, total, its, bool(domain.contains(p)))


@dataclass
class ChainStep:
    name: str
    smaller: float
    larger: float

    def __post_init__(self):
        self.smaller = float(self.smaller)
        self.larger = float(self.larger)

    @property
    def slack(self) -> float:
        return (self.larger - self.smaller) / abs(self.larger)

    def holds(self, tolerance: float) -> bool:
        return bool(self.slack >= -tolerance)


@dataclass
class ChainReport:
    """Quantities of the proof evaluated on one mesh.

    ``rayleigh`` is the Rayleigh quotient of the test functions h u_i,
    ``rayleigh_bound`` replaces sin_kappa by sin_k in its numerator, and
    ``rayleigh_discrete`` is the quotient of their P1 interpolants after
    removing the mean (an exact upper bound for the discrete mu_1).
    """

    center: CenterOfMass
    mean_zero: np.ndarray
    mu1_fem: float
    rayleigh: float
    rayleigh_bound: float
    rayleigh_discrete: float
    mu1_ball: float
    bound_value: float
    C: float
    chain_end_mismatch: float
    steps: list = field(default_factory=list)
    tolerance: float = 2e-3

    @property
    def ok(self) -> bool:
        return all(s.holds(self.tolerance) for s in self.steps)

    def as_dict(self) -> dict:
        return {
            "center": self.center.point.tolist(),
            "center_residual": self.center.relative_residual,
            "center_inside": self.center.inside,
            "mean_zero": self.mean_zero.tolist(),
            "mu1_fem": self.mu1_fem,
            "rayleigh": self.rayleigh,
            "rayleigh_bound": self.rayleigh_bound,
            "rayleigh_discrete": self.rayleigh_discrete,
            "mu1_ball": self.mu1_ball,
            "C": self.C,
            "chain_end_mismatch": self.chain_end_mismatch,
            "bound_value": self.bound_value,
            "tolerance": self.tolerance,
            "steps": [
                {"name": s.name, "smaller": s.smaller, "larger": s.larger, "slack": s.slack, "holds": s.holds(self.tolerance)}
                for s in self.steps
            ],
            "ok": self.ok,
        }


def proof_chain_check(
    domain: ConformalDomain,
    inp: Optional[BoundInput] = None,
    h: float = 0.02,
    mesh: Optional[Mesh] = None,
    k: Optional[float] = None,
    K: Optional[float] = None,
    tolerance: float = 2e-3,
) -> ChainReport:
    """Evaluate every inequality of the argument on a meshed domain.

    The domain lives in the model of curvature kappa, which must satisfy
    K <= kappa <= k. Without ``inp`` the volume and diameter are measured on
    the mesh and (k, K) default to (kappa, kappa). Slacks are relative and a
    step holds when its slack is at least ``-tolerance``.
    """
    kappa = domain.curvature
    mesh = mesh if mesh is not None else mesh_star_domain(domain, h)
    if inp is None:
        k = kappa if k is None else k
        K = kappa if K is None else K
        inp = BoundInput(2, k, K, domain_volume(mesh, kappa), domain_diameter(domain, mesh, kappa))
    n, k, K = inp.dim, inp.k, inp.K
    if n != 2:
        raise DomainError("the conformal verifier is two-dimensional")
    if not (K <= kappa <= k):
        raise DomainError(f"need K <= kappa <= k, got {K}, {kappa}, {k}")
    breakdown = constant_C(inp)
    pair: RadialEigenpair = first_neumann_eigenvalue(RadialProblem(k, n, breakdown.R))

    def hf(r):
        return eval_f(pair, r)

    quad = _Quadrature(mesh, kappa)
    com = center_of_mass(domain, mesh, hf, quadrature=quad)
    p = com.point
    r, u = polar_about(kappa, p, quad.points)
    w = quad.weights
    hv = eval_f(pair, r)
    hp = eval_f_prime(pair, r)
    pos = r > 0
    safe = np.where(pos, r, 1.0)
    f0 = pair.f_prime_values[0]

    def h_over_sin(m):
        return np.where(pos, hv / sin_m(m, safe), f0)

    D1 = float(np.sum(w * hv ** 2))
    N0 = float(np.sum(w * (hp ** 2 + (n - 1) * h_over_sin(kappa) ** 2)))
    N1 = float(np.sum(w * (hp ** 2 + (n - 1) * h_over_sin(k) ** 2)))
    mean_zero = (w * hv) @ u / com.weight_integral

    omega = unit_sphere_area(n)
    R, Rp = breakdown.R, breakdown.R_prime
    ratio_d = breakdown.ratio_d
    ratio_R = breakdown.ratio_R
    dens = lambda m: np.where(pos, sin_m(m, safe) / sin_m(kappa, safe), 1.0) ** (n - 1)
    F2 = float(np.sum(w * hv ** 2 * dens(k)))
    F3 = float(np.sum(w * hv ** 2 * dens(K))) / ratio_d
    F4 = omega * radial_integral(pair, K, Rp) / ratio_d
    N2 = omega * gradient_integral(pair, kappa, R)
    N3 = omega * gradient_integral(pair, K, R)
    N4 = ratio_R * omega * gradient_integral(pair, k, R)

    eig = fem_mu1(mesh, kappa)
    A = assemble_stiffness(mesh)
    M = assemble_mass(mesh, kappa)
    rv, uv = polar_about(kappa, p, mesh.vertices)
    hv_vert = eval_f(pair, rv)
    ones = np.ones(mesh.n_vertices)
    M1 = M @ ones
    num = den = 0.0
    for i in range(n):
        v = hv_vert * uv[:, i]
        v = v - ones * (M1 @ v) / (M1 @ ones)
        num += v @ (A @ v)
        den += v @ (M @ v)

    rayleigh = N0 / D1
    rayleigh_bound = N1 / D1
    steps = [
        ChainStep("mu1_fem <= rayleigh_discrete", eig.mu, num / den),
        ChainStep("mu1_fem <= rayleigh", eig.mu, rayleigh),
        ChainStep("rayleigh <= rayleigh_bound (sin_k comparison)", rayleigh, rayleigh_bound),
        ChainStep("grad: int_Omega G <= int_B(R) G", N1, N2),
        ChainStep("grad: int_B(R) G sin_kappa <= int G sin_K", N2, N3),
        ChainStep("grad: int G sin_K <= ratio_R int G sin_k", N3, N4),
        ChainStep("fun: int h^2 sin_k <= int_Omega h^2", F2, D1),
        ChainStep("fun: ratio_d^-1 int h^2 sin_K <= int h^2 sin_k", F3, F2),
        ChainStep("fun: ratio_d^-1 int_B_K(R') h^2 <= ratio_d^-1 int_Omega_K h^2", F4, F3),
        ChainStep("rayleigh_bound <= C mu1_ball", rayleigh_bound, N4 / F4),
    ]
    return ChainReport(
        center=com,
        mean_zero=mean_zero,
        mu1_fem=eig.mu,
        rayleigh=rayleigh,
        rayleigh_bound=rayleigh_bound,
        rayleigh_discrete=num / den,
        mu1_ball=breakdown.mu1_ball,
        bound_value=breakdown.bound_value,
        C=breakdown.C,
        chain_end_mismatch=abs(N4 / F4 - breakdown.bound_value) / breakdown.bound_value,
        steps=steps,
        tolerance=tolerance,
    )
