"""First Neumann eigenvalue of a space-form ball by shooting on the radial ODE.

The radial part F of the first nonconstant eigenfunction of B_k(R) solves

    -F'' - (n-1) cos_k/sin_k F' + (n-1)/sin_k^2 F = mu F,   F(0) = 0, F'(R) = 0.

Internally the problem is rescaled to the unit interval s = r/R, where the
curvature becomes k R^2 and the eigenvalue mu R^2. The rescaled problem only
depends on (k R^2, n), so metric rescalings give bitwise-identical results.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq

from .errors import BracketError, DomainError, IntegrationError
from .spaceform import SpaceFormBall, _cos_scalar, _sin_scalar, sin_m


@dataclass(frozen=True)
class ShootingConfig:
    """Tolerances for the shooting solver.

    ``bisection_tolerance`` is relative to the rescaled eigenvalue mu R^2.
    ``bracket`` is also in rescaled units; ``None`` for the upper end means
    ``max(50, 4 * (n + 2))`` doubled until the first mode is passed.
    """

    start_fraction: float = 1e-6
    ode_tolerance: float = 1e-10
    bisection_tolerance: float = 1e-12
    bracket: tuple = (1e-8, None)
    max_step_fraction: float = 1.0 / 256

    def __post_init__(self):
        if not 0 < self.start_fraction <= 1e-4:
            raise DomainError("start_fraction must lie in (0, 1e-4]")
        if self.ode_tolerance <= 0 or self.bisection_tolerance <= 0:
            raise DomainError("tolerances must be positive")


DEFAULT_CONFIG = ShootingConfig()


@dataclass(frozen=True)
class RadialProblem:
    curvature: float
    dim: int
    radius: float

    def __post_init__(self):
        SpaceFormBall(self.curvature, self.dim, self.radius)

    @property
    def scaled_curvature(self) -> float:
        return self.curvature * self.radius * self.radius


@dataclass(frozen=True, eq=False)
class RadialEigenpair:
    """mu1 together with the sampled eigenfunction f, normalized so f(R) = 1."""

    problem: RadialProblem
    mu1: float
    grid: np.ndarray
    f_values: np.ndarray
    f_prime_values: np.ndarray
    miss: float = 0.0
    _spline: CubicHermiteSpline = field(default=None, repr=False)

    def __post_init__(self):
        if self._spline is None:
            spline = CubicHermiteSpline(self.grid, self.f_values, self.f_prime_values)
            object.__setattr__(self, "_spline", spline)

    @property
    def radius(self) -> float:
        return self.problem.radius

    def scaled(self, factor: float) -> "RadialEigenpair":
        """Same eigenpair with the eigenfunction multiplied by ``factor``."""
        return RadialEigenpair(
            self.problem, self.mu1, self.grid, factor * self.f_values, factor * self.f_prime_values, self.miss
        )


# ---------------------------------------------------------------------------
# Dormand-Prince 5(4)
# ---------------------------------------------------------------------------
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = _A[6]
# fifth minus fourth order weights
_E = (
    71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40,
)


def _rhs_factory(kappa, n, mu):
    nm1 = n - 1.0

    def rhs(s, F, dF):
        sn = _sin_scalar(kappa, s)
        cs = _cos_scalar(kappa, s)
        return dF, -nm1 * cs / sn * dF + (nm1 / (sn * sn) - mu) * F

    return rhs


def _series_start(kappa, n, mu, s0):
    # regular solution F = s + c3 s^3 + O(s^5)
    c3 = -(mu - 2.0 * (n - 1) * kappa / 3.0) / (2.0 * (n + 2))
    return s0 + c3 * s0 ** 3, 1.0 + 3.0 * c3 * s0 * s0


def _integrate(kappa, n, mu, config, record=False):
    """Integrate the rescaled ODE on [s0, 1]; returns (s, F, F') at accepted steps."""
    rhs = _rhs_factory(kappa, n, mu)
    s = config.start_fraction
    F, dF = _series_start(kappa, n, mu, s)
    rtol = config.ode_tolerance
    atol = rtol * 1e-3
    hmax = config.max_step_fraction
    h = min(0.1 * s, hmax)
    ss, Fs, dFs = [s], [F], [dF]
    k1 = rhs(s, F, dF)
    n_steps = 0
    while s < 1.0:
        if s + h > 1.0:
            h = 1.0 - s
        if h < 1e-14 * max(s, 1e-300):
            raise IntegrationError(f"step size underflow at s={s} (mu={mu})")
        ks = [k1]
        for i in range(1, 7):
            a = _A[i]
            yF = F + h * sum(a[j] * ks[j][0] for j in range(i))
            ydF = dF + h * sum(a[j] * ks[j][1] for j in range(i))
            ks.append(rhs(s + _C[i] * h, yF, ydF))
        # stage 7 evaluated at the fifth-order solution (FSAL)
        newF, newdF = yF, ydF
        errF = h * sum(_E[j] * ks[j][0] for j in range(7))
        errdF = h * sum(_E[j] * ks[j][1] for j in range(7))
        scF = atol + rtol * max(abs(F), abs(newF))
        scdF = atol + rtol * max(abs(dF), abs(newdF))
        err = math.sqrt(0.5 * ((errF / scF) ** 2 + (errdF / scdF) ** 2))
        if err <= 1.0:
            s += h
            F, dF = newF, newdF
            k1 = ks[6]
            n_steps += 1
            if record:
                ss.append(s)
                Fs.append(F)
                dFs.append(dF)
            fac = 5.0 if err == 0 else min(5.0, 0.9 * err ** -0.2)
        else:
            fac = max(0.2, 0.9 * err ** -0.2)
        h = min(h * fac, hmax)
        if n_steps > 10_000_000:
            raise IntegrationError("too many steps")
    if not record:
        ss, Fs, dFs = [s], [F], [dF]
    return ss, Fs, dFs


def _sign_changes(values):
    return int(np.count_nonzero(np.diff(np.signbit(np.asarray(values)))))


def _shoot_scaled(kappa, n, mu, config, record=False):
    ss, Fs, dFs = _integrate(kappa, n, mu, config, record=record)
    return dFs[-1], (ss, Fs, dFs)


def shoot(problem: RadialProblem, mu: float, config: ShootingConfig = DEFAULT_CONFIG) -> float:
    """Miss function F'(R) of the regular solution normalized by F ~ r at the origin.

    Continuous in ``mu``; it vanishes exactly at the eigenvalues of the radial problem.
    """
    if not mu > 0:
        raise DomainError(f"mu must be positive, got {mu}")
    R = problem.radius
    miss, _ = _shoot_scaled(problem.scaled_curvature, problem.dim, mu * R * R, config)
    return miss


def _below_first(kappa, n, mu, config):
    """True when mu (rescaled) lies strictly below the first eigenvalue.

    Below mu_1 the regular solution stays positive and still increases at s = 1.
    """
    miss, (ss, Fs, _) = _shoot_scaled(kappa, n, mu, config, record=True)
    return miss > 0 and min(Fs) > 0, miss, Fs


@lru_cache(maxsize=512)
def _solve_scaled(kappa, n, config):
    lo = config.bracket[0]
    hi = config.bracket[1]
    if hi is None:
        hi = max(50.0, 4.0 * (n + 2))
    below, _, _ = _below_first(kappa, n, lo, config)
    if not below:
        raise BracketError(f"lower bracket {lo} is not below the first eigenvalue")
    doublings = 0
    while True:
        below, miss_hi, Fs = _below_first(kappa, n, hi, config)
        if not below:
            break
        lo = hi
        hi *= 2.0
        doublings += 1
        if doublings > 20:
            raise BracketError(f"no sign change of the miss function up to mu R^2 = {hi}")
    # shrink until the upper end is past mu_1 but before any interior zero of F
    for _ in range(200):
        if miss_hi < 0 and min(Fs[1:]) > 0:
            break
        mid = 0.5 * (lo + hi)
        below, miss_mid, Fs_mid = _below_first(kappa, n, mid, config)
        if below:
            lo = mid
        else:
            hi, miss_hi, Fs = mid, miss_mid, Fs_mid
    else:
        raise BracketError("could not isolate the first eigenvalue")
    mu = brentq(
        lambda m: _shoot_scaled(kappa, n, m, config)[0],
        lo,
        hi,
        xtol=config.bisection_tolerance * hi,
        rtol=8.9e-16,
        maxiter=200,
    )
    miss, (ss, Fs, dFs) = _shoot_scaled(kappa, n, mu, config, record=True)
    if _sign_changes(Fs) or min(Fs) <= 0:
        raise BracketError("eigenfunction has an interior zero; not the first mode")
    return mu, miss, tuple(ss), tuple(Fs), tuple(dFs)


def first_neumann_eigenvalue(
    problem: RadialProblem, config: ShootingConfig = DEFAULT_CONFIG
) -> RadialEigenpair:
    """Smallest positive eigenvalue of the radial problem and its eigenfunction.

    The first mode is certified by requiring the integrated solution to have no
    zero on (0, R]. Results for a given (k R^2, n, config) are cached.
    """
    R = problem.radius
    mu, miss, ss, Fs, dFs = _solve_scaled(problem.scaled_curvature, problem.dim, config)
    ss = np.asarray(ss)
    Fs = np.asarray(Fs)
    dFs = np.asarray(dFs)
    norm = Fs[-1]
    grid = np.concatenate([[0.0], ss]) * R
    f = np.concatenate([[0.0], Fs]) / norm
    fp = np.concatenate([[1.0], dFs]) / (norm * R)
    return RadialEigenpair(problem, mu / (R * R), grid, f, fp, miss=miss / norm)


def mu1_ball(k: float, n: int, R: float, config: ShootingConfig = DEFAULT_CONFIG) -> float:
    return first_neumann_eigenvalue(RadialProblem(k, n, R), config).mu1


def eval_f(pair: RadialEigenpair, r):
    """Eigenfunction f extended by the constant f(R) beyond R.

    This is the continuous, positive (on r > 0) weight used for the center of mass.
    """
    r_arr = np.asarray(r, dtype=float)
    R = pair.radius
    out = np.where(r_arr >= R, pair.f_values[-1], pair._spline(np.clip(r_arr, 0.0, R)))
    return float(out) if np.ndim(r) == 0 else out


def eval_f_prime(pair: RadialEigenpair, r):
    """Derivative of :func:`eval_f`; zero beyond R (f'(R) = 0, so it is continuous)."""
    r_arr = np.asarray(r, dtype=float)
    R = pair.radius
    out = np.where(r_arr >= R, 0.0, pair._spline(np.clip(r_arr, 0.0, R), 1))
    return float(out) if np.ndim(r) == 0 else out


def gradient_energy_density(pair: RadialEigenpair, r, k=None):
    """G(r) = f'(r)^2 + (n-1) f(r)^2 / sin_k(r)^2, with its limit n f'(0)^2 at r = 0."""
    k = pair.problem.curvature if k is None else k
    n = pair.problem.dim
    r_arr = np.atleast_1d(np.asarray(r, dtype=float))
    f = np.atleast_1d(eval_f(pair, r_arr))
    fp = np.atleast_1d(eval_f_prime(pair, r_arr))
    pos = r_arr > 0
    sn = sin_m(k, np.where(pos, r_arr, 1.0))
    ratio = np.where(pos, f / sn, pair.f_prime_values[0])
    G = fp ** 2 + (n - 1) * ratio ** 2
    return float(G[0]) if np.ndim(r) == 0 else G


@dataclass(frozen=True)
class MonotonicityReport:
    min_df: float
    max_dG: float
    f_increasing: bool
    G_decreasing: bool
    slack: float


def monotonicity_report(pair: RadialEigenpair, slack: float = 1e-9) -> MonotonicityReport:
    """Check on the solver grid that f increases and G = f'^2 + (n-1) f^2/sin_k^2 decreases.

    ``slack`` is absolute for f (which runs from 0 to 1) and relative to max G
    for G, so the verdict does not depend on how f is normalized.
    """
    f = pair.f_values
    G = gradient_energy_density(pair, pair.grid)
    df = np.diff(f) / abs(f[-1])
    dG = np.diff(G) / np.max(np.abs(G))
    min_df = float(df.min())
    max_dG = float(dG.max())
    return MonotonicityReport(min_df, max_dG, min_df >= -slack, max_dG <= slack, slack)

