"""Closed-form geometry of the simply connected space forms M_m.

Every function takes the curvature ``m`` as a plain float (units 1/length^2).
Scalars go through :mod:`math`; arrays are handled with numpy so the finite
element code can evaluate densities at thousands of quadrature points at once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .errors import DomainError, InfeasibleVolumeError

# |m| r^2 below this switches to the truncated Taylor series
SERIES_THRESHOLD = 1e-6
_SIN_COEFFS = tuple(1.0 / math.factorial(2 * j + 1) for j in range(6))
_COS_COEFFS = tuple(1.0 / math.factorial(2 * j) for j in range(6))
# slack allowed past pi/sqrt(m) before rejecting an argument
_ANTIPODE_SLACK = 1e-12


@dataclass(frozen=True)
class SpaceFormBall:
    """Geodesic ball B_m(R) of radius ``radius`` in the n-dimensional space form of curvature m."""

    curvature: float
    dim: int
    radius: float

    def __post_init__(self):
        if not math.isfinite(self.curvature):
            raise DomainError(f"curvature must be finite, got {self.curvature}")
        if int(self.dim) != self.dim or self.dim < 2:
            raise DomainError(f"dimension must be an integer >= 2, got {self.dim}")
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise DomainError(f"radius must be positive, got {self.radius}")
        if self.curvature > 0 and self.radius >= antipodal_distance(self.curvature):
            raise DomainError(
                f"radius {self.radius} is not below pi/sqrt(m) = {antipodal_distance(self.curvature)}"
            )

    @property
    def volume(self) -> float:
        return ball_volume(self)


def antipodal_distance(m: float) -> float:
    """pi/sqrt(m) for m > 0, infinity otherwise."""
    return math.pi / math.sqrt(m) if m > 0 else math.inf


def _check_domain(m, r):
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0) or np.any(np.isnan(r_arr)):
        raise DomainError("radial argument must be nonnegative")
    if m > 0:
        limit = antipodal_distance(m)
        if np.any(r_arr > limit * (1 + _ANTIPODE_SLACK)):
            raise DomainError(f"radial argument exceeds pi/sqrt(m) = {limit} for m = {m}")


def _series(m, r, coeffs, odd):
    # sum_j coeffs[j] (-m r^2)^j, multiplied by r for the sine family
    x = -m * r * r
    acc = coeffs[-1]
    for c in coeffs[-2::-1]:
        acc = acc * x + c
    return acc * r if odd else acc


def _sin_scalar(m: float, r: float) -> float:
    if abs(m) * r * r < SERIES_THRESHOLD:
        return _series(m, r, _SIN_COEFFS, True)
    if m > 0:
        s = math.sqrt(m)
        return math.sin(s * r) / s
    s = math.sqrt(-m)
    return math.sinh(s * r) / s


def _cos_scalar(m: float, r: float) -> float:
    if abs(m) * r * r < SERIES_THRESHOLD:
        return _series(m, r, _COS_COEFFS, False)
    if m > 0:
        return math.cos(math.sqrt(m) * r)
    return math.cosh(math.sqrt(-m) * r)


def _sin_array(m, r):
    small = abs(m) * r * r < SERIES_THRESHOLD
    out = _series(m, r, _SIN_COEFFS, True)
    if m > 0:
        s = math.sqrt(m)
        out = np.where(small, out, np.sin(s * r) / s)
    elif m < 0:
        s = math.sqrt(-m)
        out = np.where(small, out, np.sinh(s * r) / s)
    return out


def _cos_array(m, r):
    small = abs(m) * r * r < SERIES_THRESHOLD
    out = _series(m, r, _COS_COEFFS, False)
    if m > 0:
        out = np.where(small, out, np.cos(math.sqrt(m) * r))
    elif m < 0:
        out = np.where(small, out, np.cosh(math.sqrt(-m) * r))
    return out


def sin_m(m: float, r):
    """Generalized sine: sin(sqrt(m) r)/sqrt(m), r, or sinh(sqrt(-m) r)/sqrt(-m).

    Accepts a scalar or an array of radii. Near ``m r^2 = 0`` a six-term
    Taylor series is used so the result is continuous in ``m``.

    Raises
    ------
    DomainError
        If ``r < 0`` or, for ``m > 0``, ``r > pi/sqrt(m)``.
    """
    m = float(m)
    _check_domain(m, r)
    if np.ndim(r) == 0:
        return _sin_scalar(m, float(r))
    return _sin_array(m, np.asarray(r, dtype=float))


def cos_m(m: float, r):
    """Derivative of :func:`sin_m` in r; satisfies cos_m^2 + m sin_m^2 = 1."""
    m = float(m)
    _check_domain(m, r)
    if np.ndim(r) == 0:
        return _cos_scalar(m, float(r))
    return _cos_array(m, np.asarray(r, dtype=float))


def unit_sphere_area(n: int) -> float:
    """Area of the unit (n-1)-sphere, 2 pi^(n/2) / Gamma(n/2)."""
    if int(n) != n or n < 2:
        raise DomainError(f"dimension must be an integer >= 2, got {n}")
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def _radial_volume(m: float, n: int, R: float) -> float:
    val, _ = integrate.quad(
        lambda r: _sin_scalar(m, r) ** (n - 1), 0.0, R, epsabs=1e-14, epsrel=1e-13, limit=200
    )
    return val


def ball_volume(ball: SpaceFormBall) -> float:
    """Volume of B_m(R): unit_sphere_area(n) times the radial integral of sin_m^(n-1)."""
    return unit_sphere_area(ball.dim) * _radial_volume(ball.curvature, ball.dim, ball.radius)


def total_volume(m: float, n: int) -> float:
    """Volume of the whole space form; finite only for m > 0."""
    if m <= 0:
        return math.inf
    # area of the unit n-sphere scaled by m^(-n/2), in logs to survive tiny m
    log_v = math.log(2.0) + 0.5 * (n + 1) * math.log(math.pi) - math.lgamma(0.5 * (n + 1)) - 0.5 * n * math.log(m)
    return math.exp(log_v) if log_v < 709.0 else math.inf


def radius_from_volume(m: float, n: int, V: float) -> float:
    """Radius R of the ball in M_m (dimension n) whose volume equals V.

    Raises
    ------
    InfeasibleVolumeError
        If ``m > 0`` and V is at least the volume of the whole sphere.
    """
    m = float(m)
    if not (V > 0 and math.isfinite(V)):
        raise DomainError(f"volume must be positive and finite, got {V}")
    omega = unit_sphere_area(n)
    target = V / omega

    def gap(R):
        return _radial_volume(m, n, R) - target

    cap = math.inf
    if m > 0:
        total = total_volume(m, n)
        if V >= total:
            raise InfeasibleVolumeError(f"volume {V} is not below the total volume {total} of M_{m}")
        cap = antipodal_distance(m) * (1 - 1e-15)
    # the Euclidean radius is an upper bound for m <= 0 and a lower bound for m > 0
    hi = min((V / (omega / n)) ** (1.0 / n), cap)
    while hi < cap and gap(hi) < 0:
        hi = min(2.0 * hi, cap)
    if gap(hi) < 0:
        # V within rounding of the whole sphere
        raise InfeasibleVolumeError(f"volume {V} is not below the total volume of M_{m}")
    return optimize.brentq(gap, 0.0, hi, xtol=1e-300, rtol=8.9e-16, maxiter=500)


def sin_ratio(K: float, k: float, r):
    """sin_K(r) / sin_k(r) for K <= k; nondecreasing in r with limit 1 at r = 0."""
    if K > k:
        raise DomainError(f"sin_ratio needs K <= k, got K={K}, k={k}")
    if K == k:
        return 1.0 if np.ndim(r) == 0 else np.ones_like(np.asarray(r, dtype=float))
    if np.ndim(r) == 0:
        if r <= 0:
            if r < 0:
                raise DomainError("radial argument must be nonnegative")
            return 1.0
        return sin_m(K, r) / sin_m(k, r)
    r = np.asarray(r, dtype=float)
    safe = np.where(r > 0, r, 1.0)
    return np.where(r > 0, sin_m(K, safe) / sin_m(k, safe), 1.0)
