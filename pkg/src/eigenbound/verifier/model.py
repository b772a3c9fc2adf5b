"""Conformal disk models of the constant-curvature planes.

The metric is lambda(x)^2 |dx|^2 with lambda(x) = 1 / (1 + kappa |x|^2 / 4):
stereographic coordinates for kappa > 0, the Poincare disk of radius
2/sqrt(-kappa) for kappa < 0 and the flat plane at kappa = 0. In the rescaled
coordinate y = sqrt|kappa| x / 2 the isometries fixing the model are Mobius
maps, which gives closed forms for distances and unit directions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import DomainError


def conformal_factor(kappa: float, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return 1.0 / (1.0 + 0.25 * kappa * np.sum(x * x, axis=-1))


def model_radius(kappa: float) -> float:
    """Euclidean radius of the model disk (infinite unless kappa < 0)."""
    return 2.0 / math.sqrt(-kappa) if kappa < 0 else math.inf


def _check_inside(kappa, *points):
    if kappa >= 0:
        return
    limit = model_radius(kappa)
    for p in points:
        if np.any(np.linalg.norm(np.asarray(p, dtype=float), axis=-1) >= limit):
            raise DomainError(f"point outside the model disk of radius {limit}")


def _to_complex(x):
    x = np.asarray(x, dtype=float)
    return x[..., 0] + 1j * x[..., 1]


def distance_from_origin(kappa: float, rho):
    """Geodesic distance from the origin to a point at Euclidean model radius rho."""
    rho = np.asarray(rho, dtype=float)
    if kappa > 0:
        c = math.sqrt(kappa)
        return 2.0 / c * np.arctan(c * rho / 2.0)
    if kappa < 0:
        c = math.sqrt(-kappa)
        return 2.0 / c * np.arctanh(c * rho / 2.0)
    return rho


def model_radius_of_distance(kappa: float, r):
    """Inverse of :func:`distance_from_origin`."""
    r = np.asarray(r, dtype=float)
    if kappa > 0:
        c = math.sqrt(kappa)
        return 2.0 / c * np.tan(c * r / 2.0)
    if kappa < 0:
        c = math.sqrt(-kappa)
        return 2.0 / c * np.tanh(c * r / 2.0)
    return r


def model_distance(kappa: float, x, y):
    """Geodesic distance between model points (broadcasts over leading axes)."""
    _check_inside(kappa, x, y)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if kappa == 0:
        return np.linalg.norm(x - y, axis=-1)
    c = math.sqrt(abs(kappa))
    a = 0.5 * c * x
    b = 0.5 * c * y
    diff2 = np.sum((a - b) ** 2, axis=-1)
    na = np.sum(a * a, axis=-1)
    nb = np.sum(b * b, axis=-1)
    if kappa < 0:
        # tanh(d/2) = |a - b| / |1 - conj(a) b|
        denom = np.sqrt(diff2 + (1.0 - na) * (1.0 - nb))
        return 2.0 / c * np.arctanh(np.sqrt(diff2) / denom)
    # tan(d/2) = |a - b| / |1 + conj(a) b|
    denom2 = np.maximum((1.0 + na) * (1.0 + nb) - diff2, 0.0)
    return 2.0 / c * np.arctan2(np.sqrt(diff2), np.sqrt(denom2))


def move_to_origin(kappa: float, p, x):
    """Image of x under the model isometry sending p to the origin.

    The differential of this map at p is a positive multiple of the identity,
    so directions at p are preserved.
    """
    p = np.asarray(p, dtype=float)
    x = np.asarray(x, dtype=float)
    if kappa == 0:
        return x - p
    c = math.sqrt(abs(kappa))
    a = complex(*(0.5 * c * p))
    z = _to_complex(0.5 * c * x)
    if kappa < 0:
        w = (z - a) / (1.0 - np.conj(a) * z)
    else:
        w = (z - a) / (1.0 + np.conj(a) * z)
    w = 2.0 / c * w
    return np.stack([w.real, w.imag], axis=-1)


def polar_about(kappa: float, p, x):
    """Geodesic distance r_p(x) and unit direction exp_p^{-1}(x) / r_p(x) at p.

    Directions are returned in the orthonormal frame at p aligned with the
    model axes. Points coinciding with p get direction zero.
    """
    w = move_to_origin(kappa, p, x)
    rho = np.linalg.norm(w, axis=-1)
    r = distance_from_origin(kappa, rho)
    safe = np.where(rho > 0, rho, 1.0)
    u = np.where((rho > 0)[..., None], w / safe[..., None], 0.0)
    return r, u


@dataclass(frozen=True)
class ConformalDomain:
    """Star-shaped region {center + s (cos t, sin t) : s < sigma(t)} in the conformal model.

    sigma(t) = a[0] + sum_j a[j] cos(j t) + b[j-1] sin(j t): ``a`` holds a0..aJ
    and ``b`` holds b1..bJ.
    """

    curvature: float
    a: tuple
    b: tuple = ()
    center: tuple = (0.0, 0.0)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        object.__setattr__(self, "center", tuple(float(v) for v in self.center))
        if not self.a:
            raise DomainError("boundary needs at least the constant coefficient a0")
        theta = np.linspace(0, 2 * np.pi, 2048, endpoint=False)
        s = self.sigma(theta)
        if np.any(s <= 0):
            raise DomainError("boundary radius function must be positive")
        pts = self.boundary_points(theta)
        if self.curvature < 0 and np.any(np.linalg.norm(pts, axis=-1) >= model_radius(self.curvature)):
            raise DomainError("domain leaves the hyperbolic model disk")

    def sigma(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.full_like(theta, self.a[0])
        for j, aj in enumerate(self.a[1:], start=1):
            out = out + aj * np.cos(j * theta)
        for j, bj in enumerate(self.b, start=1):
            out = out + bj * np.sin(j * theta)
        return out

    def sigma_prime(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros_like(theta)
        for j, aj in enumerate(self.a[1:], start=1):
            out = out - j * aj * np.sin(j * theta)
        for j, bj in enumerate(self.b, start=1):
            out = out + j * bj * np.cos(j * theta)
        return out

    def boundary_points(self, theta):
        s = self.sigma(theta)
        return np.asarray(self.center) + np.stack([s * np.cos(theta), s * np.sin(theta)], axis=-1)

    def contains(self, x) -> np.ndarray:
        d = np.asarray(x, dtype=float) - np.asarray(self.center)
        s = np.linalg.norm(d, axis=-1)
        return s < self.sigma(np.arctan2(d[..., 1], d[..., 0]))

    @classmethod
    def geodesic_disk(cls, kappa: float, radius: float, name: str = "") -> "ConformalDomain":
        """Disk of geodesic radius ``radius`` about the model origin."""
        return cls(kappa, (float(model_radius_of_distance(kappa, radius)),), name=name)
