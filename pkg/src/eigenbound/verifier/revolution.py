"""Rotationally symmetric caps dr^2 + phi(r)^2 dtheta^2, 0 <= r <= L.

The Neumann problem separates in Fourier modes e^{i l theta}; each mode is a
one-dimensional weighted problem solved with P1 elements.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy import integrate
from scipy.interpolate import CubicSpline
from scipy.sparse.csgraph import dijkstra

from ..errors import DomainError
from ..spaceform import antipodal_distance, cos_m, sin_m
from .fem import smallest_nonzero_eigenpair


class BallProfile:
    """phi = sin_kappa(r): a geodesic cap of the constant-curvature plane."""

    family = "ball"

    def __init__(self, curvature: float):
        self.curvature = float(curvature)

    def phi(self, r):
        return sin_m(self.curvature, r)

    def dphi(self, r):
        return cos_m(self.curvature, r)

    def d2phi(self, r):
        return -self.curvature * sin_m(self.curvature, r)

    def d3phi0(self) -> float:
        return -self.curvature

    def to_json(self) -> dict:
        return {"family": self.family, "curvature": self.curvature}


class PerturbedProfile(BallProfile):
    """phi = sin_kappa(r) + c r^3 exp(-((r - r0)/w)^2)."""

    family = "perturbed"

    def __init__(self, curvature: float, amplitude: float, center: float = 0.5, width: float = 0.25):
        super().__init__(curvature)
        self.amplitude = float(amplitude)
        self.center = float(center)
        self.width = float(width)

    def _bump(self, r):
        z = (np.asarray(r, dtype=float) - self.center) / self.width
        g = np.exp(-z * z)
        g1 = -2.0 * z / self.width * g
        g2 = (4.0 * z * z - 2.0) / self.width ** 2 * g
        return g, g1, g2

    def phi(self, r):
        g, _, _ = self._bump(r)
        return super().phi(r) + self.amplitude * np.asarray(r) ** 3 * g

    def dphi(self, r):
        r = np.asarray(r, dtype=float)
        g, g1, _ = self._bump(r)
        return super().dphi(r) + self.amplitude * (3 * r ** 2 * g + r ** 3 * g1)

    def d2phi(self, r):
        r = np.asarray(r, dtype=float)
        g, g1, g2 = self._bump(r)
        return super().d2phi(r) + self.amplitude * (6 * r * g + 6 * r ** 2 * g1 + r ** 3 * g2)

    def d3phi0(self) -> float:
        g0 = math.exp(-(self.center / self.width) ** 2)
        return -self.curvature + 6.0 * self.amplitude * g0

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "curvature": self.curvature,
            "amplitude": self.amplitude,
            "center": self.center,
            "width": self.width,
        }


class TableProfile:
    """Sampled phi, interpolated by a cubic spline clamped to phi'(0) = 1."""

    family = "table"

    def __init__(self, r, phi):
        r = np.asarray(r, dtype=float)
        phi = np.asarray(phi, dtype=float)
        if r[0] != 0 or abs(phi[0]) > 1e-14:
            raise DomainError("table profile must start at r = 0 with phi = 0")
        self.r = r
        self.values = phi
        self._spline = CubicSpline(r, phi, bc_type=((1, 1.0), "not-a-knot"))

    def phi(self, r):
        return self._spline(r)

    def dphi(self, r):
        return self._spline(r, 1)

    def d2phi(self, r):
        return self._spline(r, 2)

    def d3phi0(self) -> float:
        return float(self._spline(0.0, 3))

    def to_json(self) -> dict:
        return {"family": self.family, "r": self.r.tolist(), "phi": self.values.tolist()}


def profile_from_json(spec: dict):
    family = spec.get("family")
    if family == "ball":
        return BallProfile(spec["curvature"])
    if family == "perturbed":
        return PerturbedProfile(
            spec["curvature"], spec["amplitude"], spec.get("center", 0.5), spec.get("width", 0.25)
        )
    if family == "table":
        return TableProfile(spec["r"], spec["phi"])
    raise DomainError(f"unknown profile family {family!r}")


@dataclass(frozen=True, eq=False)
class RevolutionSurface:
    profile: object
    cap_radius: float
    name: str = ""

    def __post_init__(self):
        L = self.cap_radius
        if not L > 0:
            raise DomainError("cap radius must be positive")
        curvature = getattr(self.profile, "curvature", None)
        if curvature is not None and curvature > 0 and L >= antipodal_distance(curvature):
            raise DomainError("cap radius reaches the antipode of the model sphere")
        r = np.linspace(0, L, 2001)[1:]
        if np.any(self.profile.phi(r) <= 0):
            raise DomainError("profile must be positive on (0, L]")
        if abs(float(self.profile.dphi(0.0)) - 1.0) > 1e-8 or abs(float(self.profile.phi(0.0))) > 1e-12:
            raise DomainError("profile must satisfy phi(0) = 0, phi'(0) = 1")

    def area(self) -> float:
        val, _ = integrate.quad(lambda r: float(self.profile.phi(r)), 0.0, self.cap_radius, epsabs=1e-13, epsrel=1e-12)
        return 2 * math.pi * val


def gauss_curvature(surface: RevolutionSurface, r):
    """-phi''/phi, with the limit -phi'''(0) at the pole."""
    r = np.asarray(r, dtype=float)
    pos = r > 0
    safe = np.where(pos, r, 1.0)
    prof = surface.profile
    return np.where(pos, -prof.d2phi(safe) / prof.phi(safe), -prof.d3phi0())


def gauss_curvature_range(surface: RevolutionSurface, samples: int = 4001) -> tuple[float, float]:
    r = np.linspace(0, surface.cap_radius, samples)
    K = gauss_curvature(surface, r)
    return float(K.min()), float(K.max())


_GL4 = np.polynomial.legendre.leggauss(4)


def _mode_matrices(surface, ell, N):
    L = surface.cap_radius
    x = np.linspace(0, L, N + 1)
    a, b = x[:-1], x[1:]
    h = b - a
    q = 0.5 * (a + b)[:, None] + 0.5 * h[:, None] * _GL4[0][None, :]
    w = 0.5 * h[:, None] * _GL4[1][None, :]
    phi = surface.profile.phi(q)
    N0 = (b[:, None] - q) / h[:, None]
    N1 = (q - a[:, None]) / h[:, None]
    basis = (N0, N1)
    dbasis = (-1.0 / h[:, None], 1.0 / h[:, None])
    rows, cols, kv, mv = [], [], [], []
    idx = (np.arange(N), np.arange(1, N + 1))
    for i in range(2):
        for j in range(2):
            kij = np.sum(w * phi * dbasis[i] * dbasis[j], axis=1)
            if ell:
                kij = kij + ell * ell * np.sum(w * basis[i] * basis[j] / phi, axis=1)
            mij = np.sum(w * phi * basis[i] * basis[j], axis=1)
            rows.append(idx[i])
            cols.append(idx[j])
            kv.append(kij)
            mv.append(mij)
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    A = sp.coo_matrix((np.concatenate(kv), (rows, cols)), shape=(N + 1, N + 1)).tocsr()
    M = sp.coo_matrix((np.concatenate(mv), (rows, cols)), shape=(N + 1, N + 1)).tocsr()
    if ell:
        # u(0) = 0 for nonzero modes
        A = A[1:, 1:]
        M = M[1:, 1:]
    return A, M


def mode_eigenvalue(surface: RevolutionSurface, ell: int, grid: int = 2000) -> float:
    """Smallest eigenvalue of -(phi u')'/phi + l^2 u / phi^2 with u'(L) = 0.

    For l = 0 the constant is removed (mean-zero constraint).
    """
    A, M = _mode_matrices(surface, ell, grid)
    return smallest_nonzero_eigenpair(A, M, deflate_constant=(ell == 0), block=3, tol=1e-10).mu


def revolution_mu1(surface: RevolutionSurface, modes: int = 1, grid: int = 2000) -> float:
    """First nonzero Neumann eigenvalue of the cap: minimum over modes 0..max(1, modes)."""
    ells = range(0, max(1, modes) + 1)
    return min(mode_eigenvalue(surface, ell, grid) for ell in ells)


def intrinsic_diameter(surface: RevolutionSurface, n_r: int = 120, n_theta: int = 240) -> float:
    """Diameter estimate from shortest paths on an 8-neighbour (r, theta) grid graph.

    Edge lengths use the metric at the edge midpoint, so the estimate sits
    above the true value by the stencil's angular error. Capped at 2L, the
    length of the broken geodesic through the pole.
    """
    L = surface.cap_radius
    r = np.linspace(0, L, n_r + 1)[1:]
    dth = 2 * np.pi / n_theta
    dr = L / n_r

    def node(i, j):
        return 1 + i * n_theta + (j % n_theta)

    rows, cols, vals = [], [], []
    ii, jj = np.meshgrid(np.arange(n_r), np.arange(n_theta), indexing="ij")
    ii = ii.ravel()
    jj = jj.ravel()
    # angular neighbours on the same ring
    rows.append(node(ii, jj))
    cols.append(node(ii, jj + 1))
    vals.append(surface.profile.phi(r[ii]) * dth)
    for dj in (-1, 0, 1):
        mask = ii < n_r - 1
        i0, j0 = ii[mask], jj[mask]
        rm = 0.5 * (r[i0] + r[i0 + 1])
        rows.append(node(i0, j0))
        cols.append(node(i0 + 1, j0 + dj))
        vals.append(np.hypot(dr, surface.profile.phi(rm) * dth * abs(dj)))
    rows.append(np.zeros(n_theta, dtype=int))
    cols.append(node(0, np.arange(n_theta)))
    vals.append(np.full(n_theta, r[0]))
    n = 1 + n_r * n_theta
    G = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(n, n)).tocsr()
    dist = dijkstra(G, directed=False, indices=node(n_r - 1, 0))
    return float(min(np.max(dist), 2 * L))


def surface_from_json(spec: dict) -> RevolutionSurface:
    return RevolutionSurface(profile_from_json(spec["profile"]), float(spec["cap_radius"]), spec.get("name", ""))


def check_mode_order(surface: RevolutionSurface, grid: int = 1000, max_mode: int = 3) -> list[float]:
    return [mode_eigenvalue(surface, ell, grid) for ell in range(0, max_mode + 1)]
