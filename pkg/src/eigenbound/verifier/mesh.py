"""Triangulations of star-shaped conformal domains."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import Delaunay

from ..errors import DomainError
from .model import ConformalDomain

_GOLDEN = 0.5 * (math.sqrt(5.0) - 1.0)


@dataclass(frozen=True, eq=False)
class Mesh:
    vertices: np.ndarray
    triangles: np.ndarray
    boundary: np.ndarray
    h: float

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_triangles(self) -> int:
        return len(self.triangles)

    def signed_areas(self) -> np.ndarray:
        p = self.vertices[self.triangles]
        e1 = p[:, 1] - p[:, 0]
        e2 = p[:, 2] - p[:, 0]
        return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])

    def edges(self) -> np.ndarray:
        t = self.triangles
        e = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        return np.unique(np.sort(e, axis=1), axis=0)

    def max_edge_length(self) -> float:
        e = self.edges()
        return float(np.max(np.linalg.norm(self.vertices[e[:, 0]] - self.vertices[e[:, 1]], axis=1)))

    def midpoint_quadrature(self):
        """Edge-midpoint rule: points (3T, 2) and flat weights (3T,), exact for quadratics."""
        p = self.vertices[self.triangles]
        mids = np.concatenate([0.5 * (p[:, 0] + p[:, 1]), 0.5 * (p[:, 1] + p[:, 2]), 0.5 * (p[:, 2] + p[:, 0])])
        w = np.tile(self.signed_areas() / 3.0, 3)
        return mids, w

    def to_json(self) -> dict:
        return {
            "vertices": self.vertices.tolist(),
            "triangles": self.triangles.tolist(),
            "boundary": self.boundary.astype(int).tolist(),
            "h": self.h,
        }


def _orient(vertices, triangles):
    p = vertices[triangles]
    e1 = p[:, 1] - p[:, 0]
    e2 = p[:, 2] - p[:, 0]
    neg = e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0] < 0
    triangles = triangles.copy()
    triangles[neg] = triangles[neg][:, [0, 2, 1]]
    return triangles


def _smooth(vertices, triangles, boundary, iterations):
    n = len(vertices)
    e = np.concatenate([triangles[:, [0, 1]], triangles[:, [1, 2]], triangles[:, [2, 0]]])
    e = np.unique(np.sort(e, axis=1), axis=0)
    deg = np.bincount(e.ravel(), minlength=n).astype(float)
    interior = ~boundary
    for _ in range(iterations):
        acc = np.zeros_like(vertices)
        np.add.at(acc, e[:, 0], vertices[e[:, 1]])
        np.add.at(acc, e[:, 1], vertices[e[:, 0]])
        trial = vertices.copy()
        trial[interior] = acc[interior] / deg[interior, None]
        p = trial[triangles]
        e1 = p[:, 1] - p[:, 0]
        e2 = p[:, 2] - p[:, 0]
        if np.any(e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0] <= 0):
            break
        vertices = trial
    return vertices


def mesh_star_domain(domain: ConformalDomain, h: float, smoothing: int = 5) -> Mesh:
    """Ring mesh of a star-shaped domain with target edge length ``h`` (model units).

    Concentric rings are placed in a reference unit disk and mapped through
    t (cos, sin) -> center + t sigma(theta) (cos, sin). The reference disk is
    convex, so its Delaunay triangulation covers exactly the polygon spanned
    by the boundary ring; boundary vertices sit on s = sigma(theta).
    """
    if not h > 0:
        raise DomainError("mesh size must be positive")
    theta = np.linspace(0, 2 * np.pi, 4096, endpoint=False)
    sig = domain.sigma(theta)
    if np.min(sig) <= 0:
        raise DomainError("degenerate boundary radius")
    if h > 0.5 * np.min(sig):
        raise DomainError(f"mesh size {h} too large for minimum radius {np.min(sig)}")
    speed = float(np.max(np.hypot(sig, domain.sigma_prime(theta))))
    n_rings = max(2, math.ceil(float(np.max(sig)) / h))
    ref = [np.zeros((1, 2))]
    tt = [np.zeros(1)]
    th = [np.zeros(1)]
    for i in range(1, n_rings + 1):
        t = i / n_rings
        m = max(6, math.ceil(2 * np.pi * t * speed / h))
        phase = 2 * np.pi * ((i * _GOLDEN) % 1.0) / m
        ang = phase + 2 * np.pi * np.arange(m) / m
        ref.append(np.stack([t * np.cos(ang), t * np.sin(ang)], axis=1))
        tt.append(np.full(m, t))
        th.append(ang)
    ref = np.concatenate(ref)
    tt = np.concatenate(tt)
    th = np.concatenate(th)
    tri = Delaunay(ref).simplices.astype(np.int64)
    radius = tt * domain.sigma(th)
    verts = np.asarray(domain.center) + np.stack([radius * np.cos(th), radius * np.sin(th)], axis=1)
    boundary = tt == 1.0
    tri = _orient(verts, tri)
    verts = _smooth(verts, tri, boundary, smoothing)
    mesh = Mesh(verts, tri, boundary, h)
    if np.any(mesh.signed_areas() <= 0):
        raise DomainError("mapped mesh has inverted triangles; boundary too irregular for ring meshing")
    return mesh


def mesh_rectangle(x0: float, x1: float, y0: float, y1: float, h: float) -> Mesh:
    """Structured right-triangle mesh of an axis-aligned rectangle."""
    nx = max(1, math.ceil((x1 - x0) / h))
    ny = max(1, math.ceil((y1 - y0) / h))
    xs = np.linspace(x0, x1, nx + 1)
    ys = np.linspace(y0, y1, ny + 1)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    verts = np.stack([X.ravel(), Y.ravel()], axis=1)
    idx = np.arange((nx + 1) * (ny + 1)).reshape(nx + 1, ny + 1)
    a = idx[:-1, :-1].ravel()
    b = idx[1:, :-1].ravel()
    c = idx[1:, 1:].ravel()
    d = idx[:-1, 1:].ravel()
    tri = np.concatenate([np.stack([a, b, c], 1), np.stack([a, c, d], 1)])
    boundary = (
        np.isclose(verts[:, 0], x0) | np.isclose(verts[:, 0], x1) | np.isclose(verts[:, 1], y0) | np.isclose(verts[:, 1], y1)
    )
    return Mesh(verts, tri, boundary, h)
