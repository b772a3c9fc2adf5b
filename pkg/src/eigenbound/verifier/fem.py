"""Piecewise-linear Neumann eigensolver on conformal-model meshes.

In two dimensions the Dirichlet energy is conformally invariant, so the
stiffness matrix is the flat one for every curvature; only the mass matrix
carries the conformal weight lambda^2.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from ..errors import ConvergenceError
from .mesh import Mesh
from .model import ConformalDomain, conformal_factor, model_distance


def assemble_stiffness(mesh: Mesh) -> sp.csr_matrix:
    """Flat P1 stiffness matrix (independent of curvature)."""
    p = mesh.vertices[mesh.triangles]
    area = mesh.signed_areas()
    # gradient of the barycentric coordinate i is the rotated opposite edge / (2 area)
    e = np.stack([p[:, 2] - p[:, 1], p[:, 0] - p[:, 2], p[:, 1] - p[:, 0]], axis=1)
    local = np.einsum("tid,tjd->tij", e, e) / (4.0 * area)[:, None, None]
    return _scatter(mesh, local)


def assemble_mass(mesh: Mesh, kappa: float) -> sp.csr_matrix:
    """Consistent P1 mass matrix weighted by lambda^2, edge-midpoint quadrature."""
    p = mesh.vertices[mesh.triangles]
    area = mesh.signed_areas()
    mids = np.stack([0.5 * (p[:, 0] + p[:, 1]), 0.5 * (p[:, 1] + p[:, 2]), 0.5 * (p[:, 2] + p[:, 0])], axis=1)
    w = conformal_factor(kappa, mids) ** 2 * (area / 3.0)[:, None]
    # barycentric values at the three midpoints: rows = midpoint, cols = vertex
    phi = np.array([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5], [0.5, 0.0, 0.5]])
    local = np.einsum("tq,qi,qj->tij", w, phi, phi)
    return _scatter(mesh, local)


def _scatter(mesh, local):
    t = mesh.triangles
    rows = np.repeat(t, 3, axis=1).ravel()
    cols = np.tile(t, (1, 3)).ravel()
    n = mesh.n_vertices
    return sp.coo_matrix((local.ravel(), (rows, cols)), shape=(n, n)).tocsr()


@dataclass(frozen=True, eq=False)
class EigenResult:
    mu: float
    vector: np.ndarray
    iterations: int
    residual: float


def smallest_nonzero_eigenpair(
    A, M, deflate_constant: bool = True, block: int = 6, tol: float = 1e-10, maxiter: int = 500, seed: int = 0
) -> EigenResult:
    """Smallest eigenvalue of A u = mu M u on the M-complement of the constants.

    Block shift-invert inverse iteration with Rayleigh-Ritz. The shift
    A + eps M (eps tiny against the spectral scale) keeps the factorization
    nonsingular; the constant mode is removed after every solve by
    M-orthogonal projection, which is the discrete form of the mean-zero
    constraint.
    """
    A = sp.csc_matrix(A)
    M = sp.csc_matrix(M)
    n = A.shape[0]
    eps = 1e-8 * A.diagonal().sum() / M.diagonal().sum()
    lu = splu((A + eps * M).tocsc())
    ones = np.ones(n)
    M1 = M @ ones
    denom = ones @ M1

    def project(X):
        if not deflate_constant:
            return X
        return X - np.outer(ones, (M1 @ X) / denom)

    block = min(block, n - 1)
    rng = np.random.default_rng(seed)
    X = project(rng.standard_normal((n, block)))
    residual = np.inf
    prev_mu = np.inf
    stalled = 0
    for it in range(1, maxiter + 1):
        Y = project(lu.solve(M @ X))
        Q, _ = np.linalg.qr(Y)
        Ar = Q.T @ (A @ Q)
        Mr = Q.T @ (M @ Q)
        vals, vecs = sla.eigh(0.5 * (Ar + Ar.T), 0.5 * (Mr + Mr.T))
        X = Q @ vecs
        x = X[:, 0]
        mu = vals[0]
        Ax = A @ x
        Mx = M @ x
        residual = np.linalg.norm(Ax - mu * Mx) / (np.linalg.norm(Ax) + abs(mu) * np.linalg.norm(Mx))
        # the residual can floor out above tol through rounding; a frozen Ritz value with a
        # small residual is accepted (the eigenvalue error is quadratic in the residual)
        stalled = stalled + 1 if abs(mu - prev_mu) <= 1e-11 * abs(mu) else 0
        prev_mu = mu
        if residual <= tol or (stalled >= 3 and residual <= 1e-7):
            x = x / np.sqrt(x @ Mx)
            return EigenResult(float(mu), x, it, float(residual))
    raise ConvergenceError(
        f"inverse iteration stopped after {maxiter} iterations (residual {residual:.3e})",
        iterations=maxiter,
        residual=residual,
    )


def fem_mu1(mesh: Mesh, kappa: float, tol: float = 1e-10) -> EigenResult:
    """First nonzero Neumann eigenvalue of the mesh in the model of curvature kappa."""
    A = assemble_stiffness(mesh)
    M = assemble_mass(mesh, kappa)
    return smallest_nonzero_eigenpair(A, M, tol=tol)


def domain_volume(mesh: Mesh, kappa: float) -> float:
    """Sum over triangles of flat area times the midpoint average of lambda^2."""
    pts, w = mesh.midpoint_quadrature()
    return float(np.sum(w * conformal_factor(kappa, pts) ** 2))


def domain_diameter(domain: ConformalDomain, mesh: Mesh, kappa: float = None) -> float:
    """Largest geodesic distance between boundary vertices."""
    kappa = domain.curvature if kappa is None else kappa
    b = mesh.vertices[mesh.boundary]
    best = 0.0
    # chunk rows so the pair matrix stays small
    for start in range(0, len(b), 256):
        d = model_distance(kappa, b[start:start + 256, None, :], b[None, :, :])
        best = max(best, float(np.max(d)))
    return best
