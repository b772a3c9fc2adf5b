"""Independent reference computations used to produce frozen test values.

Nothing here imports the package's solvers: power series, bisection and a
dense finite-difference discretization are enough to check them.
"""
import math

import numpy as np
from scipy.linalg import eigh_tridiagonal


def sinh_series(x, terms=40):
    return sum(x ** (2 * j + 1) / math.factorial(2 * j + 1) for j in range(terms))


def cosh_series(x, terms=40):
    return sum(x ** (2 * j) / math.factorial(2 * j) for j in range(terms))


def bessel_j_series(nu, x, terms=60):
    """J_nu(x) for integer nu from its power series."""
    return sum(
        (-1) ** j / (math.factorial(j) * math.factorial(j + nu)) * (x / 2) ** (2 * j + nu)
        for j in range(terms)
    )


def bessel_j_prime_series(nu, x, terms=60):
    return sum(
        (-1) ** j * (2 * j + nu) / (math.factorial(j) * math.factorial(j + nu))
        * (x / 2) ** (2 * j + nu - 1) / 2
        for j in range(terms)
    )


def bisect(fn, lo, hi, tol=1e-15):
    flo = fn(lo)
    assert flo * fn(hi) < 0
    while hi - lo > tol * max(1.0, abs(hi)):
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def first_jprime_zero(nu):
    """First positive zero of J_nu' (nu >= 1), bracketed by a coarse scan."""
    xs = np.linspace(0.1, 10, 400)
    vals = [bessel_j_prime_series(nu, x) for x in xs]
    for a, b, fa, fb in zip(xs, xs[1:], vals, vals[1:]):
        if fa * fb < 0:
            return bisect(lambda x: bessel_j_prime_series(nu, x), a, b)
    raise RuntimeError("no zero found")


def spherical_j1_prime(x):
    # j1(x) = sin x / x^2 - cos x / x
    return (2 * math.cos(x)) / x ** 2 - (2 * math.sin(x)) / x ** 3 + math.sin(x) / x


def first_spherical_j1_prime_zero():
    return bisect(spherical_j1_prime, 1.0, 3.0)


def _sin_m(m, r):
    if m > 0:
        return np.sin(math.sqrt(m) * r) / math.sqrt(m)
    if m < 0:
        return np.sinh(math.sqrt(-m) * r) / math.sqrt(-m)
    return np.asarray(r, dtype=float)


def fd_radial(k, n, R, N):
    """Finite-difference first eigenpair of the radial Neumann problem on (0, R).

    Node-based symmetric scheme for -(w F')'/w + (n-1)/sin_k^2 F = mu F with
    w = sin_k^(n-1), F(0) = 0 and a half cell at r = R for F'(R) = 0.
    Returns (mu, r_nodes, F) with F normalized to F(R) = 1.
    """
    h = R / N
    r = np.arange(N + 1) * h
    rh = (np.arange(N) + 0.5) * h
    w_half = _sin_m(k, rh) ** (n - 1)
    rr = r[1:]
    w = _sin_m(k, rr) ** (n - 1)
    q = (n - 1) / _sin_m(k, rr) ** 2
    mass = w * h
    mass[-1] *= 0.5
    # stiffness: unknowns F_1..F_N
    diag = (w_half + np.append(w_half[1:], 0.0)) / h + q * mass
    off = -w_half[1:] / h
    d = 1.0 / np.sqrt(mass)
    vals, vecs = eigh_tridiagonal(diag * d * d, off * d[:-1] * d[1:], select="i", select_range=(0, 0))
    F = np.concatenate([[0.0], vecs[:, 0] * d])
    F /= F[-1]
    return vals[0], r, F


def fd_mu1(k, n, R, N=4000):
    """Richardson-extrapolated finite-difference eigenvalue (second order scheme)."""
    mu_a = fd_radial(k, n, R, N)[0]
    mu_b = fd_radial(k, n, R, 2 * N)[0]
    return (4 * mu_b - mu_a) / 3


def _simpson(y, h):
    return h / 3 * (y[0] + y[-1] + 4 * y[1:-1:2].sum() + 2 * y[2:-1:2].sum())


def _ball_volume(m, R, M=20000):
    r = np.linspace(0, R, M + 1)
    return 2 * math.pi * _simpson(_sin_m(m, r), R / M)


def _radius(m, V):
    if m > 0:
        hi = math.pi / math.sqrt(m) - 1e-12
    else:
        hi = 10.0
        while _ball_volume(m, hi) < V:
            hi *= 2
    return bisect(lambda R: _ball_volume(m, R) - V, 1e-9, hi, tol=1e-14)


def fd_constant_C(k, K, V, d, N=4000):
    """C for n = 2 from the finite-difference eigenfunction and Simpson quadrature."""
    R = _radius(k, V)
    Rp = _radius(K, V)

    def one(N):
        mu, r, F = fd_radial(k, 2, R, N)
        num = _simpson(F ** 2 * _sin_m(k, r), R / N)
        # denominator on [0, R'] via linear interpolation of F onto a fine uniform grid
        M = 2 * N
        s = np.linspace(0, Rp, M + 1)
        Fs = np.interp(s, r, F)
        den = _simpson(Fs ** 2 * _sin_m(K, s), Rp / M)
        ratio_R = _sin_m(K, R) / _sin_m(k, R)
        ratio_d = _sin_m(K, d) / _sin_m(k, d)
        return ratio_R * ratio_d * num / den, mu

    Ca, mua = one(N)
    Cb, mub = one(2 * N)
    return (4 * Cb - Ca) / 3, (4 * mub - mua) / 3, R, Rp
