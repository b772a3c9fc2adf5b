"""Convergence of the P1 Neumann eigenvalue on geodesic disks against the shooting solver.

    python scripts/fem_convergence.py --kappa -1 --radius 1 --levels 4
"""
import argparse
import math
import time

from eigenbound.radial_eig import mu1_ball
from eigenbound.verifier.fem import fem_mu1
from eigenbound.verifier.mesh import mesh_star_domain
from eigenbound.verifier.model import ConformalDomain


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--kappa", type=float, default=-1.0)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--h0", type=float, default=0.1)
    p.add_argument("--levels", type=int, default=4)
    args = p.parse_args()

    dom = ConformalDomain.geodesic_disk(args.kappa, args.radius)
    exact = mu1_ball(args.kappa, 2, args.radius)
    print(f"shooting mu1 = {exact:.12f}")
    print(f"{'h':>8} {'vertices':>9} {'mu1_fem':>16} {'rel err':>10} {'order':>6} {'time':>6}")
    prev = None
    for i in range(args.levels):
        h = args.h0 / 2 ** i
        t0 = time.perf_counter()
        mesh = mesh_star_domain(dom, h)
        mu = fem_mu1(mesh, args.kappa).mu
        err = abs(mu - exact) / exact
        order = f"{math.log2(prev / err):6.2f}" if prev else " " * 6
        print(f"{h:8.4f} {mesh.n_vertices:9d} {mu:16.12f} {err:10.3e} {order} {time.perf_counter() - t0:6.2f}")
        prev = err


if __name__ == "__main__":
    main()
