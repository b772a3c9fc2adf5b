"""The nine acceptance criteria, each with its stated tolerance and time budget."""
import json
import math
import time

import numpy as np

from eigenbound.bound import BoundInput, constant_C, crossover_diameter
from eigenbound.cli import corpus_files, run
from eigenbound.radial_eig import (
    RadialProblem,
    _solve_scaled,
    first_neumann_eigenvalue,
    monotonicity_report,
    mu1_ball,
)
from eigenbound.spaceform import SpaceFormBall, antipodal_distance, ball_volume, radius_from_volume, sin_ratio
from eigenbound.verifier.model import ConformalDomain
from eigenbound.verifier.proof import proof_chain_check
from eigenbound.verifier.revolution import gauss_curvature_range, surface_from_json
from eigenbound.verifier.verify import load_spec, verify_bound, verify_spec

import oracles


def test_hemisphere_closed_form(capsys, acceptance_record):
    _solve_scaled.cache_clear()
    t0 = time.perf_counter()
    code = run(["mu1-ball", "-k", "1", "-n", "2", "-R", repr(math.pi / 2)])
    elapsed = time.perf_counter() - t0
    mu = json.loads(capsys.readouterr().out)["mu1"]
    ok = code == 0 and abs(mu - 2.0) <= 1e-8 and elapsed < 1.0
    acceptance_record(1, "hemisphere mu1 = 2", ok, f"|mu - 2| = {abs(mu - 2):.1e}, {elapsed:.2f} s")
    assert ok


def test_bessel_oracle(acceptance_record):
    # reference zeros come from power series + bisection, not from the solver
    ref2 = oracles.first_jprime_zero(1) ** 2
    ref3 = oracles.first_spherical_j1_prime_zero() ** 2
    _solve_scaled.cache_clear()
    t0 = time.perf_counter()
    mu2 = mu1_ball(0.0, 2, 1.0)
    t2 = time.perf_counter() - t0
    t0 = time.perf_counter()
    mu3 = mu1_ball(0.0, 3, 1.0)
    t3 = time.perf_counter() - t0
    err = max(abs(mu2 - ref2), abs(mu3 - ref3))
    ok = err <= 1e-6 and abs(ref2 - 3.38996) < 1e-5 and abs(ref3 - 4.33296) < 1e-5 and max(t2, t3) < 1.0
    acceptance_record(2, "Euclidean Bessel oracle", ok, f"max err {err:.1e}, {t2:.2f} s / {t3:.2f} s")
    assert ok


def test_equal_curvature_constant(acceptance_record):
    rng = np.random.default_rng(20240601)
    t0 = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(2, 5))
        k = float(rng.uniform(-4.0, 1.0))
        R = float(rng.uniform(0.1, 0.95)) * min(antipodal_distance(k) / 2, 2.5)
        V = ball_volume(SpaceFormBall(k, n, R))
        d = float(rng.uniform(0.05, 0.99)) * min(antipodal_distance(k) / 2, 6.0)
        worst = max(worst, abs(constant_C(BoundInput(n, k, k, V, d)).C - 1.0))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed < 30
    acceptance_record(3, "C = 1 when k = K", ok, f"max |C - 1| = {worst:.1e} over 50 draws, {elapsed:.1f} s")
    assert ok


def test_sharpness_on_geodesic_disk(acceptance_record):
    t0 = time.perf_counter()
    rep = verify_bound(ConformalDomain.geodesic_disk(-1.0, 1.0, name="disk"), 0.02)
    elapsed = time.perf_counter() - t0
    m0, m1 = (abs(lvl.margin) for lvl in rep.levels)
    order = math.log2(m0 / m1)
    ok = m0 <= 0.02 and m1 < m0 and order >= 1.8 and rep.satisfied and elapsed < 120
    acceptance_record(
        4, "sharp on the hyperbolic disk", ok, f"margin {m0:.2e} -> {m1:.2e}, order {order:.2f}, {elapsed:.1f} s"
    )
    assert ok


def test_verification_corpus(acceptance_record):
    files = corpus_files()
    specs = [load_spec(f) for f in files]
    t0 = time.perf_counter()
    reports = [verify_spec(s) for s in specs]
    elapsed = time.perf_counter() - t0
    kinds = {
        "hyperbolic": sum(s["type"] == "conformal" and s["curvature"] == -1.0 and "fourier" in s for s in specs),
        "spherical": sum(s["type"] == "conformal" and s["curvature"] == 1.0 for s in specs),
        "revolution": sum(s["type"] == "revolution" for s in specs),
    }
    ranges_ok = all(
        (r.K, r.k) == gauss_curvature_range(surface_from_json(s)) for s, r in zip(specs, reports) if s["type"] == "revolution"
    )
    spherical_ok = all(
        r.breakdown.assumptions.requires_size_conditions and r.assumptions_ok
        for s, r in zip(specs, reports)
        if s["type"] == "conformal" and s["curvature"] > 0
    )
    all_ok = all(r.satisfied and r.assumptions_ok for r in reports)
    ok = (
        len(specs) >= 5
        and kinds["hyperbolic"] >= 1
        and kinds["spherical"] >= 1
        and kinds["revolution"] >= 2
        and ranges_ok
        and spherical_ok
        and all_ok
        and elapsed < 600
    )
    worst = min(r.margin for r in reports)
    acceptance_record(5, "verification corpus", ok, f"{len(specs)} scenarios, min margin {worst:.1e}, {elapsed:.1f} s")
    assert ok


def test_crossover(acceptance_record):
    t0 = time.perf_counter()
    d = crossover_diameter(2, -1.0, -4.0, 3.41228, 20.0)
    b = constant_C(BoundInput(2, -1.0, -4.0, 3.41228, 2 * d)) if d is not None else None
    elapsed = time.perf_counter() - t0
    ok = d is not None and d <= 20 and b.C < b.wang and elapsed < 60
    detail = f"d* = {d:.6f}, C(2d*) = {b.C:.4f} < Wang {b.wang:.4f}, {elapsed:.1f} s" if d else "no crossing"
    acceptance_record(6, "C drops below Wang's constant", ok, detail)
    assert ok


def test_monotonicity_properties(acceptance_record):
    rng = np.random.default_rng(7)
    t0 = time.perf_counter()
    bad = 0
    for _ in range(100):
        n = int(rng.integers(2, 5))
        k = float(rng.uniform(-4.0, 1.0))
        R = float(rng.uniform(0.05, 0.98)) * min(antipodal_distance(k) / 2, 3.0)
        rep = monotonicity_report(first_neumann_eigenvalue(RadialProblem(k, n, R)), slack=1e-9)
        bad += not (rep.f_increasing and rep.G_decreasing)
    ratio_bad = 0
    for _ in range(100):
        K = float(rng.uniform(-5.0, 1.0))
        k = K + float(rng.uniform(1e-3, 3.0))
        top = min(antipodal_distance(k) * 0.999, 5.0)
        r = np.linspace(0.0, top, 1000)
        q = sin_ratio(K, k, r)
        ratio_bad += not np.all(np.diff(q) >= -1e-12 * q[1:])
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and ratio_bad == 0 and elapsed < 60
    acceptance_record(
        7, "f increasing, G decreasing, sin ratio increasing", ok,
        f"{bad} / 100 eigenpairs and {ratio_bad} / 100 ratio grids fail, {elapsed:.1f} s",
    )
    assert ok


def test_proof_chain(acceptance_record):
    dom = ConformalDomain(-1.0, [1.0, 0.3], name="asymmetric")
    t0 = time.perf_counter()
    rep = proof_chain_check(dom, h=0.02)
    elapsed = time.perf_counter() - t0
    mean_zero = float(np.max(np.abs(rep.mean_zero)))
    ordered = rep.mu1_fem <= rep.rayleigh * (1 + rep.tolerance) and rep.rayleigh <= rep.mu1_ball * (1 + rep.tolerance)
    ok = rep.center.relative_residual <= 1e-8 and mean_zero <= 1e-8 and ordered and rep.ok and elapsed < 180
    acceptance_record(
        8, "proof chain on an asymmetric domain", ok,
        f"residual {rep.center.relative_residual:.1e}, mu_FEM {rep.mu1_fem:.5f} <= RQ {rep.rayleigh:.5f}"
        f" <= mu_ball {rep.mu1_ball:.5f}, {elapsed:.1f} s",
    )
    assert ok


def test_scaling_and_roundtrip(acceptance_record):
    rng = np.random.default_rng(11)
    t0 = time.perf_counter()
    scale_err = 0.0
    for _ in range(20):
        n = int(rng.integers(2, 5))
        k = float(rng.uniform(-4.0, 1.0))
        R = float(rng.uniform(0.1, 0.9)) * min(antipodal_distance(k), 3.0) / 2
        a, b = 4 * mu1_ball(k / 4, n, 2 * R), mu1_ball(k, n, R)
        scale_err = max(scale_err, abs(a - b) / b)
    trip_err = 0.0
    for _ in range(200):
        n = int(rng.integers(2, 6))
        m = float(rng.uniform(-4.0, 2.0))
        R = float(rng.uniform(0.02, 0.98)) * min(antipodal_distance(m), 3.0)
        back = radius_from_volume(m, n, ball_volume(SpaceFormBall(m, n, R)))
        trip_err = max(trip_err, abs(back - R) / R)
    elapsed = time.perf_counter() - t0
    ok = scale_err <= 1e-8 and trip_err <= 1e-10 and elapsed < 30
    acceptance_record(
        9, "scaling law and volume roundtrip", ok, f"scaling {scale_err:.1e}, roundtrip {trip_err:.1e}, {elapsed:.1f} s"
    )
    assert ok
